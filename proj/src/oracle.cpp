#include "qgraph/oracle.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qgraph {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> raw_phases(const QuantumGraph& graph, double k) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(build_smatrix(graph, k),
                                                  /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw IntegrityError(fmt::format("eigensolver failed at k = {}", k));
  std::vector<double> out;
  for (int j = 0; j < solver.eigenvalues().size(); ++j) {
    double s = std::arg(solver.eigenvalues()[j]);
    if (s <= 0.0) s += kTwoPi;
    out.push_back(s);
  }
  return out;
}

}  // namespace

EigenphaseSet eigenphases(const QuantumGraph& graph, double k, double boundary_tol) {
  EigenphaseSet set{k, raw_phases(graph, k)};
  for (double s : set.phases)
    if (s < boundary_tol || kTwoPi - s < boundary_tol)
      throw OnRootError(fmt::format(
          "k = {:.15g} is (within {:.0e}) a spectral point; evaluate the "
          "staircase at a shifted k",
          k, boundary_tol));
  return set;
}

StaircaseValue staircase_exact(const QuantumGraph& graph,
                               const TrigPolynomial& trig, double k) {
  const EigenphaseSet set = eigenphases(graph, k);
  StaircaseValue v;
  v.k = k;
  v.n_bar = trig.omega0 * k / std::numbers::pi - (trig.mu + 1 + trig.gamma0);
  double sum = 0.0;
  for (double s : set.phases) sum += (std::numbers::pi - s) / 2.0;
  v.n_fluct = sum / std::numbers::pi;
  v.n_total = v.n_bar + v.n_fluct;
  return v;
}

double find_root_bisection(const TrigPolynomial& trig, int n, double tol) {
  if (!(tol >= 1e-14)) throw DomainError("bisection tolerance must be >= 1e-14");
  const RootCell cell = root_cell(trig, n);
  const auto f = [&](double k) { return trig.evaluate(k); };
  const auto b = bisect(f, cell.k_hat_lo, cell.k_hat_hi, tol);
  if (!b)
    throw IntegrityError(fmt::format(
        "no sign change over root cell {} = ({}, {})", n, cell.k_hat_lo,
        cell.k_hat_hi));
  return b->midpoint();
}

int count_roots_below(const TrigPolynomial& trig, double K) {
  // Cell n spans [k_hat_{n-1}, k_hat_n); find n with K in it.
  const double width = std::numbers::pi / trig.omega0;
  const int n = static_cast<int>(
      std::floor(K / width - (trig.mu + trig.gamma0))) ;
  if (n < 1) {
    // K lies before the first cell (or in cell 0); roots with n >= 1 are all
    // above k_hat_0.
    return 0;
  }
  const double kn = find_root_bisection(trig, n);
  return (n - 1) + (kn < K ? 1 : 0);
}

WeylReport weyl_check(const TrigPolynomial& trig, double K) {
  if (!trig.is_regular())
    throw RegularityError("Weyl check needs a regular spectral equation");
  WeylReport r;
  r.K = K;
  r.count = count_roots_below(trig, K);
  r.n_bar = trig.omega0 * K / std::numbers::pi - (trig.mu + 1 + trig.gamma0);
  r.deviation = r.count - r.n_bar;
  r.within_bound = std::abs(r.deviation) <= 1.0 + 1e-12;
  return r;
}

int mu_from_eigenphases(const QuantumGraph& graph, const TrigPolynomial& trig) {
  const double k = 1e-7 * std::numbers::pi / trig.omega0;
  double sum = 0.0;
  for (double s : raw_phases(graph, k)) sum += s;
  const double mu = graph.num_bonds() - 1 - trig.gamma0 - sum / kTwoPi +
                    trig.omega0 * k / std::numbers::pi;
  const double rounded = std::round(mu);
  if (std::abs(mu - rounded) > 1e-5)
    throw IntegrityError(fmt::format(
        "eigenphase sum gives non-integer counting offset {}", mu));
  return static_cast<int>(rounded);
}

}  // namespace qgraph
