#pragma once

#include <vector>

#include "qgraph/bisection.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/trig_poly.hpp"

namespace qgraph {

/// Eigenphases of S(k), each reduced to (0, 2pi].
struct EigenphaseSet {
  double k = 0.0;
  std::vector<double> phases;
};

/// Throws OnRootError if any phase lies within `boundary_tol` of 0 mod 2pi.
EigenphaseSet eigenphases(const QuantumGraph& graph, double k,
                          double boundary_tol = 1e-10);

struct StaircaseValue {
  double k = 0.0;
  double n_bar = 0.0;
  double n_fluct = 0.0;
  double n_total = 0.0;
};

/// N(k) = omega0 k/pi - (mu + 1 + gamma0) + (1/pi) sum_j (pi - sigma_j)/2,
/// the closed form of the periodic-orbit trace sum.
StaircaseValue staircase_exact(const QuantumGraph& graph,
                               const TrigPolynomial& trig, double k);

/// Certified zero of the n-th root cell. Bisection on the cell endpoints,
/// which carry opposite signs for every regular spectral equation.
double find_root_bisection(const TrigPolynomial& trig, int n, double tol = 1e-12);

/// Number of zeros k_n (n >= 1) strictly below K, from cell geometry plus a
/// bisection in the cell containing K.
int count_roots_below(const TrigPolynomial& trig, double K);

struct WeylReport {
  double K = 0.0;
  int count = 0;
  double n_bar = 0.0;
  double deviation = 0.0;
  bool within_bound = true;  // |count - n_bar| <= 1
};

WeylReport weyl_check(const TrigPolynomial& trig, double K);

/// mu fixed by the eigenphases of U: the value for which the trace-formula
/// staircase vanishes just above k = 0. Used for non-regular graphs, where no
/// root-cell scan exists.
int mu_from_eigenphases(const QuantumGraph& graph, const TrigPolynomial& trig);

/// Dense sign-change scan of f over [lo, hi] with `steps` uniform samples,
/// each bracket refined by bisection to `tol`. Serves graphs of any
/// regularity.
template <typename F>
std::vector<double> dense_scan_roots(F&& f, double lo, double hi, int steps,
                                     double tol = 1e-13) {
  std::vector<double> roots;
  const double h = (hi - lo) / steps;
  double x0 = lo, f0 = f(x0);
  for (int i = 1; i <= steps; ++i) {
    const double x1 = lo + i * h;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if (f1 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
      if (auto b = bisect(f, x0, x1, tol)) roots.push_back(b->midpoint());
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

}  // namespace qgraph
