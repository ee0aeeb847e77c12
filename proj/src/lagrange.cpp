#include "qgraph/lagrange.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qgraph {
namespace {

constexpr double kPi = std::numbers::pi;

// Equidistant midpoints of [lo, hi].
void append_midpoints(double lo, double hi, int count, std::vector<double>& out) {
  for (int j = 0; j < count; ++j) out.push_back(lo + (hi - lo) * (j + 0.5) / count);
}

SpectralLagrangeResult to_spectral(const InversionResult& inv, double omega0,
                                   double x_offset) {
  SpectralLagrangeResult r;
  r.x = inv.x;
  r.k = (inv.x + x_offset) / omega0;
  r.partial_x = inv.partial_sums;
  for (double x : inv.partial_sums) r.partial_k.push_back((x + x_offset) / omega0);
  r.terms = inv.terms;
  r.nonconvergence_warning = inv.nonconvergence_warning;
  return r;
}

}  // namespace

std::vector<double> condition_samples(const InversionProblem& p) {
  const double left_hi = std::min(p.check.hi, p.a - p.excluded_radius);
  const double right_lo = std::max(p.check.lo, p.a + p.excluded_radius);
  const bool has_left = p.check.lo < left_hi;
  const bool has_right = right_lo < p.check.hi;
  if (!has_left && !has_right)
    throw DomainError("Lagrange condition interval is empty after excluding the root zone");
  std::vector<double> out;
  if (has_left && has_right) {
    append_midpoints(p.check.lo, left_hi, kConditionSamples / 2, out);
    append_midpoints(right_lo, p.check.hi, kConditionSamples / 2, out);
  } else if (has_left) {
    append_midpoints(p.check.lo, left_hi, kConditionSamples, out);
  } else {
    append_midpoints(right_lo, p.check.hi, kConditionSamples, out);
  }
  return out;
}

InversionResult lagrange_invert(const InversionProblem& p) {
  if (p.order < 1) throw DomainError("Lagrange order must be >= 1");
  if (!p.phi) throw DomainError("Lagrange problem has no phi");

  for (double x : condition_samples(p)) {
    const double phi = p.phi(x, 0).at(0);
    if (!(std::abs(p.w) * std::abs(phi) < std::abs(x - p.a)))
      throw DivergenceRiskError(fmt::format(
          "inversion condition |w| < |(x-a)/phi(x)| fails at x = {:.15g} "
          "(|w| = {:.6g}, |x-a| = {:.6g}, |phi| = {:.6g})",
          x, std::abs(p.w), std::abs(x - p.a), std::abs(phi)));
  }

  // w^nu / nu! d^{nu-1} phi^nu (a) = w^nu / nu [h^{nu-1}] phi(a + h)^nu.
  const int degree = p.order - 1;
  const series::Series phi = p.phi(p.a, degree);
  InversionResult r;
  double x = p.a;
  double w_pow = 1.0;
  for (int nu = 1; nu <= p.order; ++nu) {
    w_pow *= p.w;
    const series::Series power = series::pow_int(phi, nu, degree);
    const double term = w_pow / nu * power.at(static_cast<std::size_t>(nu - 1));
    r.terms.push_back(term);
    x += term;
    r.partial_sums.push_back(x);
  }
  r.x = x;

  constexpr int kWindow = 5;
  if (p.order >= kWindow) {
    bool non_decreasing = true, any_nonzero = false;
    for (int i = p.order - kWindow; i < p.order; ++i) {
      if (r.terms[i] != 0.0) any_nonzero = true;
      if (i > p.order - kWindow && std::abs(r.terms[i]) < std::abs(r.terms[i - 1]))
        non_decreasing = false;
    }
    r.nonconvergence_warning = non_decreasing && any_nonzero;
  }
  return r;
}

SpectralLagrangeResult spectral_lagrange(const TrigPolynomial& trig, int n, int order) {
  if (!trig.is_regular())
    throw RegularityError(fmt::format(
        "Lagrange inversion refused: alpha = {:.15g} >= 1", trig.alpha()));
  if (n < 1) throw DomainError("root index n must be positive");
  const long long m = static_cast<long long>(n) + trig.mu;
  const double offset = kPi * trig.gamma0;
  const double omega0 = trig.omega0;

  InversionProblem p;
  p.a = (static_cast<double>(m) + 0.5) * kPi;
  p.w = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^(m+1)
  p.order = order;
  p.check = {p.a - kPi / 2.0, p.a + kPi / 2.0};
  p.excluded_radius = std::asin(trig.alpha());
  p.phi = [&trig, offset, omega0](double x, int degree) {
    const double k = (x + offset) / omega0;
    series::Series big_phi = series::constant(0.0, degree);
    for (const TrigTerm& t : trig.terms) {
      const series::Series c =
          series::cos_shift(t.omega * k - kPi * t.gamma, t.omega / omega0, degree);
      big_phi = series::add(big_phi, series::scale(c, t.amplitude, degree), degree);
    }
    return series::arcsin(big_phi, degree);
  };
  return to_spectral(lagrange_invert(p), omega0, offset);
}

SpectralLagrangeResult spectral_lagrange(const ThreeVertexParams& params, int n, int order) {
  params.validate();
  if (n < 1) throw DomainError("root index n must be positive");
  const double r = params.r();
  const double rho = params.omega1() / params.omega0();

  InversionProblem p;
  p.a = kPi * n;
  p.w = (n % 2 == 0) ? 1.0 : -1.0;
  p.order = order;
  p.check = {p.a - kPi / 2.0, p.a + kPi / 2.0};
  p.excluded_radius = std::asin(std::abs(r));
  p.phi = [r, rho](double x, int degree) {
    return series::arcsin(series::scale(series::sin_shift(rho * x, rho, degree), r, degree),
                          degree);
  };
  return to_spectral(lagrange_invert(p), params.omega0(), 0.0);
}

}  // namespace qgraph
