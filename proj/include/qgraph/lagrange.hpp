#pragma once

#include <functional>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/power_series.hpp"
#include "qgraph/trig_poly.hpp"

namespace qgraph {

/// Taylor coefficients of phi about x up to the given degree. Degree 0
/// doubles as a plain evaluation phi(x).
using SeriesGenerator = std::function<series::Series(double x, int degree)>;

inline constexpr int kDefaultLagrangeOrder = 8;
inline constexpr int kConditionSamples = 64;

/// Root x* of x = a + w phi(x).
struct InversionProblem {
  double a = 0.0;
  double w = 1.0;
  SeriesGenerator phi;
  int order = kDefaultLagrangeOrder;
  /// Interval on which |w| < |(x - a) / phi(x)| is sampled, minus the ball
  /// |x - a| <= excluded_radius. The inequality cannot hold arbitrarily close
  /// to a unless phi(a) = 0, so the root zone is left out.
  Interval check{0.0, 0.0};
  double excluded_radius = 0.0;
};

struct InversionResult {
  double x = 0.0;
  std::vector<double> partial_sums;  // entry nu-1: truncated at order nu
  std::vector<double> terms;         // w^nu / nu! d^{nu-1} phi^nu (a)
  bool nonconvergence_warning = false;
};

/// Sample points used for the condition check, in increasing order.
std::vector<double> condition_samples(const InversionProblem& problem);

/// Throws DivergenceRiskError when a sample violates the condition, and
/// DomainError for order < 1, a missing phi or an empty check interval.
InversionResult lagrange_invert(const InversionProblem& problem);

struct SpectralLagrangeResult {
  double k = 0.0;
  /// Scaled variable: x = omega0 k for the three-vertex form,
  /// x = omega0 k - pi gamma0 for the generic form.
  double x = 0.0;
  std::vector<double> partial_x;
  std::vector<double> partial_k;
  std::vector<double> terms;
  bool nonconvergence_warning = false;
};

/// Generic regular spectral equation: with x = omega0 k - pi gamma0 and
/// m = n + mu, the n-th root solves x = (m + 1/2) pi + (-1)^(m+1) arcsin Phi.
SpectralLagrangeResult spectral_lagrange(const TrigPolynomial& trig, int n,
                                         int order = kDefaultLagrangeOrder);

/// Three-vertex form x = pi n + (-1)^n arcsin(r sin(rho x)), rho = omega1/omega0.
SpectralLagrangeResult spectral_lagrange(const ThreeVertexParams& params, int n,
                                         int order = kDefaultLagrangeOrder);

}  // namespace qgraph
