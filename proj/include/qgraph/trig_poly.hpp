#pragma once

#include <iosfwd>
#include <string>
#include <optional>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

/// One term a cos(omega k - pi gamma) of the slow function Phi.
struct TrigTerm {
  double amplitude = 0.0;  // >= 0 in canonical form
  double omega = 0.0;      // 0 <= omega < omega0
  double gamma = 0.0;      // phase in units of pi, reduced to (-1, 1]
};

/// Canonical spectral function
///   F(k) = cos(omega0 k - pi gamma0) - sum_i a_i cos(omega_i k - pi gamma_i)
/// whose zeros are the spectrum. `mu` fixes the counting so that k_1 is the
/// first positive zero.
///
/// Canonical form: gamma0 in [0, 1) (a global sign flip of F shifts every
/// phase by one), amplitudes nonnegative, frequencies strictly decreasing
/// and pairwise distinct.
struct TrigPolynomial {
  double omega0 = 1.0;
  double gamma0 = 0.0;
  std::vector<TrigTerm> terms;
  int mu = 0;

  double evaluate(double k) const;
  double alpha() const;
  bool is_regular() const { return alpha() < 1.0; }

  /// Validates, merges equal frequencies, and brings phases and signs into
  /// canonical form. When `mu` is not supplied it is determined by the
  /// root scan (regular polynomials only; otherwise 0).
  static TrigPolynomial canonical(double omega0, double gamma0,
                                  std::vector<TrigTerm> terms,
                                  std::optional<int> mu = std::nullopt);
};

inline double evaluate(const TrigPolynomial& trig, double k) {
  return trig.evaluate(k);
}

struct RegularityReport {
  double alpha = 0.0;
  bool is_regular = true;
  std::vector<double> magnitudes;
};

RegularityReport regularity(const TrigPolynomial& trig);

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Bookkeeping for the n-th root cell I_n = (k_hat_lo, k_hat_hi).
struct RootCell {
  int n = 0;
  double k_hat_lo = 0.0;
  double k_hat_hi = 0.0;
  double k_bar = 0.0;
  double k_tilde_max = 0.0;
  Interval root_zone{};
  Interval free_minus{};
  Interval free_plus{};
};

/// Cell boundary k_hat_n = pi/omega0 (n + mu + 1 + gamma0); valid for any
/// integer n including 0.
double cell_boundary(const TrigPolynomial& trig, int n);

/// Throws RegularityError for non-regular input.
RootCell root_cell(const TrigPolynomial& trig, int n);

struct ExpansionOptions {
  int max_dimension = 20;
  double merge_tolerance = 1e-12;  // relative to omega0
  double prune_threshold = 1e-14;
};

/// Expands det[1 - S(k)] into canonical trigonometric form by summing the
/// complementary principal minors of -U^{-1} over all subsets of directed
/// bonds.
TrigPolynomial expand_secular_determinant(const QuantumGraph& graph,
                                          const ExpansionOptions& options = {});

/// The real secular function det(S^{-1/2}) det(U) det(-U^{-1} + D(k))
/// evaluated by dense linear algebra. Proportional to the expanded form.
double secular_function(const QuantumGraph& graph, double k);

/// Trig form of the three-vertex family, sin(omega0 k) - r sin(omega1 k).
TrigPolynomial three_vertex_trig(const ThreeVertexParams& params);

/// Index of the first cell (in units where cell m spans
/// pi/omega0 [m + gamma0, m + 1 + gamma0]) whose zero is positive, minus one.
/// Regular polynomials only.
int scan_mu(const TrigPolynomial& trig);

// Structured text record; decimal values use 17 significant digits so that
// read(write(t)) reproduces every double exactly.
void write_trig(std::ostream& out, const TrigPolynomial& trig);
TrigPolynomial read_trig(std::istream& in, const std::string& source = "<trig>");

}  // namespace qgraph
