#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qgraph/trig_poly.hpp"

namespace qgraph::testing {

/// Random regular trig polynomial with 1..max_terms terms and alpha below
/// alpha_max; frequencies drawn from (0, omega0).
inline TrigPolynomial random_regular_trig(std::mt19937_64& rng, int max_terms,
                                          double alpha_max) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, max_terms);
  const double omega0 = 0.5 + 2.0 * unit(rng);
  const int n = count(rng);
  std::vector<double> w(n);
  for (double& x : w) x = unit(rng) + 1e-3;
  double sum = 0.0;
  for (double x : w) sum += x;
  const double alpha = alpha_max * (0.05 + 0.95 * unit(rng));
  std::vector<TrigTerm> terms;
  for (int i = 0; i < n; ++i)
    terms.push_back({alpha * w[i] / sum, omega0 * (0.02 + 0.96 * unit(rng)),
                     2.0 * unit(rng) - 1.0});
  return TrigPolynomial::canonical(omega0, unit(rng), terms);
}

/// Roots of f on (lo, hi) by sign changes on an equidistant grid.
template <class F>
int count_sign_changes(F&& f, double lo, double hi, int steps) {
  int changes = 0;
  double prev = f(lo);
  for (int i = 1; i <= steps; ++i) {
    const double cur = f(lo + (hi - lo) * i / steps);
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) ++changes;
    if (cur != 0.0) prev = cur;
  }
  return changes;
}

/// Brute-force necklace count: canonical rotations of all 2^l words.
inline std::vector<std::string> brute_force_necklaces(int l, bool primitive_only) {
  std::vector<std::string> out;
  for (unsigned long long bits = 0; bits < (1ULL << l); ++bits) {
    std::string w(static_cast<std::size_t>(l), 'L');
    for (int i = 0; i < l; ++i)
      if ((bits >> (l - 1 - i)) & 1ULL) w[static_cast<std::size_t>(i)] = 'R';
    bool canonical = true, primitive = true;
    for (int s = 1; s < l; ++s) {
      const std::string rot = w.substr(static_cast<std::size_t>(s)) +
                              w.substr(0, static_cast<std::size_t>(s));
      if (rot < w) canonical = false;
      if (rot == w) primitive = false;
    }
    if (canonical && (primitive || !primitive_only)) out.push_back(w);
  }
  return out;
}

/// Euler phi by counting coprime residues.
inline unsigned long long brute_totient(unsigned long long m) {
  unsigned long long c = 0;
  for (unsigned long long j = 1; j <= m; ++j) {
    unsigned long long a = j, b = m;
    while (b) {
      const unsigned long long t = a % b;
      a = b;
      b = t;
    }
    if (a == 1) ++c;
  }
  return c;
}

}  // namespace qgraph::testing
