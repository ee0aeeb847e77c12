#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/orbits.hpp"

namespace qgraph {

// Binary Polya necklaces over {L, R} and the periodic-orbit expansion of the
// dressed three-vertex graph written in necklace form. L (R) is a reflection
// from the left (right) dead end.

inline constexpr int kMaxNecklaceLength = 24;

/// Canonical representative: the lexicographically smallest rotation, L < R.
struct Necklace {
  std::string word;
  int length() const { return static_cast<int>(word.size()); }
  friend bool operator==(const Necklace&, const Necklace&) = default;
};

struct NecklaceStats {
  int n_L = 0;
  int n_R = 0;
  int alpha = 0;  // cyclic LL or RR neighbours
  int beta = 0;   // cyclic LR or RL neighbours
  int ell = 0;
  int chi = 0;    // ell + cyclic RR neighbours
  bool is_primitive = true;
};

bool is_canonical(std::string_view word);
Necklace canonical_rotation(std::string_view word);

/// All canonical necklaces of length l in lexicographic order, primitive or
/// not. Throws CapacityError above kMaxNecklaceLength.
std::vector<Necklace> enumerate_necklaces(int l);

/// Necklaces of length l that are not repetitions of a shorter word.
std::vector<Necklace> primitive_necklaces(int l);

std::uint64_t totient(std::uint64_t m);
int mobius(std::uint64_t d);

/// (1/l) sum_{m|l} phi(m) 2^{l/m}: the number of all necklaces of length l.
std::uint64_t necklace_count_totient(int l);
/// (1/l) sum_{d|l} mu(d) 2^{l/d}: the number of primitive necklaces.
std::uint64_t primitive_count_mobius(int l);

NecklaceStats stats(const Necklace& w);

/// A_w = (-1)^chi r^alpha (1 - r^2)^(beta/2).
double amplitude(const Necklace& w, double r);
/// L_w = 2 (n_L a + n_R beta b).
double reduced_action(const Necklace& w, const ThreeVertexParams& params);

struct NecklaceOrbit {
  Necklace word;
  NecklaceStats stats;
  double amplitude = 0.0;
  double action = 0.0;
};

/// Primitive necklaces of every length 1..l_max with amplitudes and actions,
/// grouped by length and in canonical order inside each group.
std::vector<std::vector<NecklaceOrbit>> necklace_orbits(const ThreeVertexParams& params,
                                                        int l_max);

/// Necklace form of the periodic-orbit formula: sum over total binary
/// length l, then repetition nu, then canonical word order.
ExpansionResult eigenvalue_necklace(const ThreeVertexParams& params, int n, int l_max);
ExpansionResult eigenvalue_necklace(const std::vector<std::vector<NecklaceOrbit>>& orbits,
                                    const ThreeVertexParams& params,
                                    const TrigPolynomial& trig, int n, int l_max);

struct PrimeLengthRow {
  int p = 0;
  std::size_t contributing = 0;   // necklaces with nonzero term
  double count_bound = 0.0;       // (2^p + 2 cos(p pi/3) - 3) / (3p)
  double abs_sum = 0.0;           // sum over W_P(p) of |term|, nu = 1
  double abs_partial = 0.0;
  double bound_term = 0.0;        // analytic lower bound for this prime
  double bound_partial = 0.0;
};

struct ConvergenceReport {
  int m = 0;
  int n = 0;
  int mu = 0;
  int p_max = 0;
  long long cell_index = 0;  // n + mu + 1
  bool all_terms_zero = false;
  double max_abs_term = 0.0;  // over all l <= p_max, nu, w
  std::vector<PrimeLengthRow> rows;
  bool strictly_increasing = false;
  bool above_bound = false;
};

/// Convergence experiment for the families r = 1/sqrt(2), a = m beta b.
/// Phases are evaluated as exact rational multiples of pi, so vanishing
/// terms come out as exact zeros.
ConvergenceReport convergence_study(int m, int n, int p_max);

}  // namespace qgraph
