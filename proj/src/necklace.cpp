#include "qgraph/necklace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <fmt/format.h>

#include "qgraph/errors.hpp"
#include "qgraph/trig_poly.hpp"

namespace qgraph {
namespace {

constexpr double kPi = std::numbers::pi;

void check_length(int l) {
  if (l < 1) throw DomainError("necklace length must be >= 1");
  if (l > kMaxNecklaceLength)
    throw CapacityError(fmt::format("necklace length {} exceeds the cap {}", l,
                                    kMaxNecklaceLength));
}

// FKM generation of binary prenecklaces; emits necklaces (l % p == 0) or
// only Lyndon words (p == l).
std::vector<Necklace> generate(int l, bool primitive_only) {
  check_length(l);
  std::vector<Necklace> out;
  std::string a(static_cast<std::size_t>(l) + 1, 'L');
  std::function<void(int, int)> gen = [&](int t, int p) {
    if (t > l) {
      if (primitive_only ? p == l : l % p == 0) out.push_back({a.substr(1)});
      return;
    }
    a[t] = a[t - p];
    gen(t + 1, p);
    if (a[t - p] == 'L') {
      a[t] = 'R';
      gen(t + 1, t);
    }
  };
  gen(1, 1);
  return out;
}

// sin(pi num / den), exactly zero when den divides num.
double sin_pi_rational(long long num, long long den) {
  long long r = num % (2 * den);
  if (r < 0) r += 2 * den;
  if (r % den == 0) return 0.0;
  return std::sin(kPi * static_cast<double>(r) / static_cast<double>(den));
}

// cos(p pi / 3) for integer p, exact.
double cos_pi_third(int p) {
  static constexpr double table[6] = {1.0, 0.5, -0.5, -1.0, -0.5, 0.5};
  return table[((p % 6) + 6) % 6];
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

bool is_canonical(std::string_view word) {
  if (word.empty()) return false;
  for (char c : word)
    if (c != 'L' && c != 'R') return false;
  const std::size_t l = word.size();
  for (std::size_t s = 1; s < l; ++s) {
    for (std::size_t i = 0; i < l; ++i) {
      const char x = word[i], y = word[(i + s) % l];
      if (y < x) return false;
      if (y > x) break;
    }
  }
  return true;
}

Necklace canonical_rotation(std::string_view word) {
  if (word.empty()) throw DomainError("empty necklace word");
  for (char c : word)
    if (c != 'L' && c != 'R')
      throw DomainError(fmt::format("necklace symbol '{}' is not L or R", c));
  std::string best(word);
  std::string rot(word);
  for (std::size_t s = 1; s < word.size(); ++s) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return {best};
}

std::vector<Necklace> enumerate_necklaces(int l) { return generate(l, false); }

std::vector<Necklace> primitive_necklaces(int l) { return generate(l, true); }

std::uint64_t totient(std::uint64_t m) {
  if (m == 0) throw DomainError("totient is defined for m >= 1");
  std::uint64_t result = m, rest = m;
  for (std::uint64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    result -= result / p;
  }
  if (rest > 1) result -= result / rest;
  return result;
}

int mobius(std::uint64_t d) {
  if (d == 0) throw DomainError("Moebius function is defined for d >= 1");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= d; ++p) {
    if (d % p != 0) continue;
    d /= p;
    if (d % p == 0) return 0;
    sign = -sign;
  }
  if (d > 1) sign = -sign;
  return sign;
}

std::uint64_t necklace_count_totient(int l) {
  if (l < 1 || l > 62) throw DomainError("necklace count needs 1 <= l <= 62");
  std::uint64_t sum = 0;
  for (int m = 1; m <= l; ++m)
    if (l % m == 0) sum += totient(m) * (std::uint64_t{1} << (l / m));
  return sum / static_cast<std::uint64_t>(l);
}

std::uint64_t primitive_count_mobius(int l) {
  if (l < 1 || l > 62) throw DomainError("necklace count needs 1 <= l <= 62");
  long long sum = 0;
  for (int d = 1; d <= l; ++d)
    if (l % d == 0) sum += mobius(d) * (1LL << (l / d));
  return static_cast<std::uint64_t>(sum / l);
}

NecklaceStats stats(const Necklace& w) {
  NecklaceStats s;
  const int l = w.length();
  s.ell = l;
  int rr = 0;
  for (int i = 0; i < l; ++i) {
    const char x = w.word[i], y = w.word[(i + 1) % l];
    (x == 'L' ? s.n_L : s.n_R)++;
    if (x == y) {
      ++s.alpha;
      if (x == 'R') ++rr;
    } else {
      ++s.beta;
    }
  }
  s.chi = l + rr;
  s.is_primitive = true;
  for (int d = 1; d < l; ++d) {
    if (l % d != 0) continue;
    bool periodic = true;
    for (int i = d; i < l && periodic; ++i) periodic = w.word[i] == w.word[i - d];
    if (periodic) {
      s.is_primitive = false;
      break;
    }
  }
  return s;
}

double amplitude(const Necklace& w, double r) {
  const NecklaceStats s = stats(w);
  const double sign = (s.chi % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(r, s.alpha) * std::pow(1.0 - r * r, s.beta / 2);
}

double reduced_action(const Necklace& w, const ThreeVertexParams& params) {
  const NecklaceStats s = stats(w);
  return 2.0 * (s.n_L * params.a + s.n_R * params.beta() * params.b);
}

std::vector<std::vector<NecklaceOrbit>> necklace_orbits(const ThreeVertexParams& params,
                                                        int l_max) {
  check_length(l_max);
  params.validate();
  std::vector<std::vector<NecklaceOrbit>> out(static_cast<std::size_t>(l_max) + 1);
  const double r = params.r();
  for (int l = 1; l <= l_max; ++l) {
    for (Necklace& w : primitive_necklaces(l)) {
      NecklaceOrbit o;
      o.stats = stats(w);
      o.amplitude = amplitude(w, r);
      o.action = reduced_action(w, params);
      o.word = std::move(w);
      out[l].push_back(std::move(o));
    }
  }
  return out;
}

ExpansionResult eigenvalue_necklace(const std::vector<std::vector<NecklaceOrbit>>& orbits,
                                    const ThreeVertexParams& params,
                                    const TrigPolynomial& trig, int n, int l_max) {
  check_length(l_max);
  if (static_cast<int>(orbits.size()) <= l_max)
    throw DomainError("necklace table shorter than l_max");
  const RootCell cell = root_cell(trig, n);
  const double omega0 = params.omega0();
  ExpansionResult res;
  for (int l = 1; l <= l_max; ++l) res.primes_used += orbits[l].size();
  double acc = 0.0;
  for (int l = 1; l <= l_max; ++l) {
    for (int nu = 1; nu <= l; ++nu) {
      if (l % nu != 0) continue;
      for (const NecklaceOrbit& o : orbits[l / nu]) {
        const double L = o.action;
        acc += std::pow(o.amplitude, nu) / (static_cast<double>(nu) * nu * L) *
               std::sin(nu * L * cell.k_bar) *
               std::sin(nu * kPi * L / (2.0 * omega0));
        ++res.terms_used;
      }
    }
    res.partial_sums.push_back(cell.k_bar - 2.0 / kPi * acc);
  }
  res.k = res.partial_sums.back();
  return res;
}

ExpansionResult eigenvalue_necklace(const ThreeVertexParams& params, int n, int l_max) {
  const TrigPolynomial trig = three_vertex_trig(params);
  return eigenvalue_necklace(necklace_orbits(params, l_max), params, trig, n, l_max);
}

ConvergenceReport convergence_study(int m, int n, int p_max) {
  if (m != 1 && m != 2)
    throw DomainError(fmt::format("convergence study is defined for m = 1, 2; got {}", m));
  if (n < 1) throw DomainError("root index n must be positive");
  check_length(p_max);

  const ThreeVertexParams params = ThreeVertexParams::family(m);
  const TrigPolynomial trig = three_vertex_trig(params);
  if (std::abs(trig.gamma0 - 0.5) > 1e-12)
    throw IntegrityError("family spectral equation lost its gamma0 = 1/2 form");

  ConvergenceReport rep;
  rep.m = m;
  rep.n = n;
  rep.mu = trig.mu;
  rep.p_max = p_max;
  rep.cell_index = static_cast<long long>(n) + trig.mu + 1;

  // With a = m beta b: L_w = (2a/m)(m n_L + n_R), omega0 = a (m+1)/m and
  // k_bar = pi m N / (a (m+1)), N = n + mu + 1. Both sine arguments are
  // rational multiples of pi with denominator m + 1.
  const long long N = rep.cell_index;
  const double a = params.a;
  const auto weight = [m](const NecklaceStats& s) {
    return static_cast<long long>(m) * s.n_L + s.n_R;
  };
  const auto term = [&](const NecklaceStats& s, int nu) {
    const long long q = weight(s);
    const double L = 2.0 * a / m * static_cast<double>(q);
    const double amp = ((s.chi % 2 == 0) ? 1.0 : -1.0) * std::pow(2.0, -0.5 * s.ell);
    return std::pow(amp, nu) / (static_cast<double>(nu) * nu * L) *
           sin_pi_rational(2LL * nu * N * q, m + 1) *
           sin_pi_rational(static_cast<long long>(nu) * q, m + 1);
  };

  std::vector<std::vector<NecklaceStats>> prim(p_max + 1);
  for (int l = 1; l <= p_max; ++l)
    for (const Necklace& w : primitive_necklaces(l)) prim[l].push_back(stats(w));

  rep.all_terms_zero = true;
  for (int l = 1; l <= p_max; ++l)
    for (int nu = 1; nu * l <= p_max; ++nu)
      for (const NecklaceStats& s : prim[l]) {
        const double t = std::abs(term(s, nu));
        rep.max_abs_term = std::max(rep.max_abs_term, t);
        if (t != 0.0) rep.all_terms_zero = false;
      }

  double partial = 0.0, bound_partial = 0.0;
  for (int p = 2; p <= p_max; ++p) {
    if (!is_prime(p)) continue;
    PrimeLengthRow row;
    row.p = p;
    for (const NecklaceStats& s : prim[p]) {
      const double t = std::abs(term(s, 1));
      row.abs_sum += t;
      if (t != 0.0) ++row.contributing;
    }
    const double bracket = std::ldexp(1.0, p) + 2.0 * cos_pi_third(p) - 3.0;
    row.count_bound = bracket / (3.0 * p);
    row.bound_term = bracket / (4.0 * a * p * (2.0 * p - 1.0) * std::pow(2.0, 0.5 * p));
    partial += row.abs_sum;
    bound_partial += row.bound_term;
    row.abs_partial = partial;
    row.bound_partial = bound_partial;
    rep.rows.push_back(row);
  }

  rep.strictly_increasing = !rep.rows.empty();
  rep.above_bound = !rep.rows.empty();
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const PrimeLengthRow& r = rep.rows[i];
    if (i > 0 && !(r.abs_partial > rep.rows[i - 1].abs_partial))
      rep.strictly_increasing = false;
    const bool ok = r.bound_partial > 0.0 ? r.abs_partial > r.bound_partial
                                          : r.abs_partial >= r.bound_partial;
    if (!ok) rep.above_bound = false;
  }
  return rep;
}

}  // namespace qgraph
