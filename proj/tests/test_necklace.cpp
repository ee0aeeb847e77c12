#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "qgraph/errors.hpp"
#include "qgraph/necklace.hpp"
#include "qgraph/orbits.hpp"
#include "qgraph/trig_poly.hpp"
#include "support.hpp"

using namespace qgraph;
using qgraph::testing::brute_force_necklaces;
using qgraph::testing::brute_totient;

namespace {

const ThreeVertexParams kChain{0.3, 0.7, 0.5};

std::vector<std::string> words(const std::vector<Necklace>& v) {
  std::vector<std::string> out;
  for (const Necklace& w : v) out.push_back(w.word);
  return out;
}

// Moebius function straight from its definition.
int brute_mobius(int d) {
  int primes = 0;
  for (int p = 2; p <= d; ++p) {
    if (d % p) continue;
    bool prime = true;
    for (int q = 2; q * q <= p; ++q)
      if (p % q == 0) prime = false;
    if (!prime) continue;
    if (d % (p * p) == 0) return 0;
    ++primes;
  }
  return primes % 2 ? -1 : 1;
}

}  // namespace

TEST_CASE("small necklace sets") {
  CHECK(words(enumerate_necklaces(1)) == std::vector<std::string>{"L", "R"});
  CHECK(words(enumerate_necklaces(2)) == std::vector<std::string>{"LL", "LR", "RR"});
  CHECK(words(primitive_necklaces(2)) == std::vector<std::string>{"LR"});
  CHECK(primitive_necklaces(4).size() == 3);
  CHECK(primitive_necklaces(5).size() == 6);
  CHECK_THROWS_AS(enumerate_necklaces(25), CapacityError);
  CHECK_THROWS_AS(enumerate_necklaces(0), DomainError);
}

TEST_CASE("enumeration matches brute-force rotation dedup") {
  for (int l = 1; l <= 14; ++l) {
    CAPTURE(l);
    CHECK(words(enumerate_necklaces(l)) == brute_force_necklaces(l, false));
    CHECK(words(primitive_necklaces(l)) == brute_force_necklaces(l, true));
  }
}

TEST_CASE("canonical rotations") {
  CHECK(canonical_rotation("RLL").word == "LLR");
  CHECK(canonical_rotation("RLRL").word == "LRLR");
  CHECK(is_canonical("LLRRL") == false);
  CHECK(is_canonical("LLLRR"));
  CHECK_FALSE(is_canonical(""));
  CHECK_FALSE(is_canonical("LXR"));
  CHECK_THROWS_AS(canonical_rotation("LQ"), DomainError);
  for (const Necklace& w : enumerate_necklaces(9)) CHECK(is_canonical(w.word));
}

TEST_CASE("number theory") {
  CHECK(totient(1) == 1);
  CHECK(totient(2) == 1);
  CHECK(totient(3) == 2);
  CHECK(totient(4) == 2);
  CHECK(totient(13) == 12);
  CHECK(totient(12) == 4);
  for (unsigned long long m = 1; m <= 500; ++m) CHECK(totient(m) == brute_totient(m));
  for (int d = 1; d <= 500; ++d) CHECK(mobius(d) == brute_mobius(d));
  CHECK_THROWS_AS(totient(0), DomainError);
}

TEST_CASE("necklace counting formulas") {
  for (int l = 1; l <= 16; ++l) {
    CAPTURE(l);
    CHECK(enumerate_necklaces(l).size() == necklace_count_totient(l));
    CHECK(primitive_necklaces(l).size() == primitive_count_mobius(l));
  }
  for (int p : {2, 3, 5, 7, 11, 13})
    CHECK(primitive_count_mobius(p) == ((1ULL << p) - 2) / p);
  // The totient sum counts every necklace, not only the primitive ones.
  CHECK(necklace_count_totient(2) == 3);
  CHECK(primitive_count_mobius(2) == 1);
}

TEST_CASE("necklace statistics") {
  const NecklaceStats r = stats({"R"});
  CHECK(r.alpha == 1);
  CHECK(r.beta == 0);
  CHECK(r.chi == 2);
  CHECK(stats({"LR"}).beta == 2);
  const NecklaceStats w = stats({"LLRRL"});
  CHECK(w.alpha == 3);
  CHECK(w.beta == 2);
  CHECK(w.n_L == 3);
  CHECK(w.n_R == 2);
  CHECK(stats({"RR"}).chi == 4);
  CHECK_FALSE(stats({"RR"}).is_primitive);
  CHECK_FALSE(stats({"LRLR"}).is_primitive);
  CHECK(stats({"LLR"}).is_primitive);

  for (int l = 1; l <= 16; ++l)
    for (const Necklace& x : enumerate_necklaces(l)) {
      const NecklaceStats s = stats(x);
      CHECK(s.alpha + s.beta == s.ell);
      CHECK(s.n_L + s.n_R == s.ell);
      CHECK(s.beta % 2 == 0);
    }
}

TEST_CASE("amplitudes and actions") {
  const double r = 1.0 / std::sqrt(2.0);
  for (int l = 1; l <= 12; ++l)
    for (const Necklace& w : enumerate_necklaces(l))
      CHECK(std::abs(amplitude(w, r)) == doctest::Approx(std::pow(2.0, -0.5 * l)).epsilon(1e-14));
  CHECK(reduced_action({"L"}, kChain) == doctest::Approx(0.6));
  CHECK(reduced_action({"R"}, kChain) == doctest::Approx(2 * 0.7 * std::sqrt(0.5)));
  CHECK(amplitude({"L"}, kChain.r()) == doctest::Approx(-kChain.r()));
  CHECK(amplitude({"R"}, kChain.r()) == doctest::Approx(kChain.r()));

  const ThreeVertexParams m2 = ThreeVertexParams::family(2);
  std::mt19937_64 rng(3);
  const auto pool = primitive_necklaces(11);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 5; ++i) {
    const Necklace& w = pool[pick(rng)];
    const NecklaceStats s = stats(w);
    CHECK(reduced_action(w, m2) == doctest::Approx(m2.a * (2 * s.n_L + s.n_R)).epsilon(1e-14));
  }
}

TEST_CASE("necklace terms reproduce the graph's prime orbits") {
  // Map each prime orbit of the chain graph to its (n_L, n_R) action and
  // compare amplitude sums class by class.
  const QuantumGraph g = three_vertex_graph(kChain);
  const auto primes = prime_orbits(g, 10);
  const auto orbits = necklace_orbits(kChain, 10);
  std::map<long long, Complex> graph_sum, neck_sum;
  const auto key = [](double action) { return std::llround(action * 1e9); };
  for (const PrimeOrbitTerm& p : primes) graph_sum[key(p.reduced_action)] += p.amplitude;
  for (int l = 1; l <= 10; ++l)
    for (const NecklaceOrbit& o : orbits[l]) neck_sum[key(o.action)] += o.amplitude;
  REQUIRE(graph_sum.size() == neck_sum.size());
  for (const auto& [k, v] : graph_sum) CHECK(std::abs(v - neck_sum[k]) < 1e-13);
  std::size_t count = 0;
  for (int l = 1; l <= 10; ++l) count += orbits[l].size();
  CHECK(count == primes.size());
}

TEST_CASE("necklace eigenvalue formula") {
  const TrigPolynomial trig = three_vertex_trig(kChain);
  const auto orbits = necklace_orbits(kChain, 20);
  const ExpansionResult r1 = eigenvalue_necklace(orbits, kChain, trig, 1, 20);
  const ExpansionResult r100 = eigenvalue_necklace(orbits, kChain, trig, 100, 20);
  CHECK(std::abs(r1.k - 4.105130) < 1e-5);
  CHECK(std::abs(r100.k - 394.964555) < 1e-5);
  CHECK(r1.primes_used > 100000);
  CHECK(r1.primes_used < 120000);

  const QuantumGraph g = three_vertex_graph(kChain);
  const auto primes = prime_orbits(g, 14);
  for (int n = 1; n <= 10; ++n) {
    const ExpansionResult a = eigenvalue_necklace(orbits, kChain, trig, n, 14);
    const ExpansionResult b = eigenvalue_po_prime(primes, trig, n, 14);
    CHECK(std::abs(a.k - b.k) < 1e-10);
  }

  const ThreeVertexParams m1 = ThreeVertexParams::family(1);
  const TrigPolynomial t1 = three_vertex_trig(m1);
  for (int n : {1, 4, 9}) {
    const ExpansionResult r = eigenvalue_necklace(m1, n, 12);
    for (double s : r.partial_sums) CHECK(std::abs(s - root_cell(t1, n).k_bar) < 1e-12);
  }
}

TEST_CASE("convergence study") {
  SUBCASE("m = 1: all terms vanish") {
    for (int n : {1, 2, 3, 10}) {
      const ConvergenceReport rep = convergence_study(1, n, 19);
      CHECK(rep.all_terms_zero);
      CHECK(rep.max_abs_term == 0.0);
    }
  }
  SUBCASE("m = 2 with n + mu + 1 divisible by 3: all terms vanish") {
    const ConvergenceReport probe = convergence_study(2, 1, 5);
    const int n = 3 - static_cast<int>(((probe.mu + 1) % 3 + 3) % 3);
    const ConvergenceReport rep = convergence_study(2, n, 19);
    CHECK(rep.cell_index % 3 == 0);
    CHECK(rep.all_terms_zero);
  }
  SUBCASE("m = 2 otherwise: absolute sums grow above the analytic bound") {
    for (int n : {1, 2, 4, 5}) {
      const ConvergenceReport rep = convergence_study(2, n, 19);
      if (rep.cell_index % 3 == 0) continue;
      CHECK_FALSE(rep.all_terms_zero);
      CHECK(rep.strictly_increasing);
      CHECK(rep.above_bound);
      REQUIRE(rep.rows.size() == 8);
      CHECK(rep.rows.front().p == 2);
      CHECK(rep.rows.front().abs_partial == 0.0);
      CHECK(rep.rows.back().p == 19);
      for (const PrimeLengthRow& row : rep.rows)
        if (row.p >= 5) CHECK(static_cast<double>(row.contributing) >= row.count_bound);
    }
  }
  SUBCASE("binomial count bound by enumeration") {
    for (int p : {5, 7, 11, 13}) {
      std::size_t count = 0;
      for (const Necklace& w : primitive_necklaces(p)) {
        const NecklaceStats s = stats(w);
        if ((2 * s.n_L + s.n_R) % 3 != 0) ++count;
      }
      const double bound = (std::pow(2.0, p) + 2 * std::cos(p * std::numbers::pi / 3) - 3) / (3.0 * p);
      CHECK(static_cast<double>(count) >= bound);
    }
  }
  CHECK_THROWS_AS(convergence_study(3, 1, 19), DomainError);
}
