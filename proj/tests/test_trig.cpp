#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qgraph/errors.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/oracle.hpp"
#include "qgraph/trig_poly.hpp"
#include "support.hpp"

using namespace qgraph;
using qgraph::testing::count_sign_changes;
using qgraph::testing::random_regular_trig;

namespace {

constexpr double kPi = std::numbers::pi;
const ThreeVertexParams kChain{0.3, 0.7, 0.5};

// Largest |secular(k) - c F(k)| relative to max |secular| over samples,
// with c fitted at the sample of largest |F|.
double proportionality_defect(const QuantumGraph& g, const TrigPolynomial& trig,
                              const std::vector<double>& ks) {
  double best_k = ks.front(), best_f = 0.0;
  for (double k : ks)
    if (std::abs(trig.evaluate(k)) > best_f) {
      best_f = std::abs(trig.evaluate(k));
      best_k = k;
    }
  const double c = secular_function(g, best_k) / trig.evaluate(best_k);
  double worst = 0.0, scale = 0.0;
  for (double k : ks) {
    scale = std::max(scale, std::abs(secular_function(g, k)));
    worst = std::max(worst, std::abs(secular_function(g, k) - c * trig.evaluate(k)));
  }
  return worst / scale;
}

}  // namespace

TEST_CASE("three-vertex expansion") {
  const QuantumGraph g = three_vertex_graph(kChain);
  const TrigPolynomial trig = expand_secular_determinant(g);
  CHECK(trig.omega0 == doctest::Approx(kChain.omega0()).epsilon(1e-14));
  CHECK(trig.gamma0 == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(trig.terms.size() == 1);
  CHECK(trig.terms[0].amplitude == doctest::Approx(kChain.r()).epsilon(1e-13));
  CHECK(trig.terms[0].omega == doctest::Approx(std::abs(kChain.omega1())).epsilon(1e-13));
  CHECK(trig.mu == -1);

  // Compare against sin(omega0 k) - r sin(omega1 k) on a grid.
  for (int i = 0; i <= 2000; ++i) {
    const double k = 0.05 * i;
    const double ref = std::sin(kChain.omega0() * k) - kChain.r() * std::sin(kChain.omega1() * k);
    CHECK(std::abs(trig.evaluate(k) - ref) < 1e-12);
  }
  const TrigPolynomial direct = three_vertex_trig(kChain);
  CHECK(direct.mu == trig.mu);
  CHECK(std::abs(direct.evaluate(4.107149)) < 1e-5);
}

TEST_CASE("expanded form is proportional to the dense secular function") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> len(0.2, 2.0), lam(0.05, 0.95), kd(0.0, 60.0);
  for (int trial = 0; trial < 5; ++trial) {
    Topology t{3, {{0, 1, len(rng), {}}, {1, 2, len(rng), lam(rng)}}, {}};
    if (trial % 2) t.vertex_kinds = {VertexKind::dirichlet, VertexKind::kirchhoff,
                                     VertexKind::kirchhoff};
    const QuantumGraph g = make_kirchhoff_graph(t);
    const TrigPolynomial trig = expand_secular_determinant(g);
    std::vector<double> ks(1000);
    for (double& k : ks) k = kd(rng);
    CHECK(proportionality_defect(g, trig, ks) < 1e-10);
  }
}

TEST_CASE("zero sets agree with dense scans of the secular function") {
  for (const char* name : {"single_bond", "chain_3v", "star3", "chain2"}) {
    CAPTURE(name);
    const QuantumGraph g = load_graph_file(std::string(QGRAPH_DATA_DIR) + "/" + name + ".graph");
    const TrigPolynomial trig = expand_secular_determinant(g);
    const auto sec = [&](double k) { return secular_function(g, k); };
    const auto tri = [&](double k) { return trig.evaluate(k); };
    const auto a = dense_scan_roots(sec, 1e-3, 50.0, 200000);
    const auto b = dense_scan_roots(tri, 1e-3, 50.0, 200000);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
  }
}

TEST_CASE("equal-arm star: secular roots match the dense determinant scan") {
  Topology t{4, {{0, 1, 1.0, {}}, {0, 2, 1.0, {}}, {0, 3, 1.0, {}}}, {}};
  const QuantumGraph g = make_kirchhoff_graph(t);
  const TrigPolynomial trig = expand_secular_determinant(g);
  const auto a = dense_scan_roots([&](double k) { return secular_function(g, k); }, 1e-3,
                                  30.0, 100000);
  const auto b = dense_scan_roots([&](double k) { return trig.evaluate(k); }, 1e-3, 30.0,
                                  100000);
  REQUIRE(a.size() == b.size());
  REQUIRE(!a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
}

TEST_CASE("canonical form") {
  SUBCASE("zero amplitude terms are pruned") {
    const TrigPolynomial t = TrigPolynomial::canonical(1.0, 0.5, {{0.0, 0.5, 0.5}});
    CHECK(t.terms.empty());
    CHECK(t.alpha() == 0.0);
    CHECK(t.is_regular());
  }
  SUBCASE("equal frequencies merge; every frequency below omega0") {
    const TrigPolynomial t = TrigPolynomial::canonical(
        2.0, 0.25, {{0.2, 0.5, 0.0}, {0.1, 0.5, 0.0}, {0.1, -1.5, 0.3}});
    REQUIRE(t.terms.size() == 2);
    CHECK(t.terms[0].omega > t.terms[1].omega);
    for (const TrigTerm& x : t.terms) CHECK(x.omega < t.omega0);
    CHECK(t.terms[1].amplitude == doctest::Approx(0.3));
  }
  SUBCASE("alpha and regularity") {
    const TrigPolynomial t =
        TrigPolynomial::canonical(3.0, 0.0, {{0.6, 1.0, 0.0}, {0.7, 2.0, 0.1}});
    CHECK(t.alpha() == doctest::Approx(1.3));
    CHECK_FALSE(t.is_regular());
    CHECK_FALSE(regularity(t).is_regular);
    CHECK_THROWS_AS(root_cell(t, 1), RegularityError);
    CHECK(regularity(three_vertex_trig(kChain)).alpha == doctest::Approx(kChain.r()));
  }
  SUBCASE("phi zero: evaluate vanishes at the first cell centre") {
    const TrigPolynomial t = TrigPolynomial::canonical(1.7, 0.3, {});
    CHECK(std::abs(t.evaluate(kPi / 1.7 * (0.3 + 0.5))) < 1e-15);
  }
  SUBCASE("structured text round trip") {
    const TrigPolynomial t = expand_secular_determinant(three_vertex_graph(kChain));
    std::stringstream ss;
    write_trig(ss, t);
    const TrigPolynomial back = read_trig(ss);
    CHECK(back.omega0 == t.omega0);
    CHECK(back.gamma0 == t.gamma0);
    CHECK(back.mu == t.mu);
    REQUIRE(back.terms.size() == t.terms.size());
    CHECK(back.terms[0].amplitude == t.terms[0].amplitude);
    CHECK(back.terms[0].omega == t.terms[0].omega);
    CHECK(back.terms[0].gamma == t.terms[0].gamma);
    std::istringstream bad("omega0 1\n");
    CHECK_THROWS_AS(read_trig(bad), ConfigError);
  }
}

TEST_CASE("root cells") {
  const TrigPolynomial chain = three_vertex_trig(kChain);
  const RootCell c1 = root_cell(chain, 1);
  CHECK(c1.k_hat_lo < 4.107149);
  CHECK(c1.k_hat_hi > 4.107149);
  CHECK(c1.root_zone.contains(4.107149));
  CHECK(c1.k_bar == 0.5 * (c1.k_hat_lo + c1.k_hat_hi));
  CHECK(c1.k_tilde_max < kPi / (2 * chain.omega0));
  CHECK(c1.root_zone.lo > c1.k_hat_lo);
  CHECK(c1.root_zone.hi < c1.k_hat_hi);

  const TrigPolynomial flat = TrigPolynomial::canonical(1.3, 0.5, {});
  CHECK(root_cell(flat, 3).k_tilde_max == 0.0);

  const ThreeVertexParams m1 = ThreeVertexParams::family(1);
  const TrigPolynomial fam = TrigPolynomial::canonical(
      m1.omega0(), 0.0, {{1.0 / std::sqrt(2.0), 0.3 * m1.omega0(), 0.2}});
  CHECK(root_cell(fam, 2).k_tilde_max ==
        doctest::Approx(kPi / (4 * fam.omega0)).epsilon(1e-14));
  CHECK_THROWS_AS(root_cell(chain, 0), DomainError);
}

TEST_CASE("sign change and endpoint bound across the first 1000 cells") {
  const TrigPolynomial chain = three_vertex_trig(kChain);
  const double floor_value = 1.0 - chain.alpha();
  for (int n = 1; n <= 1000; ++n) {
    const double lo = chain.evaluate(cell_boundary(chain, n - 1));
    const double hi = chain.evaluate(cell_boundary(chain, n));
    CHECK(lo * hi < 0.0);
    CHECK(std::abs(hi) >= floor_value - 1e-12);
  }
}

TEST_CASE("one root per cell for random regular polynomials") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const TrigPolynomial t = random_regular_trig(rng, 5, 0.95);
    REQUIRE(t.is_regular());
    for (int n = 1; n <= 50; ++n) {
      const RootCell c = root_cell(t, n);
      CHECK(count_sign_changes([&](double k) { return t.evaluate(k); }, c.k_hat_lo,
                               c.k_hat_hi, 2000) == 1);
      CHECK(std::abs(t.evaluate(c.k_hat_hi)) >= 1.0 - t.alpha() - 1e-12);
    }
  }
}

TEST_CASE("slope ratio stays below one") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int draw = 0; draw < 1000; ++draw) {
    const int n = 1 + static_cast<int>(unit(rng) * 6) % 6;
    std::vector<double> a(n), w(n), ph(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] = unit(rng) - 0.5;
      total += std::abs(a[i]);
    }
    const double alpha = 0.999 * unit(rng);
    for (int i = 0; i < n; ++i) {
      a[i] *= alpha / total;
      w[i] = 2.0 * unit(rng) - 1.0;
      ph[i] = 2.0 * kPi * unit(rng);
    }
    const double x = 200.0 * (unit(rng) - 0.5);
    double num = 0.0, c = 0.0;
    for (int i = 0; i < n; ++i) {
      num += a[i] * w[i] * std::sin(w[i] * x + ph[i]);
      c += a[i] * std::cos(w[i] * x + ph[i]);
    }
    CHECK(num * num / (1.0 - c * c) < 1.0);
  }
}

TEST_CASE("expansion capacity limit") {
  Topology t{12, {}, {}};
  for (int v = 1; v < 12; ++v) t.bonds.push_back({0, v, 1.0 + 0.1 * v, {}});
  const QuantumGraph g = make_kirchhoff_graph(t);
  CHECK_THROWS_AS(expand_secular_determinant(g), CapacityError);
}
