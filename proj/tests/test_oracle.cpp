#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qgraph/errors.hpp"
#include "qgraph/oracle.hpp"
#include "qgraph/trig_poly.hpp"

using namespace qgraph;

namespace {

constexpr double kPi = std::numbers::pi;
const ThreeVertexParams kChain{0.3, 0.7, 0.5};

}  // namespace

TEST_CASE("bisection roots of the reference chain") {
  const TrigPolynomial trig = three_vertex_trig(kChain);
  CHECK(std::abs(find_root_bisection(trig, 1) - 4.107149) < 1e-5);
  CHECK(std::abs(find_root_bisection(trig, 10) - 39.305209) < 1e-5);
  CHECK(std::abs(find_root_bisection(trig, 100) - 394.964713) < 1e-5);
  CHECK_THROWS_AS(find_root_bisection(trig, 1, 1e-15), DomainError);

  // Every root lies in its root zone, outside the root-free zones.
  for (int n = 1; n <= 300; ++n) {
    const RootCell c = root_cell(trig, n);
    const double k = find_root_bisection(trig, n);
    CHECK(c.root_zone.contains(k));
    CHECK(std::abs(trig.evaluate(k)) < 1e-11);
  }
}

TEST_CASE("phi zero: roots sit at the cell centres") {
  const TrigPolynomial flat = TrigPolynomial::canonical(1.3, 0.2, {});
  for (int n = 1; n <= 20; ++n)
    CHECK(std::abs(find_root_bisection(flat, n) - root_cell(flat, n).k_bar) < 1e-12);
  for (int n = 0; n <= 20; ++n) {
    const WeylReport w = weyl_check(flat, cell_boundary(flat, n));
    CHECK(w.count == n);
    CHECK(std::abs(w.deviation) < 1e-12);
  }
}

TEST_CASE("eigenphases vanish at a root") {
  const QuantumGraph g = three_vertex_graph(kChain);
  const TrigPolynomial trig = three_vertex_trig(kChain);
  const double k1 = find_root_bisection(trig, 1);
  CHECK_THROWS_AS(eigenphases(g, k1), OnRootError);
  const EigenphaseSet set = eigenphases(g, k1, 0.0);
  REQUIRE(set.phases.size() == 4);
  double closest = 10.0;
  for (double s : set.phases) {
    CHECK(s > 0.0);
    CHECK(s <= 2 * kPi);
    closest = std::min(closest, std::min(s, 2 * kPi - s));
  }
  CHECK(closest < 1e-6);
  const EigenphaseSet ref_root = eigenphases(g, 4.107149, 0.0);
  double near = 10.0;
  for (double s : ref_root.phases) near = std::min(near, std::min(s, 2 * kPi - s));
  CHECK(near < 1e-5);
}

TEST_CASE("exact staircase") {
  const QuantumGraph g = three_vertex_graph(kChain);
  const TrigPolynomial trig = three_vertex_trig(kChain);
  CHECK(mu_from_eigenphases(g, trig) == trig.mu);

  CHECK(std::abs(staircase_exact(g, trig, 1.0).n_total) < 1e-8);
  const StaircaseValue at40 = staircase_exact(g, trig, 40.0);
  CHECK(std::abs(at40.n_total - count_roots_below(trig, 40.0)) < 1e-8);
  CHECK(count_roots_below(trig, 40.0) == 10);

  for (int n = 1; n <= 100; ++n) {
    const double k = find_root_bisection(trig, n);
    const double below = staircase_exact(g, trig, k - 1e-6).n_total;
    const double above = staircase_exact(g, trig, k + 1e-6).n_total;
    CHECK(std::abs(below - (n - 1)) < 1e-8);
    CHECK(std::abs(above - n) < 1e-8);
    // Just above a cell boundary, between two roots.
    const double boundary = cell_boundary(trig, n) + 1e-9;
    CHECK(std::abs(staircase_exact(g, trig, boundary).n_total - n) < 1e-8);
  }
}

TEST_CASE("Weyl check") {
  const TrigPolynomial trig = three_vertex_trig(kChain);
  CHECK(weyl_check(trig, 394.97).count == 100);
  for (int i = 1; i <= 500; ++i) {
    const WeylReport w = weyl_check(trig, 0.8 * i);
    CHECK(w.within_bound);
  }
  for (int n = 1; n <= 50; ++n) CHECK(weyl_check(trig, cell_boundary(trig, n)).count == n);
  const TrigPolynomial bad =
      TrigPolynomial::canonical(3.0, 0.0, {{0.6, 1.0, 0.0}, {0.7, 2.0, 0.1}});
  CHECK_THROWS_AS(weyl_check(bad, 10.0), RegularityError);
}

TEST_CASE("counting offset from eigenphases agrees with the root scan") {
  for (double lambda : {0.1, 0.5, 0.9}) {
    for (double a : {0.2, 0.9, 1.7}) {
      const ThreeVertexParams p{a, 0.7, lambda};
      const QuantumGraph g = three_vertex_graph(p);
      const TrigPolynomial trig = expand_secular_determinant(g);
      CHECK(mu_from_eigenphases(g, trig) == trig.mu);
    }
  }
}
