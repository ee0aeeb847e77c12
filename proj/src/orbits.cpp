#include "qgraph/orbits.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qgraph {
namespace {

constexpr double kPi = std::numbers::pi;

// Symbolic polynomial in the bond phases z_p = e^{i L_p k}: packed traversal
// counts -> coefficient. std::map keeps accumulation order deterministic.
using Poly = std::map<std::uint64_t, Complex>;

struct KeyLayout {
  int bits = 0;
  int bonds = 0;
  std::uint64_t unit(int bond) const { return std::uint64_t{1} << (bits * bond); }
  int count(std::uint64_t key, int bond) const {
    return static_cast<int>((key >> (bits * bond)) & ((std::uint64_t{1} << bits) - 1));
  }
};

KeyLayout make_layout(const QuantumGraph& graph, int max_steps) {
  KeyLayout k;
  k.bonds = graph.num_bonds();
  while ((1 << k.bits) <= max_steps) ++k.bits;
  if (k.bits * k.bonds > 64)
    throw CapacityError(fmt::format(
        "traversal counts for {} bonds up to {} steps do not fit a 64-bit key",
        k.bonds, max_steps));
  return k;
}

constexpr double kTransitionZero = 1e-15;

void check_limits(const QuantumGraph& graph, int l_max, const OrbitOptions& options) {
  if (l_max < 1) throw DomainError("orbit length must be >= 1");
  if (l_max > options.l_max_limit)
    throw CapacityError(fmt::format("orbit length {} exceeds the configured limit {}",
                                    l_max, options.l_max_limit));
  (void)graph;
}

}  // namespace

TraceSeries trace_series(const QuantumGraph& graph, int l_max,
                         const OrbitOptions& options) {
  check_limits(graph, l_max, options);
  const int stride = graph.symbol_stride();
  const int steps = stride * l_max;
  const int dim = graph.dimension();
  const KeyLayout layout = make_layout(graph, steps);
  const ComplexMatrix& u = graph.u_matrix();

  // Sparse transitions: for each k, the nonzero U(k, j).
  std::vector<std::vector<std::pair<int, Complex>>> row_nz(dim);
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < dim; ++j)
      if (std::abs(u(k, j)) > kTransitionZero) row_nz[k].emplace_back(j, u(k, j));

  std::vector<Poly> power(static_cast<std::size_t>(dim) * dim);
  const auto at = [dim](std::vector<Poly>& m, int i, int j) -> Poly& {
    return m[static_cast<std::size_t>(i) * dim + j];
  };
  for (int i = 0; i < dim; ++i)
    for (const auto& [j, c] : row_nz[i])
      at(power, i, j)[layout.unit(graph.bond_of(i))] += c;

  TraceSeries out;
  for (int s = 1; s <= steps; ++s) {
    if (s > 1) {
      std::vector<Poly> next(power.size());
      std::size_t total = 0;
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k) {
          const Poly& pik = at(power, i, k);
          if (pik.empty()) continue;
          const std::uint64_t shift = layout.unit(graph.bond_of(k));
          for (const auto& [j, c] : row_nz[k]) {
            Poly& dst = at(next, i, j);
            for (const auto& [key, coef] : pik) dst[key + shift] += coef * c;
          }
        }
      for (const Poly& p : next) total += p.size();
      if (total > options.max_terms)
        throw CapacityError(fmt::format(
            "symbolic trace exceeded {} terms at length {} (steps {})",
            options.max_terms, (s + stride - 1) / stride, s));
      power = std::move(next);
    }

    Poly trace;
    for (int i = 0; i < dim; ++i)
      for (const auto& [key, coef] : at(power, i, i)) trace[key] += coef;

    if (s % stride != 0) {
      for (const auto& [key, coef] : trace)
        if (std::abs(coef) > 1e-12)
          throw IntegrityError(fmt::format(
              "Tr S^{} is nonzero but the graph declares symbol stride {}", s,
              stride));
      continue;
    }
    std::vector<OrbitTerm> terms;
    for (const auto& [key, coef] : trace) {
      const Complex amp = coef / static_cast<double>(stride);
      if (std::abs(amp) < 1e-16) continue;
      OrbitTerm t;
      t.amplitude = amp;
      t.symbolic_length = s / stride;
      t.traversals.resize(layout.bonds);
      for (int p = 0; p < layout.bonds; ++p) {
        t.traversals[p] = layout.count(key, p);
        t.reduced_action += t.traversals[p] * graph.reduced_actions()[p];
      }
      terms.push_back(std::move(t));
    }
    out.push_back(std::move(terms));
  }
  return out;
}

std::vector<OrbitTerm> trace_powers(const QuantumGraph& graph, int l,
                                    const OrbitOptions& options) {
  return trace_series(graph, l, options).back();
}

Complex evaluate_trace(const std::vector<OrbitTerm>& terms, int stride, double k) {
  Complex sum{0.0, 0.0};
  for (const OrbitTerm& t : terms)
    sum += t.amplitude * std::polar(1.0, t.reduced_action * k);
  return sum * static_cast<double>(stride);
}

std::vector<PrimeOrbitTerm> prime_orbits(const QuantumGraph& graph, int l_max,
                                         const OrbitOptions& options) {
  check_limits(graph, l_max, options);
  const int stride = graph.symbol_stride();
  const int max_steps = stride * l_max;
  const int dim = graph.dimension();
  const ComplexMatrix& u = graph.u_matrix();

  std::vector<PrimeOrbitTerm> out;
  std::vector<int> word(static_cast<std::size_t>(max_steps) + 1);

  // Fredricksen-Kessler-Maiorana recursion over prenecklace prefixes
  // word[1..t] with Lyndon period p, restricted to allowed transitions.
  // The prefix is a Lyndon word exactly when p == t.
  std::function<void(int, int)> extend = [&](int t, int p) {
    if (p == t && std::abs(u(word[1], word[t])) > kTransitionZero) {
      if (t % stride != 0)
        throw IntegrityError(fmt::format(
            "closed orbit of {} steps contradicts symbol stride {}", t, stride));
      PrimeOrbitTerm po;
      po.amplitude = Complex{1.0, 0.0};
      for (int i = 1; i <= t; ++i) {
        const int nxt = i == t ? word[1] : word[i + 1];
        po.amplitude *= u(nxt, word[i]);
        po.reduced_action += graph.directed_action(word[i]);
      }
      po.prime_length = t / stride;
      po.cycle.assign(word.begin() + 1, word.begin() + t + 1);
      out.push_back(std::move(po));
      if (out.size() > options.max_terms)
        throw CapacityError(fmt::format(
            "prime orbit enumeration exceeded {} orbits at {} steps",
            options.max_terms, t));
    }
    if (t == max_steps) return;
    const int floor_sym = word[t + 1 - p];
    for (int c = floor_sym; c < dim; ++c) {
      if (std::abs(u(c, word[t])) <= kTransitionZero) continue;
      word[t + 1] = c;
      extend(t + 1, c == floor_sym ? p : t + 1);
    }
  };
  for (int first = 0; first < dim; ++first) {
    word[1] = first;
    extend(1, 1);
  }
  return out;
}

Complex cell_phase_integral(const TrigPolynomial& trig, int n, double action) {
  const RootCell cell = root_cell(trig, n);
  return 2.0 * std::polar(1.0, action * cell.k_bar) *
         std::sin(kPi * action / (2.0 * trig.omega0)) / action;
}

ExpansionResult eigenvalue_integral(const TraceSeries& traces,
                                    const TrigPolynomial& trig, int n, int l_max) {
  const RootCell cell = root_cell(trig, n);
  if (l_max < 1 || l_max > static_cast<int>(traces.size()))
    throw DomainError("l_max outside the precomputed trace series");
  const double lo = cell.k_hat_lo, hi = cell.k_hat_hi;
  const double offset = trig.mu + 1 + trig.gamma0;
  const double mean_integral =
      trig.omega0 / (2.0 * kPi) * (hi - lo) * (hi + lo) - offset * (hi - lo);
  const double head = kPi / trig.omega0 * (2 * n + trig.mu + trig.gamma0) - mean_integral;

  ExpansionResult r;
  Complex acc{0.0, 0.0};
  for (int l = 1; l <= l_max; ++l) {
    for (const OrbitTerm& t : traces[l - 1]) {
      const double L = t.reduced_action;
      // integral of e^{iLk} over [lo, hi]
      const Complex integral =
          (std::polar(1.0, L * hi) - std::polar(1.0, L * lo)) / Complex{0.0, L};
      acc += t.amplitude * integral / static_cast<double>(l);
      ++r.terms_used;
    }
    r.partial_sums.push_back(head - acc.imag() / kPi);
  }
  r.k = r.partial_sums.back();
  return r;
}

ExpansionResult eigenvalue_integral(const QuantumGraph& graph,
                                    const TrigPolynomial& trig, int n, int l_max) {
  root_cell(trig, n);
  return eigenvalue_integral(trace_series(graph, l_max), trig, n, l_max);
}

ExpansionResult eigenvalue_po(const TraceSeries& traces, const TrigPolynomial& trig,
                              int n, int l_max) {
  const RootCell cell = root_cell(trig, n);
  if (l_max < 1 || l_max > static_cast<int>(traces.size()))
    throw DomainError("l_max outside the precomputed trace series");
  ExpansionResult r;
  double acc = 0.0;
  for (int l = 1; l <= l_max; ++l) {
    for (const OrbitTerm& t : traces[l - 1]) {
      const double L = t.reduced_action;
      const Complex z = t.amplitude * std::polar(1.0, L * cell.k_bar);
      acc += z.imag() / L * std::sin(kPi * L / (2.0 * trig.omega0)) / l;
      ++r.terms_used;
    }
    r.partial_sums.push_back(cell.k_bar - 2.0 / kPi * acc);
  }
  r.k = r.partial_sums.back();
  return r;
}

ExpansionResult eigenvalue_po(const QuantumGraph& graph, const TrigPolynomial& trig,
                              int n, int l_max) {
  root_cell(trig, n);
  return eigenvalue_po(trace_series(graph, l_max), trig, n, l_max);
}

ExpansionResult eigenvalue_po_prime(const std::vector<PrimeOrbitTerm>& primes,
                                    const TrigPolynomial& trig, int n, int l_max) {
  const RootCell cell = root_cell(trig, n);
  if (l_max < 1) throw DomainError("l_max must be >= 1");
  std::vector<std::vector<const PrimeOrbitTerm*>> by_length(l_max + 1);
  for (const PrimeOrbitTerm& p : primes)
    if (p.prime_length <= l_max) by_length[p.prime_length].push_back(&p);

  ExpansionResult r;
  for (const auto& group : by_length) r.primes_used += group.size();
  double acc = 0.0;
  for (int l = 1; l <= l_max; ++l) {
    for (int lp = 1; lp <= l; ++lp) {
      if (l % lp != 0) continue;
      const int nu = l / lp;
      for (const PrimeOrbitTerm* p : by_length[lp]) {
        const double L = p->reduced_action;
        const Complex z = std::pow(p->amplitude, nu) * std::polar(1.0, nu * L * cell.k_bar);
        acc += z.imag() / (static_cast<double>(nu) * nu * L) *
               std::sin(nu * kPi * L / (2.0 * trig.omega0));
        ++r.terms_used;
      }
    }
    r.partial_sums.push_back(cell.k_bar - 2.0 / kPi * acc);
  }
  r.k = r.partial_sums.back();
  return r;
}

ExpansionResult eigenvalue_po_prime(const QuantumGraph& graph,
                                    const TrigPolynomial& trig, int n, int l_max) {
  root_cell(trig, n);
  return eigenvalue_po_prime(prime_orbits(graph, l_max), trig, n, l_max);
}

namespace {

double integrate_checked(const std::function<double(double)>& g, double lo,
                         double hi, double tol, const char* what) {
  double error = 0.0, l1 = 0.0;
  // Asking for much less than tol lets roundoff in the per-panel error
  // estimates accumulate over a deep subdivision; a tenth of it is enough.
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      g, lo, hi, 15, 0.1 * tol, &error, &l1);
  if (!(error <= tol * std::max(1.0, l1)) || !std::isfinite(value))
    throw AccuracyError(fmt::format(
        "quadrature of {} over [{}, {}] reached error {:.3e}, target {:.1e}",
        what, lo, hi, error, tol));
  return value;
}

}  // namespace

double function_of_root(const RealFunction& f, const RealFunction& f_prime,
                        const TrigPolynomial& trig, const TraceSeries& traces,
                        int n, int l_max, const FunctionOfRootOptions& options) {
  const RootCell cell = root_cell(trig, n);
  if (l_max < 1 || l_max > static_cast<int>(traces.size()))
    throw DomainError("l_max outside the precomputed trace series");
  const double lo = cell.k_hat_lo, hi = cell.k_hat_hi;
  const double tol = options.quadrature_tolerance;
  const double offset = trig.mu + 1 + trig.gamma0;

  const double mean = integrate_checked(
      [&](double k) { return f_prime(k) * (trig.omega0 * k / kPi - offset); }, lo,
      hi, tol, "f'(k) Nbar(k)");

  double fluct = 0.0;
  for (int l = 1; l <= l_max; ++l) {
    for (const OrbitTerm& t : traces[l - 1]) {
      const double L = t.reduced_action;
      const double re = integrate_checked(
          [&](double k) { return f_prime(k) * std::cos(L * k); }, lo, hi, tol,
          "Re G_n");
      const double im = integrate_checked(
          [&](double k) { return f_prime(k) * std::sin(L * k); }, lo, hi, tol,
          "Im G_n");
      fluct += (t.amplitude * Complex{re, im}).imag() / l;
    }
  }
  return n * f(hi) - (n - 1) * f(lo) - mean - fluct / kPi;
}

double function_of_root(const RealFunction& f, const RealFunction& f_prime,
                        const TrigPolynomial& trig, const QuantumGraph& graph,
                        int n, int l_max, const FunctionOfRootOptions& options) {
  root_cell(trig, n);
  return function_of_root(f, f_prime, trig, trace_series(graph, l_max), n, l_max,
                          options);
}

}  // namespace qgraph
