#include "qgraph/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "qgraph/bisection.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/oracle.hpp"

namespace qgraph {
namespace {

constexpr double kPi = std::numbers::pi;

// Reduces a phase (units of pi) into (-1, 1].
double reduce_phase(double g) {
  g -= 2.0 * std::floor((g + 1.0) / 2.0);
  if (g <= -1.0) g += 2.0;
  return g;
}

// Phasor of a cos(omega k - pi gamma) at k = 0 rotated frame.
Complex phasor(const TrigTerm& t) {
  return std::polar(t.amplitude, -kPi * t.gamma);
}

}  // namespace

double TrigPolynomial::evaluate(double k) const {
  double phi = 0.0;
  for (const TrigTerm& t : terms)
    phi += t.amplitude * std::cos(t.omega * k - kPi * t.gamma);
  return std::cos(omega0 * k - kPi * gamma0) - phi;
}

double TrigPolynomial::alpha() const {
  double s = 0.0;
  for (const TrigTerm& t : terms) s += std::abs(t.amplitude);
  return s;
}

TrigPolynomial TrigPolynomial::canonical(double omega0, double gamma0,
                                         std::vector<TrigTerm> terms,
                                         std::optional<int> mu) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0))
    throw DomainError("omega0 must be positive and finite");
  const double tol = 1e-12 * omega0;

  // cos(-w k - pi g) = cos(w k + pi g)
  for (TrigTerm& t : terms) {
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.omega) ||
        !std::isfinite(t.gamma))
      throw DomainError("trig term has non-finite entries");
    if (t.omega < 0.0) {
      t.omega = -t.omega;
      t.gamma = -t.gamma;
    }
    if (!(t.omega < omega0 - tol))
      throw DomainError(fmt::format(
          "term frequency {} is not below omega0 = {}", t.omega, omega0));
  }
  std::sort(terms.begin(), terms.end(),
            [](const TrigTerm& x, const TrigTerm& y) { return x.omega > y.omega; });

  std::vector<TrigTerm> merged;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i;
    Complex c{0.0, 0.0};
    double wsum = 0.0;
    while (j < terms.size() && terms[i].omega - terms[j].omega <= tol) {
      c += phasor(terms[j]);
      wsum += terms[j].omega;
      ++j;
    }
    const double w = wsum / static_cast<double>(j - i);
    TrigTerm t;
    if (w <= tol) {
      // Constant term: only the real part of the phasor survives.
      t.omega = 0.0;
      t.amplitude = std::abs(c.real());
      t.gamma = c.real() >= 0.0 ? 0.0 : 1.0;
    } else {
      t.omega = w;
      t.amplitude = std::abs(c);
      t.gamma = -std::arg(c) / kPi;
    }
    if (t.amplitude >= 1e-14) merged.push_back(t);
    i = j;
  }

  double g0 = reduce_phase(gamma0);
  if (g0 < 0.0) {
    g0 += 1.0;
    for (TrigTerm& t : merged) t.gamma += 1.0;
  }
  for (TrigTerm& t : merged) t.gamma = reduce_phase(t.gamma);

  TrigPolynomial out;
  out.omega0 = omega0;
  out.gamma0 = g0;
  out.terms = std::move(merged);
  if (mu)
    out.mu = *mu;
  else if (out.is_regular())
    out.mu = scan_mu(out);
  return out;
}

RegularityReport regularity(const TrigPolynomial& trig) {
  RegularityReport r;
  for (const TrigTerm& t : trig.terms) r.magnitudes.push_back(std::abs(t.amplitude));
  r.alpha = trig.alpha();
  r.is_regular = r.alpha < 1.0;
  return r;
}

double cell_boundary(const TrigPolynomial& trig, int n) {
  return kPi / trig.omega0 * (n + trig.mu + 1 + trig.gamma0);
}

RootCell root_cell(const TrigPolynomial& trig, int n) {
  const double alpha = trig.alpha();
  if (!(alpha < 1.0))
    throw RegularityError(fmt::format(
        "spectral equation is not regular (alpha = {:.6g} >= 1); root cells "
        "are undefined, use the dense-scan oracle",
        alpha));
  if (n < 1) throw DomainError("root index n must be positive");
  RootCell c;
  c.n = n;
  c.k_hat_lo = cell_boundary(trig, n - 1);
  c.k_hat_hi = cell_boundary(trig, n);
  c.k_bar = 0.5 * (c.k_hat_lo + c.k_hat_hi);
  c.k_tilde_max = (kPi / 2 - std::acos(alpha)) / trig.omega0;
  c.root_zone = {c.k_bar - c.k_tilde_max, c.k_bar + c.k_tilde_max};
  c.free_minus = {c.k_hat_lo, c.root_zone.lo};
  c.free_plus = {c.root_zone.hi, c.k_hat_hi};
  return c;
}

int scan_mu(const TrigPolynomial& trig) {
  if (!trig.is_regular())
    throw RegularityError("mu scan requires a regular spectral equation");
  const double width = kPi / trig.omega0;
  const double zero_tol = 1e-9 * width;
  const auto f = [&](double k) { return trig.evaluate(k); };
  int m = static_cast<int>(std::floor(-trig.gamma0)) - 1;
  for (int guard = 0; guard < 8; ++guard, ++m) {
    const double lo = width * (m + trig.gamma0);
    const double hi = width * (m + 1 + trig.gamma0);
    if (hi <= 0.0) continue;
    const auto b = bisect(f, lo, hi, 1e-13 * width);
    if (!b)
      throw IntegrityError(fmt::format(
          "no sign change in cell [{}, {}] during mu scan", lo, hi));
    if (b->midpoint() > zero_tol) return m - 1;
  }
  throw IntegrityError("mu scan did not find a positive zero");
}

double secular_function(const QuantumGraph& graph, double k) {
  const ComplexMatrix& u = graph.u_matrix();
  const double tau = std::arg(u.determinant());
  ComplexMatrix m = -u.adjoint();
  m.diagonal() += phase_diagonal(graph, k);
  const Complex value = std::polar(1.0, tau / 2 - graph.omega0() * k) *
                        m.determinant();
  return value.real();
}

TrigPolynomial expand_secular_determinant(const QuantumGraph& graph,
                                          const ExpansionOptions& options) {
  const int dim = graph.dimension();
  const int nb = graph.num_bonds();
  if (dim > options.max_dimension)
    throw CapacityError(fmt::format(
        "secular expansion over 2^{} subsets exceeds the dimension limit {}",
        dim, options.max_dimension));

  const ComplexMatrix minus_uinv = -graph.u_matrix().adjoint();
  const double tau = std::arg(graph.u_matrix().determinant());
  const Complex half_tau = std::polar(1.0, tau / 2);

  // Coefficient per exponent pattern n_p in {0,1,2}, encoded base 3.
  std::size_t num_patterns = 1;
  for (int p = 0; p < nb; ++p) num_patterns *= 3;
  std::vector<Complex> coeff(num_patterns, Complex{0.0, 0.0});

  std::vector<int> rest;
  rest.reserve(dim);
  const std::uint64_t subsets = std::uint64_t{1} << dim;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    rest.clear();
    std::size_t key = 0, pow3 = 1;
    for (int p = 0; p < nb; ++p) {
      const int cnt = static_cast<int>((mask >> p) & 1u) +
                      static_cast<int>((mask >> (nb + p)) & 1u);
      key += static_cast<std::size_t>(cnt) * pow3;
      pow3 *= 3;
    }
    for (int j = 0; j < dim; ++j)
      if (!((mask >> j) & 1u)) rest.push_back(j);
    Complex minor{1.0, 0.0};
    if (!rest.empty()) {
      const int r = static_cast<int>(rest.size());
      ComplexMatrix sub(r, r);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) sub(a, b) = minus_uinv(rest[a], rest[b]);
      minor = sub.determinant();
    }
    coeff[key] += minor;
  }

  // Frequency beta = sum_p (n_p - 1) L_p of each pattern, exact when the
  // actions are integer multiples of a declared base length.
  const auto ints = graph.integer_actions();
  struct Mono {
    double beta;
    long long ibeta;
    Complex c;
  };
  std::vector<Mono> monos;
  double scale = 0.0;
  for (std::size_t key = 0; key < num_patterns; ++key) {
    scale = std::max(scale, std::abs(coeff[key]));
    if (coeff[key] == Complex{0.0, 0.0}) continue;
    std::size_t rem = key;
    double beta = 0.0;
    long long ibeta = 0;
    for (int p = 0; p < nb; ++p) {
      const int cnt = static_cast<int>(rem % 3) - 1;
      rem /= 3;
      beta += cnt * graph.reduced_actions()[p];
      if (ints) ibeta += cnt * (*ints)[p];
    }
    if (ints) beta = static_cast<double>(ibeta) * *graph.base_length();
    monos.push_back({beta, ibeta, half_tau * coeff[key]});
  }
  std::sort(monos.begin(), monos.end(),
            [](const Mono& x, const Mono& y) { return x.beta < y.beta; });

  const double omega0 = graph.omega0();
  const double tol = options.merge_tolerance * omega0;
  struct Cluster {
    double beta;
    Complex c;
  };
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < monos.size();) {
    std::size_t j = i;
    Complex c{0.0, 0.0};
    double bsum = 0.0;
    while (j < monos.size() &&
           (ints ? monos[j].ibeta == monos[i].ibeta
                 : monos[j].beta - monos[i].beta <= tol)) {
      c += monos[j].c;
      bsum += monos[j].beta;
      ++j;
    }
    clusters.push_back({bsum / static_cast<double>(j - i), c});
    i = j;
  }

  const auto find_cluster = [&](double beta) -> const Cluster* {
    for (const Cluster& cl : clusters)
      if (std::abs(cl.beta - beta) <= std::max(tol, 1e-15 * omega0)) return &cl;
    return nullptr;
  };

  // Combine e^{i beta k} with its mirror e^{-i beta k}; their sum is real.
  const double reality_tol = 1e-9 * std::max(scale, 1.0);
  const Cluster* lead = find_cluster(omega0);
  if (!lead) throw DegenerateGraphError("no monomial at the leading frequency");
  struct Real {
    double omega;
    Complex c;  // contributes 2 Re(c e^{i omega k}), or Re(c) for omega = 0
  };
  std::vector<Real> parts;
  for (const Cluster& cl : clusters) {
    if (cl.beta < -tol) continue;
    if (std::abs(cl.beta) <= tol) {
      if (std::abs(cl.c.imag()) > reality_tol)
        throw IntegrityError("secular function has a non-real constant term");
      parts.push_back({0.0, cl.c});
      continue;
    }
    const Cluster* mirror = find_cluster(-cl.beta);
    const Complex cm = mirror ? mirror->c : Complex{0.0, 0.0};
    if (std::abs(cl.c - std::conj(cm)) > reality_tol)
      throw IntegrityError(fmt::format(
          "secular function is not real at frequency {}", cl.beta));
    parts.push_back({cl.beta, 0.5 * (cl.c + std::conj(cm))});
  }

  Complex lead_c{0.0, 0.0};
  for (const Real& r : parts)
    if (std::abs(r.omega - omega0) <= tol) lead_c = r.c;
  const double norm = 2.0 * std::abs(lead_c);
  if (!(norm / std::max(scale, 1.0) >= 1e-14))
    throw DegenerateGraphError("leading coefficient vanishes after normalization");

  // F(k) / norm = cos(omega0 k + arg c0) + sum 2|c|/norm cos(omega k + arg c)
  const double gamma0 = -std::arg(lead_c) / kPi;
  std::vector<TrigTerm> terms;
  for (const Real& r : parts) {
    if (std::abs(r.omega - omega0) <= tol) continue;
    TrigTerm t;
    t.omega = r.omega;
    if (r.omega == 0.0) {
      const double v = r.c.real() / norm;
      t.amplitude = std::abs(v);
      t.gamma = v >= 0.0 ? 1.0 : 0.0;  // -a cos(-pi gamma) = v
    } else {
      t.amplitude = 2.0 * std::abs(r.c) / norm;
      t.gamma = -(std::arg(r.c) + kPi) / kPi;
    }
    if (t.amplitude >= options.prune_threshold) terms.push_back(t);
  }

  TrigPolynomial trig = TrigPolynomial::canonical(omega0, gamma0, std::move(terms), 0);
  trig.mu = trig.is_regular() ? scan_mu(trig) : mu_from_eigenphases(graph, trig);
  return trig;
}

TrigPolynomial three_vertex_trig(const ThreeVertexParams& params) {
  params.validate();
  return TrigPolynomial::canonical(params.omega0(), 0.5,
                                   {TrigTerm{params.r(), params.omega1(), 0.5}});
}

void write_trig(std::ostream& out, const TrigPolynomial& trig) {
  out << "# qgraph trig-polynomial v1\n";
  out << fmt::format("omega0 {:.17g}\n", trig.omega0);
  out << fmt::format("gamma0 {:.17g}\n", trig.gamma0);
  out << fmt::format("mu {}\n", trig.mu);
  for (const TrigTerm& t : trig.terms)
    out << fmt::format("term {:.17g} {:.17g} {:.17g}\n", t.amplitude, t.omega,
                       t.gamma);
}

TrigPolynomial read_trig(std::istream& in, const std::string& source) {
  std::optional<double> omega0, gamma0;
  std::optional<int> mu;
  std::vector<TrigTerm> terms;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    std::string key;
    if (!(is >> key)) continue;
    const auto fail = [&](const std::string& msg) {
      throw ConfigError(fmt::format("{}:{}: {}", source, line_no, msg));
    };
    std::string extra;
    if (key == "omega0") {
      double v;
      if (!(is >> v) || (is >> extra)) fail("expected 'omega0 <value>'");
      omega0 = v;
    } else if (key == "gamma0") {
      double v;
      if (!(is >> v) || (is >> extra)) fail("expected 'gamma0 <value>'");
      gamma0 = v;
    } else if (key == "mu") {
      int v;
      if (!(is >> v) || (is >> extra)) fail("expected 'mu <integer>'");
      mu = v;
    } else if (key == "term") {
      TrigTerm t;
      if (!(is >> t.amplitude >> t.omega >> t.gamma) || (is >> extra))
        fail("expected 'term <amplitude> <omega> <gamma>'");
      terms.push_back(t);
    } else {
      fail(fmt::format("unknown keyword '{}'", key));
    }
  }
  if (!omega0 || !gamma0 || !mu)
    throw ConfigError(fmt::format("{}: record needs omega0, gamma0 and mu", source));
  TrigPolynomial t;
  t.omega0 = *omega0;
  t.gamma0 = *gamma0;
  t.mu = *mu;
  t.terms = std::move(terms);
  for (const TrigTerm& term : t.terms)
    if (!(term.omega < t.omega0))
      throw ConfigError(fmt::format("{}: term frequency {} not below omega0",
                                    source, term.omega));
  return t;
}

}  // namespace qgraph
