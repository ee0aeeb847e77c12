#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qgraph {

double Bond::dressing() const {
  return lambda ? std::sqrt(1.0 - *lambda) : 1.0;
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  const ComplexMatrix defect =
      u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return defect.cwiseAbs().maxCoeff();
}

QuantumGraph::QuantumGraph(int num_vertices, std::vector<Bond> bonds,
                           ComplexMatrix u, int symbol_stride,
                           std::optional<double> base_length)
    : num_vertices_(num_vertices),
      bonds_(std::move(bonds)),
      u_(std::move(u)),
      symbol_stride_(symbol_stride),
      base_length_(base_length) {
  if (num_vertices_ < 1) throw ConfigError("graph needs at least one vertex");
  if (bonds_.empty()) throw ConfigError("graph needs at least one bond");
  if (symbol_stride_ < 1) throw ConfigError("symbol stride must be >= 1");
  for (std::size_t p = 0; p < bonds_.size(); ++p) {
    const Bond& b = bonds_[p];
    if (b.from < 0 || b.to >= num_vertices_ || b.from >= b.to)
      throw ConfigError(fmt::format(
          "bond {}: vertices ({}, {}) must satisfy 0 <= from < to < {}", p,
          b.from, b.to, num_vertices_));
    if (p > 0) {
      const Bond& prev = bonds_[p - 1];
      if (std::pair(prev.from, prev.to) > std::pair(b.from, b.to))
        throw ConfigError(fmt::format(
            "bond {}: bonds must be sorted by (from, to)", p));
    }
    if (!(b.length > 0.0) || !std::isfinite(b.length))
      throw ConfigError(fmt::format("bond {}: length must be positive", p));
    if (b.lambda && !(*b.lambda >= 0.0 && *b.lambda < 1.0))
      throw ConfigError(
          fmt::format("bond {}: lambda must lie in [0, 1)", p));
    actions_.push_back(b.reduced_action());
  }
  if (u_.rows() != dimension() || u_.cols() != dimension())
    throw ConfigError(fmt::format("U must be {0}x{0}, got {1}x{2}",
                                  dimension(), u_.rows(), u_.cols()));
  const double defect = unitarity_defect(u_);
  if (!(defect < 1e-12))
    throw ConfigError(fmt::format(
        "U is not unitary: max|U^dagger U - I| = {:.3e} (limit 1e-12)",
        defect));
  if (base_length_) {
    if (!(*base_length_ > 0.0))
      throw ConfigError("base length must be positive");
    for (std::size_t p = 0; p < actions_.size(); ++p) {
      const double ratio = actions_[p] / *base_length_;
      if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError(fmt::format(
            "bond {}: reduced action {} is not an integer multiple of the "
            "base length {}",
            p, actions_[p], *base_length_));
    }
  }
}

int QuantumGraph::signed_index(int i, int j) const {
  const int lo = std::min(i, j), hi = std::max(i, j);
  for (std::size_t p = 0; p < bonds_.size(); ++p) {
    if (bonds_[p].from == lo && bonds_[p].to == hi) {
      const int label = static_cast<int>(p) + 1;
      return i < j ? label : -label;
    }
  }
  return 0;
}

std::optional<std::vector<long long>> QuantumGraph::integer_actions() const {
  if (!base_length_) return std::nullopt;
  std::vector<long long> out;
  for (double a : actions_) out.push_back(std::llround(a / *base_length_));
  return out;
}

double QuantumGraph::omega0() const {
  return std::accumulate(actions_.begin(), actions_.end(), 0.0);
}

Eigen::VectorXcd phase_diagonal(const QuantumGraph& graph, double k) {
  const int nb = graph.num_bonds();
  Eigen::VectorXcd d(graph.dimension());
  for (int p = 0; p < nb; ++p) {
    const Complex z = std::polar(1.0, graph.reduced_actions()[p] * k);
    d[p] = z;
    d[nb + p] = z;
  }
  return d;
}

ComplexMatrix build_smatrix(const QuantumGraph& graph, double k) {
  if (!std::isfinite(k)) throw DomainError("wave number must be finite");
  return phase_diagonal(graph, k).asDiagonal() * graph.u_matrix();
}

namespace {

void check_connected(const Topology& t) {
  std::vector<std::vector<int>> adj(t.num_vertices);
  for (const Bond& b : t.bonds) {
    adj[b.from].push_back(b.to);
    adj[b.to].push_back(b.from);
  }
  std::vector<bool> seen(t.num_vertices, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        q.push(w);
      }
  }
  for (int v = 0; v < t.num_vertices; ++v) {
    if (adj[v].empty())
      throw ConfigError(fmt::format("vertex {} has valency 0", v + 1));
    if (!seen[v])
      throw ConfigError(fmt::format(
          "graph is disconnected: vertex {} unreachable from vertex 1", v + 1));
  }
}

}  // namespace

ComplexMatrix kirchhoff_umatrix(const Topology& topology) {
  if (topology.num_vertices < 1 || topology.bonds.empty())
    throw ConfigError("topology needs vertices and bonds");
  for (const Bond& b : topology.bonds)
    if (b.from < 0 || b.to >= topology.num_vertices || b.from >= b.to)
      throw ConfigError("bond endpoints must satisfy 0 <= from < to < N_V");
  check_connected(topology);

  const int nb = static_cast<int>(topology.bonds.size());
  const auto kind = [&](int v) {
    return v < static_cast<int>(topology.vertex_kinds.size())
               ? topology.vertex_kinds[v]
               : VertexKind::kirchhoff;
  };
  // Directed bonds arriving at / leaving each vertex.
  std::vector<std::vector<int>> incoming(topology.num_vertices),
      outgoing(topology.num_vertices);
  for (int p = 0; p < nb; ++p) {
    const Bond& b = topology.bonds[p];
    incoming[b.to].push_back(p);
    outgoing[b.from].push_back(p);
    incoming[b.from].push_back(nb + p);
    outgoing[b.to].push_back(nb + p);
  }

  ComplexMatrix u = ComplexMatrix::Zero(2 * nb, 2 * nb);
  for (int v = 0; v < topology.num_vertices; ++v) {
    double total = 0.0;
    for (int in : incoming[v]) total += topology.bonds[in % nb].dressing();
    for (int in : incoming[v]) {
      const int bin = in % nb;
      for (int out : outgoing[v]) {
        const int bout = out % nb;
        // A reflection returns along the same bond, i.e. the reversed
        // directed index.
        const bool same = (bin == bout) && (in != out);
        double amp;
        if (kind(v) == VertexKind::dirichlet) {
          amp = same ? -1.0 : 0.0;
        } else {
          amp = 2.0 *
                    std::sqrt(topology.bonds[bin].dressing() *
                              topology.bonds[bout].dressing()) /
                    total -
                (same ? 1.0 : 0.0);
        }
        u(out, in) += amp;
      }
    }
  }
  return u;
}

QuantumGraph make_kirchhoff_graph(Topology topology, int symbol_stride) {
  for (Bond& b : topology.bonds)
    if (b.from > b.to) std::swap(b.from, b.to);
  std::stable_sort(topology.bonds.begin(), topology.bonds.end(),
                   [](const Bond& x, const Bond& y) {
                     return std::pair(x.from, x.to) < std::pair(y.from, y.to);
                   });
  ComplexMatrix u = kirchhoff_umatrix(topology);
  return QuantumGraph(topology.num_vertices, std::move(topology.bonds),
                      std::move(u), symbol_stride);
}

double ThreeVertexParams::beta() const { return std::sqrt(1.0 - lambda); }

double ThreeVertexParams::r() const {
  const double bt = beta();
  return (1.0 - bt) / (1.0 + bt);
}

void ThreeVertexParams::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw DomainError(fmt::format("lambda = {} must lie in (0, 1)", lambda));
  if (!(a > 0.0) || !(b > 0.0))
    throw DomainError("bond lengths a and b must be positive");
}

ThreeVertexParams ThreeVertexParams::family(int m, double b) {
  if (m < 1) throw DomainError("family index m must be positive");
  const double r = 1.0 / std::sqrt(2.0);
  const double bt = (1.0 - r) / (1.0 + r);
  ThreeVertexParams p;
  p.b = b;
  p.lambda = 1.0 - bt * bt;
  p.a = m * bt * b;
  return p;
}

QuantumGraph three_vertex_graph(const ThreeVertexParams& params) {
  params.validate();
  Topology t;
  t.num_vertices = 3;
  t.bonds = {Bond{0, 1, params.a, std::nullopt},
             Bond{1, 2, params.b, params.lambda}};
  t.vertex_kinds = {VertexKind::dirichlet, VertexKind::kirchhoff,
                    VertexKind::dirichlet};
  return make_kirchhoff_graph(std::move(t), /*symbol_stride=*/2);
}

}  // namespace qgraph
