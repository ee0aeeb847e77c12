#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgraph {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// An undirected bond between vertices `from` < `to` (0-based).
///
/// `length` is the geometric length. A bond dressed with the scaling
/// potential lambda*E carries the local wave number sqrt(1-lambda)*k, so its
/// reduced action is sqrt(1-lambda)*length.
struct Bond {
  int from = 0;
  int to = 0;
  double length = 0.0;
  std::optional<double> lambda;

  double dressing() const;
  double reduced_action() const { return dressing() * length; }
};

/// Vertex boundary condition used by the flux-conserving builder.
enum class VertexKind { kirchhoff, dirichlet };

struct Topology {
  int num_vertices = 0;
  std::vector<Bond> bonds;
  // Indexed by vertex; missing entries default to Kirchhoff.
  std::vector<VertexKind> vertex_kinds;
};

/// A finite scaling quantum graph: S(k) = D(k) U with k-independent U.
///
/// Directed-bond ordering: bonds are sorted by (from, to); index p in
/// [0, N_B) is bond p traversed from->to (+Lambda), index N_B + p is the same
/// bond traversed to->from (-Lambda). U(out, in) is the amplitude for a wave
/// arriving along directed bond `in` to leave along directed bond `out`.
///
/// `symbol_stride` is the number of S steps per symbol of the orbit alphabet.
/// For tree graphs every closed orbit has even step length; the three-vertex
/// builder sets stride 2 so that one symbol is one round trip along a bond
/// and symbolic lengths coincide with binary necklace lengths.
class QuantumGraph {
 public:
  QuantumGraph(int num_vertices, std::vector<Bond> bonds, ComplexMatrix u,
               int symbol_stride = 1,
               std::optional<double> base_length = std::nullopt);

  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  int num_vertices() const { return num_vertices_; }
  int dimension() const { return 2 * num_bonds(); }
  int symbol_stride() const { return symbol_stride_; }

  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<double>& reduced_actions() const { return actions_; }
  const ComplexMatrix& u_matrix() const { return u_; }

  // Reduced action of a directed-bond index in the doubled convention.
  double directed_action(int index) const {
    return actions_[static_cast<std::size_t>(index % num_bonds())];
  }
  int bond_of(int index) const { return index % num_bonds(); }

  // Signed 1-based bond label Lambda for the directed bond (i -> j); 0 when
  // the vertices are not adjacent.
  int signed_index(int i, int j) const;

  /// Optional declared base length: every reduced action is an integer
  /// multiple of it, enabling exact frequency merging.
  const std::optional<double>& base_length() const { return base_length_; }
  std::optional<std::vector<long long>> integer_actions() const;

  /// Sum of reduced bond actions, the largest spectral frequency.
  double omega0() const;

 private:
  int num_vertices_;
  std::vector<Bond> bonds_;
  std::vector<double> actions_;
  ComplexMatrix u_;
  int symbol_stride_;
  std::optional<double> base_length_;
};

/// Parameters of the dressed linear three-vertex graph V1 -a- V2 -b- V3 with
/// the scaling potential lambda*E on the b bond.
struct ThreeVertexParams {
  double a = 0.3;
  double b = 0.7;
  double lambda = 0.5;

  double beta() const;
  double omega0() const { return a + beta() * b; }
  double omega1() const { return a - beta() * b; }
  double r() const;

  // Family a = m*beta*b with r = 1/sqrt(2), b = 1.
  static ThreeVertexParams family(int m, double b = 1.0);

  void validate() const;
};

/// Returns D(k) U.
ComplexMatrix build_smatrix(const QuantumGraph& graph, double k);

/// Diagonal of D(k) in the doubled index convention.
Eigen::VectorXcd phase_diagonal(const QuantumGraph& graph, double k);

/// Flux-conserving vertex scattering assembled in the directed-bond basis.
///
/// At a Kirchhoff vertex joining bonds with local dressings b_1..b_v the
/// block is 2 sqrt(b_i b_j) / sum(b) - delta_ij (2/v - delta for undressed
/// bonds). Dirichlet vertices reflect with -1.
ComplexMatrix kirchhoff_umatrix(const Topology& topology);

/// Builds a graph from a topology with the Kirchhoff U. Bonds are sorted into
/// canonical order first.
QuantumGraph make_kirchhoff_graph(Topology topology, int symbol_stride = 1);

/// The dressed three-vertex linear graph whose spectral equation is
/// sin(omega0 k) = r sin(omega1 k). Dead ends are Dirichlet.
QuantumGraph three_vertex_graph(const ThreeVertexParams& params);

/// max |U^dagger U - I|.
double unitarity_defect(const ComplexMatrix& u);

}  // namespace qgraph
