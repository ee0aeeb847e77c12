#pragma once

#include <iosfwd>
#include <string>

#include "qgraph/graph.hpp"

namespace qgraph {

// Graph definition files are line oriented; '#' starts a comment.
//
//   vertices 3
//   bond 1 2 0.3
//   bond 2 3 0.7 lambda 0.5
//   dirichlet 1 3
//   stride 2
//   base_length 0.1
//   umatrix
//   <2N_B rows of 2N_B entries "re,im">
//
// Vertices are 1-based. Without `umatrix` the Kirchhoff construction is used
// (with the listed Dirichlet vertices) and bonds may appear in any order.
// With `umatrix` the bonds must already be listed in canonical (i, j) order
// with i < j, since the rows and columns follow the directed-bond ordering
// (+bond block, then -bond block). Violations raise ConfigError prefixed with
// "<source>:<line>:".
QuantumGraph read_graph(std::istream& in, const std::string& source = "<graph>");
QuantumGraph load_graph_file(const std::string& path);

// Writes a graph with its explicit U so that it reloads to the same matrices.
void write_graph(std::ostream& out, const QuantumGraph& graph);

}  // namespace qgraph
