#include "qgraph/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qgraph {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

class LineError {
 public:
  LineError(const std::string& source, int line) : source_(source), line_(line) {}
  [[noreturn]] void operator()(const std::string& msg) const {
    throw ConfigError(fmt::format("{}:{}: {}", source_, line_, msg));
  }

 private:
  const std::string& source_;
  int line_;
};

double parse_double(const std::string& tok, const LineError& fail) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(fmt::format("bad number '{}'", tok));
  return v;
}

int parse_int(const std::string& tok, const LineError& fail) {
  int v = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end)
    fail(fmt::format("bad integer '{}'", tok));
  return v;
}

}  // namespace

QuantumGraph read_graph(std::istream& in, const std::string& source) {
  int num_vertices = 0;
  int stride = 1;
  std::optional<double> base_length;
  std::vector<Bond> bonds;
  std::vector<int> dirichlet;
  std::vector<std::vector<Complex>> rows;
  bool in_matrix = false;
  int matrix_line = 0;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const LineError fail(source, line_no);
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const auto tok = split_ws(raw);
    if (tok.empty()) continue;

    if (in_matrix) {
      std::vector<Complex> row;
      for (const auto& t : tok) {
        const auto comma = t.find(',');
        if (comma == std::string::npos)
          fail(fmt::format("matrix entry '{}' must be 're,im'", t));
        row.emplace_back(parse_double(t.substr(0, comma), fail),
                         parse_double(t.substr(comma + 1), fail));
      }
      rows.push_back(std::move(row));
      continue;
    }

    const std::string& key = tok[0];
    if (key == "vertices") {
      if (tok.size() != 2) fail("expected 'vertices <count>'");
      num_vertices = parse_int(tok[1], fail);
      if (num_vertices < 1) fail("vertex count must be positive");
    } else if (key == "bond") {
      if (tok.size() != 4 && tok.size() != 6)
        fail("expected 'bond <i> <j> <length> [lambda <value>]'");
      Bond b;
      b.from = parse_int(tok[1], fail) - 1;
      b.to = parse_int(tok[2], fail) - 1;
      b.length = parse_double(tok[3], fail);
      if (tok.size() == 6) {
        if (tok[4] != "lambda") fail(fmt::format("unknown bond option '{}'", tok[4]));
        b.lambda = parse_double(tok[5], fail);
        if (!(*b.lambda >= 0.0 && *b.lambda < 1.0)) fail("lambda must lie in [0, 1)");
      }
      if (num_vertices == 0) fail("'vertices' must precede bonds");
      if (b.from < 0 || b.to < 0 || b.from >= num_vertices || b.to >= num_vertices)
        fail("bond endpoint out of range");
      if (b.from == b.to) fail("self-loops are not supported");
      if (!(b.length > 0.0)) fail("bond length must be positive");
      bonds.push_back(b);
    } else if (key == "dirichlet") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const int v = parse_int(tok[i], fail) - 1;
        if (v < 0 || v >= num_vertices) fail("dirichlet vertex out of range");
        dirichlet.push_back(v);
      }
    } else if (key == "stride") {
      if (tok.size() != 2) fail("expected 'stride <s>'");
      stride = parse_int(tok[1], fail);
      if (stride < 1) fail("stride must be >= 1");
    } else if (key == "base_length") {
      if (tok.size() != 2) fail("expected 'base_length <x>'");
      base_length = parse_double(tok[1], fail);
      if (!(*base_length > 0.0)) fail("base length must be positive");
    } else if (key == "umatrix") {
      in_matrix = true;
      matrix_line = line_no;
    } else {
      fail(fmt::format("unknown keyword '{}'", key));
    }
  }

  const LineError at_end(source, line_no);
  if (num_vertices == 0) at_end("missing 'vertices'");
  if (bonds.empty()) at_end("no bonds defined");

  try {
    if (!in_matrix) {
      Topology t;
      t.num_vertices = num_vertices;
      t.bonds = std::move(bonds);
      t.vertex_kinds.assign(num_vertices, VertexKind::kirchhoff);
      for (int v : dirichlet) t.vertex_kinds[v] = VertexKind::dirichlet;
      QuantumGraph g = make_kirchhoff_graph(std::move(t), stride);
      if (base_length)
        return QuantumGraph(g.num_vertices(), g.bonds(), g.u_matrix(), stride,
                            base_length);
      return g;
    }

    const LineError at_matrix(source, matrix_line);
    if (!dirichlet.empty()) at_matrix("'dirichlet' cannot be combined with an explicit U");
    for (auto& b : bonds)
      if (b.from > b.to) at_matrix("with an explicit U, bonds must be listed with i < j");
    const int dim = 2 * static_cast<int>(bonds.size());
    if (static_cast<int>(rows.size()) != dim)
      at_matrix(fmt::format("U needs {} rows, found {}", dim, rows.size()));
    ComplexMatrix u(dim, dim);
    for (int r = 0; r < dim; ++r) {
      if (static_cast<int>(rows[r].size()) != dim)
        at_matrix(fmt::format("U row {} has {} entries, expected {}", r + 1,
                              rows[r].size(), dim));
      for (int c = 0; c < dim; ++c) u(r, c) = rows[r][c];
    }
    return QuantumGraph(num_vertices, std::move(bonds), std::move(u), stride,
                        base_length);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(source + ":", 0) == 0) throw;
    throw ConfigError(fmt::format("{}:{}: {}", source, in_matrix ? matrix_line : line_no, msg));
  }
}

QuantumGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open graph file '{}'", path));
  return read_graph(in, path);
}

void write_graph(std::ostream& out, const QuantumGraph& graph) {
  out << fmt::format("vertices {}\n", graph.num_vertices());
  for (const Bond& b : graph.bonds()) {
    out << fmt::format("bond {} {} {:.17g}", b.from + 1, b.to + 1, b.length);
    if (b.lambda) out << fmt::format(" lambda {:.17g}", *b.lambda);
    out << '\n';
  }
  if (graph.symbol_stride() != 1)
    out << fmt::format("stride {}\n", graph.symbol_stride());
  if (graph.base_length())
    out << fmt::format("base_length {:.17g}\n", *graph.base_length());
  out << "umatrix\n";
  const ComplexMatrix& u = graph.u_matrix();
  for (int r = 0; r < u.rows(); ++r) {
    for (int c = 0; c < u.cols(); ++c)
      out << fmt::format("{}{:.17g},{:.17g}", c ? " " : "", u(r, c).real(),
                         u(r, c).imag());
    out << '\n';
  }
}

}  // namespace qgraph
