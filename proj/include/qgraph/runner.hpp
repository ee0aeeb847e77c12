#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

enum class Method { oracle, integral, orbit, prime_orbit, necklace, lagrange };
enum class OutputFormat { csv, text };

inline constexpr const char* kResultsHeader = "# qgraph results v1";
inline constexpr const char* kConvergenceHeader = "# qgraph convergence v1";
inline constexpr const char* kOracleHeader = "# qgraph oracle v1";

std::string method_name(Method m);
/// Accepts a single name or "all"; "all" expands to every method that
/// applies to the graph source (necklace only for three-vertex families).
std::vector<Method> parse_methods(const std::string& spec, bool three_vertex);

/// "1,10,100", "1-20" or mixtures; sorted, duplicates removed.
std::vector<int> parse_n_list(const std::string& spec);

OutputFormat parse_format(const std::string& s);

/// Built-in families: chain-3v (a=0.3, b=0.7, lambda=0.5), family-m1,
/// family-m2. Throws ConfigError for unknown names.
ThreeVertexParams builtin_family(const std::string& name);

struct RunConfig {
  std::string graph_file;             // takes precedence over family
  std::string family = "chain-3v";
  std::optional<double> a, b, lambda;  // overrides for the family
  std::string methods = "all";
  std::vector<int> n_values;
  int l_max = 20;
  int order = 8;
  double tol = 1e-12;                 // bisection tolerance
  OutputFormat format = OutputFormat::csv;
  std::string out_path;               // empty: the supplied stream
  bool with_oracle = false;           // also emit oracle rows
  bool partial_sums = false;
  unsigned threads = 0;               // 0: hardware concurrency

  void validate() const;
};

struct Record {
  int n = 0;
  Method method = Method::oracle;
  int truncation = 0;  // l_max or order; 0 for the oracle
  double k = 0.0;
  double omega0_k = 0.0;
  std::optional<double> oracle_delta;  // k - k_oracle
  std::size_t terms = 0;
  std::vector<double> partial_sums;    // of k
  bool warning = false;
};

/// All records in (n, method) order. Deterministic for a given config.
std::vector<Record> compute(const RunConfig& config);

void write_records(std::ostream& out, const std::vector<Record>& records,
                   const RunConfig& config);

/// Library errors mapped to process exit codes: 2 config, 3 regularity,
/// 4 capacity, 1 anything else.
int exit_code_for(const std::exception& e);

/// Computes and writes; returns the exit status. Diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Oracle table: n, k_n, cell bounds and the exact staircase N(k_hat_n).
void write_oracle_table(std::ostream& out, const RunConfig& config);
int run_oracle_table(const RunConfig& config, std::ostream& out, std::ostream& err);

struct ConvergenceConfig {
  std::string family = "family-m2";
  int n = 1;
  int p_max = 19;
  OutputFormat format = OutputFormat::text;
  std::string out_path;
};

void write_convergence(std::ostream& out, const ConvergenceConfig& config);
int report_convergence(const ConvergenceConfig& config, std::ostream& out,
                       std::ostream& err);

}  // namespace qgraph
