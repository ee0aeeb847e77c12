#include "qgraph/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "qgraph/errors.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/lagrange.hpp"
#include "qgraph/necklace.hpp"
#include "qgraph/oracle.hpp"
#include "qgraph/orbits.hpp"
#include "qgraph/trig_poly.hpp"

namespace qgraph {
namespace {

constexpr Method kAllMethods[] = {Method::oracle,      Method::integral,
                                  Method::orbit,       Method::prime_orbit,
                                  Method::necklace,    Method::lagrange};

std::string num(double v) { return fmt::format("{:.15g}", v); }

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

int parse_int(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", what, s));
  }
  if (used != t.size()) throw ConfigError(fmt::format("{}: '{}' is not an integer", what, s));
  return v;
}

// Everything shared by the per-n work items, built once up front.
struct Context {
  std::optional<ThreeVertexParams> params;
  std::optional<QuantumGraph> graph;
  TrigPolynomial trig;
  std::vector<Method> methods;
  TraceSeries traces;
  std::vector<PrimeOrbitTerm> primes;
  std::vector<std::vector<NecklaceOrbit>> necklaces;
};

bool uses(const std::vector<Method>& ms, Method m) {
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

Context build_context(const RunConfig& cfg) {
  Context ctx;
  if (!cfg.graph_file.empty()) {
    ctx.graph = load_graph_file(cfg.graph_file);
    ctx.trig = expand_secular_determinant(*ctx.graph);
  } else {
    ThreeVertexParams p = builtin_family(cfg.family);
    if (cfg.a) p.a = *cfg.a;
    if (cfg.b) p.b = *cfg.b;
    if (cfg.lambda) p.lambda = *cfg.lambda;
    if (!(p.a > 0.0 && p.b > 0.0)) throw ConfigError("bond lengths a and b must be positive");
    try {
      p.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    ctx.params = p;
    ctx.graph = three_vertex_graph(p);
    ctx.trig = three_vertex_trig(p);
  }
  ctx.methods = parse_methods(cfg.methods, ctx.params.has_value());
  if (cfg.with_oracle && !uses(ctx.methods, Method::oracle))
    ctx.methods.insert(ctx.methods.begin(), Method::oracle);
  if (!ctx.trig.is_regular())
    throw RegularityError(fmt::format(
        "spectral equation is not regular (alpha = {:.15g} >= 1); explicit "
        "methods and the cell oracle are refused",
        ctx.trig.alpha()));

  if (uses(ctx.methods, Method::integral) || uses(ctx.methods, Method::orbit))
    ctx.traces = trace_series(*ctx.graph, cfg.l_max);
  if (uses(ctx.methods, Method::prime_orbit)) ctx.primes = prime_orbits(*ctx.graph, cfg.l_max);
  if (uses(ctx.methods, Method::necklace))
    ctx.necklaces = necklace_orbits(*ctx.params, cfg.l_max);
  return ctx;
}

Record from_expansion(int n, Method m, int truncation, const ExpansionResult& r) {
  Record rec;
  rec.n = n;
  rec.method = m;
  rec.truncation = truncation;
  rec.k = r.k;
  rec.terms = r.terms_used;
  rec.partial_sums = r.partial_sums;
  return rec;
}

std::vector<Record> compute_one(const Context& ctx, const RunConfig& cfg, int n) {
  std::vector<Record> out;
  const double oracle = find_root_bisection(ctx.trig, n, cfg.tol);
  for (Method m : ctx.methods) {
    Record rec;
    switch (m) {
      case Method::oracle:
        rec.n = n;
        rec.k = oracle;
        break;
      case Method::integral:
        rec = from_expansion(n, m, cfg.l_max,
                             eigenvalue_integral(ctx.traces, ctx.trig, n, cfg.l_max));
        break;
      case Method::orbit:
        rec = from_expansion(n, m, cfg.l_max,
                             eigenvalue_po(ctx.traces, ctx.trig, n, cfg.l_max));
        break;
      case Method::prime_orbit:
        rec = from_expansion(n, m, cfg.l_max,
                             eigenvalue_po_prime(ctx.primes, ctx.trig, n, cfg.l_max));
        break;
      case Method::necklace:
        rec = from_expansion(
            n, m, cfg.l_max,
            eigenvalue_necklace(ctx.necklaces, *ctx.params, ctx.trig, n, cfg.l_max));
        break;
      case Method::lagrange: {
        const SpectralLagrangeResult r = ctx.params
                                             ? spectral_lagrange(*ctx.params, n, cfg.order)
                                             : spectral_lagrange(ctx.trig, n, cfg.order);
        rec.n = n;
        rec.truncation = cfg.order;
        rec.k = r.k;
        rec.terms = r.terms.size();
        rec.partial_sums = r.partial_k;
        rec.warning = r.nonconvergence_warning;
        break;
      }
    }
    rec.method = m;
    rec.omega0_k = ctx.trig.omega0 * rec.k;
    if (m != Method::oracle) rec.oracle_delta = rec.k - oracle;
    if (!cfg.partial_sums) rec.partial_sums.clear();
    out.push_back(std::move(rec));
  }
  return out;
}

std::string join_partials(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += num(v[i]);
  }
  return s;
}

std::string table_line(const std::vector<std::string>& cells, const std::vector<int>& widths) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += "  ";
    s += fmt::format("{:>{}}", cells[i], widths[i]);
  }
  return s;
}

void write_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void write_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<int> widths(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i)
      widths[i] = std::max(widths[i], static_cast<int>(r[i].size()));
  for (const auto& r : rows) out << trim(table_line(r, widths)) << '\n';
}

// Writes to the configured file or, when no path is set, to `fallback`.
template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError(fmt::format("cannot open output file '{}'", path));
  fn(file);
  if (!file) throw Error(fmt::format("write to '{}' failed", path));
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::oracle: return "oracle";
    case Method::integral: return "integral";
    case Method::orbit: return "orbit";
    case Method::prime_orbit: return "prime-orbit";
    case Method::necklace: return "necklace";
    case Method::lagrange: return "lagrange";
  }
  return "?";
}

std::vector<Method> parse_methods(const std::string& spec, bool three_vertex) {
  const std::string s = trim(spec);
  if (s == "all") {
    std::vector<Method> out;
    for (Method m : kAllMethods)
      if (m != Method::necklace || three_vertex) out.push_back(m);
    return out;
  }
  for (Method m : kAllMethods) {
    if (method_name(m) != s) continue;
    if (m == Method::necklace && !three_vertex)
      throw ConfigError("method 'necklace' needs a built-in three-vertex family");
    return {m};
  }
  throw ConfigError(fmt::format(
      "unknown method '{}' (oracle, integral, orbit, prime-orbit, necklace, lagrange, all)",
      spec));
}

std::vector<int> parse_n_list(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(fmt::format("empty entry in n list '{}'", spec));
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_int(item, "n"));
      continue;
    }
    const int lo = parse_int(item.substr(0, dash), "n range");
    const int hi = parse_int(item.substr(dash + 1), "n range");
    if (hi < lo) throw ConfigError(fmt::format("n range '{}' is empty", item));
    if (hi - lo > 1'000'000) throw ConfigError(fmt::format("n range '{}' is too long", item));
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  if (out.empty()) throw ConfigError("n list is empty");
  for (int n : out)
    if (n < 1) throw ConfigError(fmt::format("root index {} must be >= 1", n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "text") return OutputFormat::text;
  throw ConfigError(fmt::format("unknown format '{}' (csv, text)", s));
}

ThreeVertexParams builtin_family(const std::string& name) {
  if (name == "chain-3v") return ThreeVertexParams{0.3, 0.7, 0.5};
  if (name == "family-m1") return ThreeVertexParams::family(1);
  if (name == "family-m2") return ThreeVertexParams::family(2);
  throw ConfigError(fmt::format(
      "unknown family '{}' (chain-3v, family-m1, family-m2)", name));
}

void RunConfig::validate() const {
  if (n_values.empty()) throw ConfigError("n list is empty");
  for (int n : n_values)
    if (n < 1) throw ConfigError(fmt::format("root index {} must be >= 1", n));
  if (l_max < 1) throw ConfigError("--lmax must be >= 1");
  if (order < 1) throw ConfigError("--order must be >= 1");
  if (!(tol >= 1e-14)) throw ConfigError("--tol must be >= 1e-14");
}

std::vector<Record> compute(const RunConfig& cfg) {
  cfg.validate();
  const Context ctx = build_context(cfg);
  const std::size_t count = cfg.n_values.size();
  std::vector<std::vector<Record>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i] = compute_one(ctx, cfg, cfg.n_values[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Assemble in n order; the first failure in that order wins.
  std::vector<Record> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    for (Record& r : slots[i]) out.push_back(std::move(r));
  }
  return out;
}

void write_records(std::ostream& out, const std::vector<Record>& records,
                   const RunConfig& cfg) {
  const std::vector<std::string> header = {"n",     "method",       "truncation",
                                           "k",     "omega0_k",     "oracle_delta",
                                           "terms", "warning",      "partial_sums"};
  std::vector<std::vector<std::string>> rows;
  rows.push_back(header);
  for (const Record& r : records)
    rows.push_back({std::to_string(r.n), method_name(r.method), std::to_string(r.truncation),
                    num(r.k), num(r.omega0_k), r.oracle_delta ? num(*r.oracle_delta) : "",
                    std::to_string(r.terms), r.warning ? "nonconvergent" : "",
                    join_partials(r.partial_sums)});
  out << kResultsHeader << '\n';
  if (cfg.format == OutputFormat::csv) {
    write_csv(out, rows);
  } else {
    write_table(out, rows);
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const RegularityError*>(&e)) return 3;
  if (dynamic_cast<const CapacityError*>(&e)) return 4;
  return 1;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<Record> records = compute(cfg);
    with_output(cfg.out_path, out, [&](std::ostream& os) { write_records(os, records, cfg); });
    return 0;
  } catch (const std::exception& e) {
    err << "qgraph: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

void write_oracle_table(std::ostream& out, const RunConfig& cfg) {
  cfg.validate();
  RunConfig oracle_only = cfg;
  oracle_only.methods = "oracle";
  oracle_only.with_oracle = false;
  const Context ctx = build_context(oracle_only);
  std::vector<std::vector<std::string>> rows{
      {"n", "k", "k_hat_lo", "k_hat_hi", "staircase_at_k_hat"}};
  for (int n : cfg.n_values) {
    const RootCell cell = root_cell(ctx.trig, n);
    const double k = find_root_bisection(ctx.trig, n, cfg.tol);
    const StaircaseValue st = staircase_exact(*ctx.graph, ctx.trig, cell.k_hat_hi);
    rows.push_back({std::to_string(n), num(k), num(cell.k_hat_lo), num(cell.k_hat_hi),
                    std::to_string(std::lround(st.n_total))});
  }
  out << kOracleHeader << '\n';
  if (cfg.format == OutputFormat::csv) {
    write_csv(out, rows);
  } else {
    write_table(out, rows);
  }
}

int run_oracle_table(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    with_output(cfg.out_path, out, [&](std::ostream& os) { write_oracle_table(os, cfg); });
    return 0;
  } catch (const std::exception& e) {
    err << "qgraph: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

void write_convergence(std::ostream& out, const ConvergenceConfig& cfg) {
  int m = 0;
  if (cfg.family == "family-m1") m = 1;
  else if (cfg.family == "family-m2") m = 2;
  else
    throw ConfigError(fmt::format(
        "convergence report needs family-m1 or family-m2, got '{}'", cfg.family));
  if (cfg.n < 1) throw ConfigError("--n must be >= 1");
  if (cfg.p_max < 2) throw ConfigError("--lmax must be >= 2");
  const ConvergenceReport rep = convergence_study(m, cfg.n, cfg.p_max);

  out << kConvergenceHeader << '\n';
  const std::string summary = rep.all_terms_zero
                                  ? "all-terms-zero"
                                  : (rep.strictly_increasing && rep.above_bound
                                         ? "conditional"
                                         : "inconclusive");
  const std::vector<std::string> header = {"p",           "contributing", "count_bound",
                                           "abs_sum",     "abs_partial",  "bound_term",
                                           "bound_partial"};
  std::vector<std::vector<std::string>> rows{header};
  for (const PrimeLengthRow& r : rep.rows)
    rows.push_back({std::to_string(r.p), std::to_string(r.contributing), num(r.count_bound),
                    num(r.abs_sum), num(r.abs_partial), num(r.bound_term),
                    num(r.bound_partial)});
  if (cfg.format == OutputFormat::csv) {
    out << fmt::format("# family={} m={} n={} mu={} n+mu+1={} p_max={} max_abs_term={} "
                       "summary={}\n",
                       cfg.family, m, rep.n, rep.mu, rep.cell_index, rep.p_max,
                       num(rep.max_abs_term), summary);
    write_csv(out, rows);
    return;
  }
  out << fmt::format("family {} (m = {}), n = {}, mu = {}, n + mu + 1 = {}\n", cfg.family, m,
                     rep.n, rep.mu, rep.cell_index);
  if (rep.all_terms_zero) {
    out << fmt::format(
        "every orbit term with length <= {} vanishes identically (max |term| = {}); the "
        "series converges absolutely\n",
        rep.p_max, num(rep.max_abs_term));
  } else {
    out << fmt::format(
        "absolute partial sums over prime lengths: {}; above the analytic lower bound: {}\n",
        rep.strictly_increasing ? "strictly increasing" : "not strictly increasing",
        rep.above_bound ? "yes" : "no");
  }
  write_table(out, rows);
  out << "summary: " << summary << '\n';
}

int report_convergence(const ConvergenceConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    with_output(cfg.out_path, out, [&](std::ostream& os) { write_convergence(os, cfg); });
    return 0;
  } catch (const std::exception& e) {
    err << "qgraph: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace qgraph
