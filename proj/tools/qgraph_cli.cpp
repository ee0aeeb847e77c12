#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qgraph/errors.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/necklace.hpp"
#include "qgraph/runner.hpp"
#include "qgraph/trig_poly.hpp"

namespace {

struct RunFlags {
  std::string n_spec = "1,10,100";
  std::string format = "csv";
  double a = 0.0, b = 0.0, lambda = 0.0;
};

void add_run_options(CLI::App* cmd, qgraph::RunConfig& cfg, RunFlags& flags,
                     bool method_flag) {
  cmd->add_option("--graph", cfg.graph_file, "Graph definition file");
  cmd->add_option("--family", cfg.family, "Built-in family: chain-3v, family-m1, family-m2")
      ->capture_default_str();
  cmd->add_option("--a", flags.a, "Override bond length a of the family");
  cmd->add_option("--b", flags.b, "Override bond length b of the family");
  cmd->add_option("--lambda", flags.lambda, "Override the potential strength of the family");
  if (method_flag)
    cmd->add_option("--method", cfg.methods,
                    "oracle | integral | orbit | prime-orbit | necklace | lagrange | all")
        ->capture_default_str();
  cmd->add_option("--n", flags.n_spec, "Root indices, e.g. 1,10,100 or 1-20")
      ->capture_default_str();
  cmd->add_option("--lmax", cfg.l_max, "Orbit truncation length")->capture_default_str();
  cmd->add_option("--order", cfg.order, "Lagrange series order")->capture_default_str();
  cmd->add_option("--tol", cfg.tol, "Bisection tolerance")->capture_default_str();
  cmd->add_option("--format", flags.format, "csv | text")->capture_default_str();
  cmd->add_option("--out", cfg.out_path, "Output file (default stdout)");
  cmd->add_flag("--with-oracle", cfg.with_oracle, "Also emit oracle rows");
  cmd->add_flag("--partial-sums", cfg.partial_sums, "Emit partial-sum traces");
  cmd->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
}

// Copies parsed flag values into the config; returns an exit code or 0.
int finish_config(CLI::App* cmd, qgraph::RunConfig& cfg, const RunFlags& flags) {
  try {
    if (cmd->count("--a")) cfg.a = flags.a;
    if (cmd->count("--b")) cfg.b = flags.b;
    if (cmd->count("--lambda")) cfg.lambda = flags.lambda;
    cfg.n_values = qgraph::parse_n_list(flags.n_spec);
    cfg.format = qgraph::parse_format(flags.format);
  } catch (const std::exception& e) {
    std::cerr << "qgraph: " << e.what() << '\n';
    return qgraph::exit_code_for(e);
  }
  return 0;
}

int print_necklaces(int l, double r) {
  const auto all = qgraph::enumerate_necklaces(l);
  std::cout << fmt::format("# length {}: {} necklaces (totient count {}), {} primitive "
                           "(Moebius count {})\n",
                           l, all.size(), qgraph::necklace_count_totient(l),
                           qgraph::primitive_necklaces(l).size(),
                           qgraph::primitive_count_mobius(l));
  std::cout << "word,primitive,n_L,n_R,alpha,beta,chi,amplitude\n";
  for (const auto& w : all) {
    const auto s = qgraph::stats(w);
    std::cout << fmt::format("{},{},{},{},{},{},{},{:.15g}\n", w.word, s.is_primitive ? 1 : 0,
                             s.n_L, s.n_R, s.alpha, s.beta, s.chi, qgraph::amplitude(w, r));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit spectra of regular quantum graphs"};
  app.require_subcommand(1);

  qgraph::RunConfig run_cfg;
  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Compute roots with one or all methods");
  add_run_options(run_cmd, run_cfg, run_flags, true);

  qgraph::RunConfig oracle_cfg;
  RunFlags oracle_flags;
  auto* oracle_cmd = app.add_subcommand("oracle", "Bisection roots of the spectral equation");
  add_run_options(oracle_cmd, oracle_cfg, oracle_flags, false);

  qgraph::RunConfig lagrange_cfg;
  RunFlags lagrange_flags;
  auto* lagrange_cmd = app.add_subcommand("lagrange", "Roots by Lagrange inversion");
  add_run_options(lagrange_cmd, lagrange_cfg, lagrange_flags, false);

  int neck_len = 4;
  double neck_r = 1.0 / std::sqrt(2.0);
  auto* neck_cmd = app.add_subcommand("necklaces", "List binary necklaces of one length");
  neck_cmd->add_option("--length", neck_len, "Word length")->capture_default_str();
  neck_cmd->add_option("--r", neck_r, "Reflection amplitude for the amplitude column")
      ->capture_default_str();

  qgraph::ConvergenceConfig conv_cfg;
  std::string conv_format = "text";
  auto* conv_cmd = app.add_subcommand("convergence", "Absolute-convergence study");
  conv_cmd->add_option("--family", conv_cfg.family, "family-m1 or family-m2")
      ->capture_default_str();
  conv_cmd->add_option("--n", conv_cfg.n, "Root index")->capture_default_str();
  conv_cmd->add_option("--lmax", conv_cfg.p_max, "Largest prime length")->capture_default_str();
  conv_cmd->add_option("--format", conv_format, "csv | text")->capture_default_str();
  conv_cmd->add_option("--out", conv_cfg.out_path, "Output file (default stdout)");

  std::string trig_graph, trig_family = "chain-3v";
  auto* trig_cmd = app.add_subcommand("trig", "Print the trigonometric spectral function");
  trig_cmd->add_option("--graph", trig_graph, "Graph definition file");
  trig_cmd->add_option("--family", trig_family, "Built-in family")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run_cmd) {
    if (int c = finish_config(run_cmd, run_cfg, run_flags)) return c;
    return qgraph::run(run_cfg, std::cout, std::cerr);
  }
  if (*oracle_cmd) {
    if (int c = finish_config(oracle_cmd, oracle_cfg, oracle_flags)) return c;
    return qgraph::run_oracle_table(oracle_cfg, std::cout, std::cerr);
  }
  if (*lagrange_cmd) {
    lagrange_cfg.methods = "lagrange";
    if (int c = finish_config(lagrange_cmd, lagrange_cfg, lagrange_flags)) return c;
    return qgraph::run(lagrange_cfg, std::cout, std::cerr);
  }
  try {
    if (*neck_cmd) return print_necklaces(neck_len, neck_r);
    if (*conv_cmd) {
      conv_cfg.format = qgraph::parse_format(conv_format);
      return qgraph::report_convergence(conv_cfg, std::cout, std::cerr);
    }
    if (*trig_cmd) {
      const qgraph::TrigPolynomial trig =
          trig_graph.empty()
              ? qgraph::three_vertex_trig(qgraph::builtin_family(trig_family))
              : qgraph::expand_secular_determinant(qgraph::load_graph_file(trig_graph));
      qgraph::write_trig(std::cout, trig);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "qgraph: " << e.what() << '\n';
    return qgraph::exit_code_for(e);
  }
  return 1;
}
