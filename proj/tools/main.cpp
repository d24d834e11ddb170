#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polycorr/bench.hpp"
#include "polycorr/correlator.hpp"
#include "polycorr/generator.hpp"
#include "polycorr/greeks.hpp"
#include "polycorr/mc.hpp"
#include "polycorr/model.hpp"
#include "polycorr/pricing.hpp"

namespace {

using nlohmann::json;
using namespace polycorr;

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw json::parse_error::create(101, 0, "cannot open config file " + path, nullptr);
  return json::parse(in);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

void print_matrix(const Mat& a) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) std::cout << ' ';
      std::cout << sci(a(i, j));
    }
    std::cout << '\n';
  }
}

json matrix_to_json(const Mat& a) {
  json rows = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vec monomial(int e) {
  Vec p = Vec::Zero(e + 1);
  p[e] = 1.0;
  return p;
}

struct CommonArgs {
  std::string config;
  std::string out;
  bool fallback = false;

  ExpmPolicy policy() const {
    return fallback ? ExpmPolicy::recursive_with_fallback : ExpmPolicy::recursive_strict;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_fallback = true) {
  cmd->add_option("--config", args.config, "JSON config path")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "optional JSON output path");
  if (with_fallback)
    cmd->add_flag("--fallback-expm", args.fallback,
                  "fall back to dense scaling-and-squaring when the exponential "
                  "recursion preconditions fail (default: error out)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "correlators, sensitivities and moment pricing for polynomial jump-diffusions\n"
      "exit codes: 0 ok, 2 parse error, 3 invalid input, 4 exponential-recursion "
      "precondition failure"};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  CommonArgs corr_args;
  bool corr_dense = false;
  auto* corr = app.add_subcommand("correlator", "evaluate a correlator spec");
  add_common(corr, corr_args);
  auto* sparse_flag = corr->add_flag("--sparse", "lifted operators as selection maps (default)");
  corr->add_flag("--dense", corr_dense, "lifted operators as dense matrices")
      ->excludes(sparse_flag);

  CommonArgs greeks_args;
  auto* greeks_cmd = app.add_subcommand("greeks", "delta and per-date thetas of a correlator");
  add_common(greeks_cmd, greeks_args);

  CommonArgs asian_args;
  auto* asian = app.add_subcommand("price-asian", "price an option on the arithmetic average");
  add_common(asian, asian_args);

  CommonArgs mc_args;
  std::uint64_t mc_seed = 12345;
  auto* mc_cmd = app.add_subcommand("mc-compare", "Monte Carlo vs closed-form correlator");
  add_common(mc_cmd, mc_args);
  mc_cmd->add_option("--seed", mc_seed, "base RNG seed");

  std::vector<int> bench_ms{0, 1, 2};
  std::vector<int> bench_ns{1, 2, 3};
  int bench_paths = 10000;
  int bench_reps = 100;
  std::uint64_t bench_seed = 20260821;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "timing and accuracy table as CSV");
  bench_cmd->add_option("--m", bench_ms, "date counts minus one")->delimiter(',');
  bench_cmd->add_option("--n", bench_ns, "monomial degrees")->delimiter(',');
  bench_cmd->add_option("--N", bench_paths, "Monte Carlo paths per repetition");
  bench_cmd->add_option("--reps", bench_reps, "Monte Carlo repetitions");
  bench_cmd->add_option("--seed", bench_seed, "base RNG seed");
  bench_cmd->add_option("--out", bench_out, "CSV output path (default stdout)");

  CommonArgs gen_args;
  int gen_degree = 0;
  auto* gen = app.add_subcommand("gen-matrix", "print the generator matrix for a model");
  add_common(gen, gen_args, false);
  gen->add_option("--degree", gen_degree, "basis degree n")->required()->check(CLI::PositiveNumber);

  CommonArgs expm_args;
  int expm_degree = 0;
  double expm_t = 0.0;
  auto* expm_cmd = app.add_subcommand("expm", "print exp(G_n t) for a model");
  add_common(expm_cmd, expm_args);
  expm_cmd->add_option("--degree", expm_degree, "basis degree n")
      ->required()
      ->check(CLI::PositiveNumber);
  expm_cmd->add_option("--t", expm_t, "time distance")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*corr) {
      const CorrelatorSpec spec = correlator_spec_from_json(load_config(corr_args.config));
      EvalOptions opts;
      opts.policy = corr_args.policy();
      const double value =
          correlator(spec, opts, corr_dense ? MatOps::dense : MatOps::sparse);
      std::cout << sci(value) << '\n';
      if (!corr_args.out.empty()) write_json(corr_args.out, json{{"value", value}});
    } else if (*greeks_cmd) {
      const CorrelatorSpec spec = correlator_spec_from_json(load_config(greeks_args.config));
      EvalOptions opts;
      opts.policy = greeks_args.policy();
      const GreekReport report = greeks(spec, opts);
      std::cout << "delta=" << sci(report.delta) << '\n';
      for (std::size_t j = 0; j < report.thetas.size(); ++j)
        std::cout << "theta_" << j << '=' << sci(report.thetas[j]) << '\n';
      if (!greeks_args.out.empty())
        write_json(greeks_args.out, json{{"value", report.value},
                                         {"delta", report.delta},
                                         {"thetas", report.thetas}});
    } else if (*asian) {
      const AsianSpec spec = asian_spec_from_json(load_config(asian_args.config));
      EvalOptions opts;
      opts.policy = asian_args.policy();
      const double price = asian_price_poly(spec, opts);
      std::cout << sci(price) << '\n';
      if (!asian_args.out.empty()) write_json(asian_args.out, json{{"price", price}});
    } else if (*mc_cmd) {
      const json cfg = load_config(mc_args.config);
      for (const char* key : {"model", "powers", "t", "s", "y"})
        if (!cfg.contains(key))
          throw std::invalid_argument(std::string("mc-compare: missing field '") + key + "'");
      const PolyModel model = model_from_json(cfg.at("model"));
      const std::vector<int> powers = cfg.at("powers").get<std::vector<int>>();
      TimeGrid grid;
      grid.t = cfg.at("t").get<double>();
      grid.s = cfg.at("s").get<std::vector<double>>();
      const double y = cfg.at("y").get<double>();
      const int n_paths = cfg.value("N", 10000);
      const int reps = cfg.value("reps", 100);
      const double tol = cfg.value("tol", 1e-3);

      if (powers.size() != grid.s.size())
        throw std::invalid_argument("mc-compare: powers must match the observation grid");
      const OUParams ou = ou_params_from_model(model, y);
      CorrelatorSpec spec;
      spec.model = model;
      spec.grid = grid;
      spec.y = y;
      const int m = grid.m();
      spec.polys.resize(powers.size());
      for (int j = 0; j <= m; ++j)
        spec.polys[static_cast<std::size_t>(m - j)] = monomial(powers[static_cast<std::size_t>(j)]);
      EvalOptions opts;
      opts.policy = mc_args.policy();
      const double reference = correlator(spec, opts);

      const MCResult res =
          mc_correlator(ou, powers, grid, n_paths, reps, reference, tol, mc_seed);
      std::cout << "reference=" << sci(reference) << '\n'
                << "estimate=" << sci(res.estimate) << '\n'
                << "std_error=" << sci(res.std_error) << '\n'
                << "worst_rel_err=" << sci(res.worst_rel_err) << '\n'
                << "failures=" << res.failures << '\n';
      if (!mc_args.out.empty())
        write_json(mc_args.out, json{{"reference", reference},
                                     {"estimate", res.estimate},
                                     {"std_error", res.std_error},
                                     {"worst_rel_err", res.worst_rel_err},
                                     {"failures", res.failures}});
    } else if (*bench_cmd) {
      BenchConfig cfg;
      cfg.ms = bench_ms;
      cfg.ns = bench_ns;
      cfg.n_paths = bench_paths;
      cfg.reps = bench_reps;
      cfg.seed = bench_seed;
      const std::vector<BenchRow> rows = run_bench(cfg);
      if (bench_out.empty()) {
        write_bench_csv(std::cout, rows);
      } else {
        std::ofstream out(bench_out);
        if (!out) throw std::runtime_error("cannot write " + bench_out);
        write_bench_csv(out, rows);
      }
    } else if (*gen) {
      const PolyModel model = model_from_json(load_config(gen_args.config));
      const GeneratorMatrix g = generator_matrix(model, gen_degree);
      print_matrix(g.matrix);
      if (!gen_args.out.empty())
        write_json(gen_args.out, json{{"n", g.n}, {"matrix", matrix_to_json(g.matrix)}});
    } else if (*expm_cmd) {
      const PolyModel model = model_from_json(load_config(expm_args.config));
      const Mat e = generator_expm(model, expm_degree, expm_t, expm_args.policy());
      print_matrix(e);
      if (!expm_args.out.empty())
        write_json(expm_args.out,
                   json{{"n", expm_degree}, {"t", expm_t}, {"matrix", matrix_to_json(e)}});
    }
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const RecursionConditionError& e) {
    std::cerr << "precondition failure: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
