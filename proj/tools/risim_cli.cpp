#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risim/channel.hpp"
#include "risim/estimation.hpp"
#include "risim/gen2.hpp"
#include "risim/harness.hpp"
#include "risim/ini.hpp"
#include "risim/loads.hpp"
#include "risim/optimizer.hpp"
#include "risim/random.hpp"
#include "risim/scenario.hpp"
#include "risim/stats.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_trials = false;
  std::uint64_t trials = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "INI file with [scenario], [noise], [estimation], [gen2] sections");
  cmd->add_option("--out", opts.out_path, "output CSV path (default: stdout)");
  cmd->add_option("--seed", opts.seed, "random seed override")->each([&](const std::string&) {
    opts.has_seed = true;
  });
  cmd->add_option("--trials", opts.trials, "Monte Carlo trials per sweep point")
      ->each([&](const std::string&) { opts.has_trials = true; });
}

risim::ScenarioConfig load_scenario(const CommonOpts& opts, risim::ScenarioConfig base) {
  if (!opts.config_path.empty()) {
    base = risim::scenario_from_ini(risim::load_ini(opts.config_path), base);
  }
  if (opts.has_seed) base.seed = opts.seed;
  if (opts.has_trials) base.trials = static_cast<std::size_t>(opts.trials);
  risim::validate(base);
  return base;
}

void deliver(const risim::GainReport& report, const CommonOpts& opts) {
  if (opts.out_path.empty()) {
    std::cout << risim::render_csv(report);
  } else {
    risim::emit_csv(report, opts.out_path);
    std::cerr << "wrote " << opts.out_path << " (" << report.sweep.size() << " rows)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo studies of a backscatter-tag reconfigurable surface"};
  app.require_subcommand(1);

  // gain-vs-distance
  CommonOpts dist_opts;
  std::vector<double> distance_grid;
  auto* dist = app.add_subcommand("gain-vs-distance",
                                  "mean optimal-configuration gain vs surface-to-link distance");
  add_common(dist, dist_opts);
  dist->add_option("--distances", distance_grid, "surface-to-link distances in meters");

  // gain-vs-elements
  CommonOpts elem_opts;
  std::vector<std::uint64_t> element_grid{1, 5, 10, 25, 50, 100, 150, 200};
  std::string spacing = "half-lambda";
  bool with_k21 = false;
  auto* elem = app.add_subcommand("gain-vs-elements", "mean gain and marginal gain vs element count");
  add_common(elem, elem_opts);
  elem->add_option("--m-grid", element_grid, "element counts, strictly increasing");
  elem->add_option("--spacing", spacing, "element pitch: half-lambda or dense (0.1 m x 0.05 m)")
      ->check(CLI::IsMember({"half-lambda", "dense"}));
  elem->add_flag("--with-k21", with_k21, "also sweep the 21-load varactor alphabet");

  // csi-impact
  CommonOpts csi_opts;
  std::vector<std::uint64_t> csi_grid{25, 50, 100, 150, 200};
  auto* csi = app.add_subcommand("csi-impact", "true-CSI vs estimated-CSI gain over element count");
  add_common(csi, csi_opts);
  csi->add_option("--m-grid", csi_grid, "element counts");

  // random-search
  CommonOpts rs_opts;
  std::vector<std::uint64_t> mu_list{1, 8, 32};
  std::uint64_t n_configs = 100;
  std::uint64_t repetitions = 3;
  auto* rs = app.add_subcommand("random-search",
                                "protocol-driven running-max improvement per tested configuration");
  add_common(rs, rs_opts);
  rs->add_option("--mu", mu_list, "subset sizes toggled per configuration");
  rs->add_option("--n-configs", n_configs, "configurations tested per repetition");
  rs->add_option("--repetitions", repetitions, "independent repetitions maximized over");

  // optimize
  std::string instance_path;
  std::string method = "auto";
  auto* opt = app.add_subcommand("optimize", "solve one dumped instance and print the result");
  opt->add_option("--in", instance_path, "instance file from write_instance")->required();
  opt->add_option("--method", method, "auto, sweep, or brute")
      ->check(CLI::IsMember({"auto", "sweep", "brute"}));

  // oracle-check
  std::uint64_t oracle_instances = 100;
  std::uint64_t oracle_m = 8;
  std::uint64_t oracle_k = 2;
  std::uint64_t oracle_seed = 1;
  double oracle_tol = 1e-9;
  auto* oracle = app.add_subcommand("oracle-check",
                                    "compare the sweep optimizer against brute force on random instances");
  oracle->add_option("--instances", oracle_instances, "number of random instances");
  oracle->add_option("--m", oracle_m, "elements per instance");
  oracle->add_option("--k", oracle_k, "loads per element");
  oracle->add_option("--seed", oracle_seed, "random seed");
  oracle->add_option("--tol", oracle_tol, "relative amplitude tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dist->parsed()) {
      const risim::ScenarioConfig cfg = load_scenario(dist_opts, {});
      const std::vector<double> grid =
          distance_grid.empty() ? risim::default_distance_grid() : distance_grid;
      deliver(risim::run_gain_vs_distance(cfg, grid, risim::RandomStream(cfg.seed)), dist_opts);
    } else if (elem->parsed()) {
      const risim::ScenarioConfig cfg = load_scenario(elem_opts, {});
      const std::vector<std::size_t> grid(element_grid.begin(), element_grid.end());
      const auto mode = spacing == "dense" ? risim::SpacingMode::dense : risim::SpacingMode::half_lambda;
      deliver(risim::run_gain_vs_elements(cfg, grid, mode, with_k21, risim::RandomStream(cfg.seed)),
              elem_opts);
    } else if (csi->parsed()) {
      const risim::ScenarioConfig cfg = load_scenario(csi_opts, risim::csi_study_defaults());
      risim::EstimationPolicy policy;
      if (!csi_opts.config_path.empty()) {
        policy = risim::estimation_policy_from_ini(risim::load_ini(csi_opts.config_path), policy);
      }
      const std::vector<std::size_t> grid(csi_grid.begin(), csi_grid.end());
      deliver(risim::run_csi_impact(cfg, grid, policy, risim::RandomStream(cfg.seed)), csi_opts);
    } else if (rs->parsed()) {
      const risim::ScenarioConfig cfg = load_scenario(rs_opts, {});
      const std::vector<std::size_t> mus(mu_list.begin(), mu_list.end());
      deliver(risim::run_random_search_experiment(cfg, mus, static_cast<std::size_t>(n_configs),
                                                  static_cast<std::size_t>(repetitions),
                                                  risim::RandomStream(cfg.seed)),
              rs_opts);
    } else if (opt->parsed()) {
      std::ifstream in(instance_path);
      if (!in) throw std::runtime_error("cannot open instance file: " + instance_path);
      const risim::ElementTerms terms = risim::read_instance(in);
      risim::OptimizationResult result;
      if (method == "brute") {
        result = risim::brute_force(terms);
      } else if (method == "sweep" && terms.loads == 2) {
        result = risim::optimal_config_k2(terms);
      } else if (method == "sweep") {
        result = risim::optimal_config_general(terms);
      } else {
        result = terms.loads == 2 ? risim::optimal_config_k2(terms)
                                  : risim::optimal_config_general(terms);
      }
      std::cout << "amplitude " << risim::format_sig6(result.amplitude) << '\n';
      std::cout << "config";
      for (const auto k : result.config.choice) std::cout << ' ' << k;
      std::cout << '\n';
    } else if (oracle->parsed()) {
      risim::RandomStream root(oracle_seed);
      double worst = 0.0;
      for (std::uint64_t i = 0; i < oracle_instances; ++i) {
        risim::RandomStream rng = root.substream(i);
        risim::ElementTerms terms;
        terms.direct = rng.complex_gaussian(1.0);
        terms.elements = static_cast<std::size_t>(oracle_m);
        terms.loads = static_cast<std::size_t>(oracle_k);
        terms.terms.resize(terms.elements * terms.loads);
        for (auto& t : terms.terms) t = rng.complex_gaussian(1.0);
        const risim::OptimizationResult fast = terms.loads == 2
                                                   ? risim::optimal_config_k2(terms)
                                                   : risim::optimal_config_general(terms);
        const risim::OptimizationResult exact = risim::brute_force(terms);
        const double rel = std::abs(fast.amplitude - exact.amplitude) /
                           std::max(exact.amplitude, 1e-300);
        worst = std::max(worst, rel);
        if (rel > oracle_tol) {
          std::ostringstream msg;
          msg << "instance " << i << ": sweep " << fast.amplitude << " vs brute "
              << exact.amplitude << " (rel " << rel << ")";
          throw std::runtime_error(msg.str());
        }
      }
      std::cout << "checked " << oracle_instances << " instances (M=" << oracle_m
                << ", K=" << oracle_k << "), worst relative gap " << risim::format_sig6(worst)
                << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
