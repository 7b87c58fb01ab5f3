#include "risim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "risim/loads.hpp"
#include "risim/optimizer.hpp"
#include "risim/gen2.hpp"
#include "risim/parallel.hpp"
#include "risim/stats.hpp"
#include "risim/units.hpp"

namespace risim {

void validate(const GainReport& report) {
  if (report.sweep_name.empty()) throw std::invalid_argument("report: sweep column needs a name");
  if (report.columns.size() != report.data.size()) {
    throw std::invalid_argument("report: one data vector per column required");
  }
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    if (report.columns[c].empty() || report.columns[c].find(',') != std::string::npos) {
      throw std::invalid_argument("report: column names must be non-empty and comma-free");
    }
    if (report.data[c].size() != report.sweep.size()) {
      throw std::invalid_argument("report: column '" + report.columns[c] + "' has the wrong length");
    }
  }
}

std::string render_csv(const GainReport& report) {
  validate(report);
  std::string out = report.sweep_name;
  for (const auto& col : report.columns) {
    out += ',';
    out += col;
  }
  out += '\n';
  for (std::size_t r = 0; r < report.sweep.size(); ++r) {
    out += format_sig6(report.sweep[r]);
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
      out += ',';
      out += format_sig6(report.data[c][r]);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const GainReport& report, const std::string& path) {
  const std::string text = render_csv(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<double> default_distance_grid() { return {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 7.0, 10.0}; }

namespace {

struct GainSummary {
  double mean_db = 0.0;
  double lo_db = 0.0;
  double hi_db = 0.0;
  double dbmean_db = 0.0;
};

GainSummary summarize_gains(const std::vector<double>& linear) {
  const MeanEstimate est = mean_with_ci(linear);
  GainSummary s;
  s.mean_db = linear_to_db(est.mean);
  const double lo = est.mean - est.halfwidth;
  s.lo_db = lo > 0.0 ? linear_to_db(lo) : -std::numeric_limits<double>::infinity();
  s.hi_db = linear_to_db(est.mean + est.halfwidth);
  std::vector<double> db(linear.size());
  for (std::size_t i = 0; i < linear.size(); ++i) db[i] = linear_to_db(linear[i]);
  s.dbmean_db = mean(db);
  return s;
}

/// Per-trial optimal-over-baseline power ratios at one sweep point, for the
/// binary alphabet and optionally a second alphabet on the same draws.
struct PointGains {
  std::vector<double> k2;
  std::vector<double> other;
};

PointGains point_gains(const ScenarioConfig& cfg, const ModulationAlphabet& binary,
                       const ModulationAlphabet* other, std::size_t point, RandomStream& root) {
  const SceneGeometry geo = build_geometry(cfg);
  const SceneGains g2 = scene_gains(cfg, geo, binary.norm_factor * binary.norm_factor);
  SceneGains g_other;
  if (other) g_other = scene_gains(cfg, geo, other->norm_factor * other->norm_factor);

  PointGains out;
  out.k2.resize(cfg.trials);
  if (other) out.other.resize(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) {
    RandomStream rng = root.substream(point * cfg.trials + t);
    const ChannelSet channels =
        draw_channel_set(cfg.elements, cfg.kappa_sd, cfg.kappa_st, cfg.kappa_td, rng);
    const ElementTerms terms2 = element_terms(channels, g2.direct, g2.elements, binary);
    const double baseline = std::norm(terms2.direct);
    const OptimizationResult r2 = optimal_config_k2(terms2);
    out.k2[t] = r2.amplitude * r2.amplitude / baseline;
    if (other) {
      const ElementTerms terms_o = element_terms(channels, g_other.direct, g_other.elements, *other);
      const OptimizationResult ro = optimal_config_general(terms_o);
      out.other[t] = ro.amplitude * ro.amplitude / baseline;
    }
  });
  return out;
}

void fill_summary(GainReport& report, std::size_t first_column, std::size_t row,
                  const GainSummary& s) {
  report.data[first_column][row] = s.mean_db;
  report.data[first_column + 1][row] = s.lo_db;
  report.data[first_column + 2][row] = s.hi_db;
  report.data[first_column + 3][row] = s.dbmean_db;
}

}  // namespace

GainReport run_gain_vs_distance(const ScenarioConfig& cfg, const std::vector<double>& distance_grid,
                                RandomStream root) {
  validate(cfg);
  if (distance_grid.empty()) throw std::invalid_argument("distance sweep: empty grid");
  for (const double d : distance_grid) {
    if (!(d > 0.0)) throw std::invalid_argument("distance sweep: distances must be positive");
  }
  const ModulationAlphabet binary = modulation_alphabet(binary_load_set());
  const ModulationAlphabet varactor = modulation_alphabet(default_varactor_set());

  GainReport report;
  report.sweep_name = "d_ris_sd_m";
  report.sweep = distance_grid;
  report.columns = {"k2_gain_db",  "k2_gain_db_lo",  "k2_gain_db_hi",  "k2_gain_mean_db",
                    "k21_gain_db", "k21_gain_db_lo", "k21_gain_db_hi", "k21_gain_mean_db",
                    "baseline_db"};
  report.trials = cfg.trials;
  report.data.assign(report.columns.size(), std::vector<double>(distance_grid.size(), 0.0));

  for (std::size_t p = 0; p < distance_grid.size(); ++p) {
    ScenarioConfig point_cfg = cfg;
    point_cfg.d_ris_sd_m = distance_grid[p];
    const PointGains gains = point_gains(point_cfg, binary, &varactor, p, root);
    fill_summary(report, 0, p, summarize_gains(gains.k2));
    fill_summary(report, 4, p, summarize_gains(gains.other));
  }
  return report;
}

GainReport run_gain_vs_elements(const ScenarioConfig& cfg, const std::vector<std::size_t>& m_grid,
                                SpacingMode mode, bool include_k21, RandomStream root) {
  validate(cfg);
  if (m_grid.empty()) throw std::invalid_argument("element sweep: empty grid");
  for (std::size_t i = 1; i < m_grid.size(); ++i) {
    if (m_grid[i] <= m_grid[i - 1]) {
      throw std::invalid_argument("element sweep: grid must be strictly increasing");
    }
  }
  ScenarioConfig base = cfg;
  if (mode == SpacingMode::dense) {
    base.spacing_x_m = 0.1;
    base.spacing_y_m = 0.05;
  } else {
    base.spacing_x_m = base.spacing_y_m = 0.5 * wavelength(cfg.carrier_hz);
  }
  const ModulationAlphabet binary = modulation_alphabet(binary_load_set());
  const ModulationAlphabet varactor = modulation_alphabet(default_varactor_set());

  GainReport report;
  report.sweep_name = "elements";
  report.sweep.assign(m_grid.begin(), m_grid.end());
  report.columns = {"k2_gain_db", "k2_gain_db_lo", "k2_gain_db_hi", "k2_gain_mean_db",
                    "k2_marginal_db_per_element"};
  if (include_k21) {
    report.columns.insert(report.columns.end(),
                          {"k21_gain_db", "k21_gain_db_lo", "k21_gain_db_hi", "k21_gain_mean_db",
                           "k21_marginal_db_per_element"});
  }
  report.columns.push_back("baseline_db");
  report.trials = cfg.trials;
  report.data.assign(report.columns.size(), std::vector<double>(m_grid.size(), 0.0));

  // Marginal gain of a grid step uses the mean-ratio dB column; the first
  // step is measured from the 0 dB baseline of an empty surface.
  double prev_m = 0.0, prev_db2 = 0.0, prev_db21 = 0.0;
  for (std::size_t p = 0; p < m_grid.size(); ++p) {
    ScenarioConfig point_cfg = base;
    point_cfg.elements = m_grid[p];
    const PointGains gains =
        point_gains(point_cfg, binary, include_k21 ? &varactor : nullptr, p, root);
    const GainSummary s2 = summarize_gains(gains.k2);
    fill_summary(report, 0, p, s2);
    const double dm = static_cast<double>(m_grid[p]) - prev_m;
    report.data[4][p] = dm > 0.0 ? (s2.mean_db - prev_db2) / dm : 0.0;
    prev_db2 = s2.mean_db;
    if (include_k21) {
      const GainSummary s21 = summarize_gains(gains.other);
      fill_summary(report, 5, p, s21);
      report.data[9][p] = dm > 0.0 ? (s21.mean_db - prev_db21) / dm : 0.0;
      prev_db21 = s21.mean_db;
    }
    prev_m = static_cast<double>(m_grid[p]);
  }
  return report;
}

GainReport run_csi_impact(const ScenarioConfig& cfg, const std::vector<std::size_t>& m_grid,
                          const EstimationPolicy& policy, RandomStream root) {
  validate(cfg);
  validate(policy);
  if (m_grid.empty()) throw std::invalid_argument("csi sweep: empty grid");
  const ModulationAlphabet binary = modulation_alphabet(binary_load_set());

  GainReport report;
  report.sweep_name = "elements";
  report.sweep.assign(m_grid.begin(), m_grid.end());
  report.columns = {"true_csi_gain_db", "est_csi_gain_db", "gap_db",
                    "alpha",            "mmse_direct",     "mmse_element_mean",
                    "baseline_db"};
  report.trials = cfg.trials;
  report.data.assign(report.columns.size(), std::vector<double>(m_grid.size(), 0.0));

  for (std::size_t p = 0; p < m_grid.size(); ++p) {
    ScenarioConfig point_cfg = cfg;
    point_cfg.elements = m_grid[p];
    const CsiGains g = gain_under_estimation(point_cfg, binary, policy, root.substream(p));
    report.data[0][p] = g.true_csi_db;
    report.data[1][p] = g.est_csi_db;
    report.data[2][p] = g.true_csi_db - g.est_csi_db;
    report.data[3][p] = g.alpha;
    report.data[4][p] = g.mmse_direct;
    report.data[5][p] = g.mmse_element_mean;
  }
  return report;
}

GainReport run_random_search_experiment(const ScenarioConfig& cfg,
                                        const std::vector<std::size_t>& mu_list,
                                        std::size_t n_configs, std::size_t repetitions,
                                        RandomStream root) {
  validate(cfg);
  if (mu_list.empty()) throw std::invalid_argument("random search: empty subset-size list");
  if (n_configs == 0) throw std::invalid_argument("random search: need at least one configuration");
  if (repetitions == 0) throw std::invalid_argument("random search: need at least one repetition");

  const ModulationAlphabet binary = modulation_alphabet(binary_load_set());
  const SceneGeometry geo = build_geometry(cfg);
  const SceneGains gains = scene_gains(cfg, geo, binary.norm_factor * binary.norm_factor);
  RandomStream channel_rng = root.substream(0);
  const ChannelSet channels =
      draw_channel_set(cfg.elements, cfg.kappa_sd, cfg.kappa_st, cfg.kappa_td, channel_rng);
  const ElementTerms terms = element_terms(channels, gains.direct, gains.elements, binary);
  const OptimizationResult best = optimal_config_k2(terms);
  const double optimum_db =
      linear_to_db(best.amplitude * best.amplitude / std::norm(terms.direct));

  GainReport report;
  report.sweep_name = "configs_tested";
  report.sweep.resize(n_configs);
  for (std::size_t i = 0; i < n_configs; ++i) report.sweep[i] = static_cast<double>(i + 1);
  report.trials = repetitions;
  for (std::size_t i = 0; i < mu_list.size(); ++i) {
    report.columns.push_back("mu_" + std::to_string(mu_list[i]) + "_db");
    RandomStream search_rng = root.substream(1 + i);
    report.data.push_back(random_search(terms, mu_list[i], n_configs, repetitions, search_rng));
  }
  report.columns.push_back("optimum_db");
  report.data.emplace_back(n_configs, optimum_db);
  return report;
}

}  // namespace risim
