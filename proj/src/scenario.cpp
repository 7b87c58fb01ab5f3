#include "risim/scenario.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "risim/loads.hpp"

namespace risim {

ScenarioConfig csi_study_defaults() {
  ScenarioConfig cfg;
  cfg.kappa_sd = cfg.kappa_st = cfg.kappa_td = 0.0;
  cfg.d_ris_sd_m = 8.0;
  cfg.d_sd_m = 15.0;
  cfg.ref_distance_m = 3.0;
  return cfg;
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.loads < 2) throw std::invalid_argument("scenario: loads must be >= 2");
  if (!(cfg.spacing_x_m > 0.0) || !(cfg.spacing_y_m > 0.0)) {
    throw std::invalid_argument("scenario: element spacing must be positive");
  }
  if (!(cfg.d_sd_m > 0.0)) throw std::invalid_argument("scenario: d_sd must be positive");
  if (!(cfg.d_ris_sd_m > 0.0)) throw std::invalid_argument("scenario: d_ris_sd must be positive");
  if (!(cfg.ref_distance_m > 0.0)) throw std::invalid_argument("scenario: reference distance must be positive");
  if (!(cfg.exponent_sd > 0.0) || !(cfg.exponent_st > 0.0) || !(cfg.exponent_td > 0.0)) {
    throw std::invalid_argument("scenario: path-loss exponents must be positive");
  }
  if (!(cfg.kappa_sd >= 0.0) || !(cfg.kappa_st >= 0.0) || !(cfg.kappa_td >= 0.0)) {
    throw std::invalid_argument("scenario: kappa must be >= 0");
  }
  if (!(cfg.eta > 0.0) || !(cfg.eta <= 1.0)) throw std::invalid_argument("scenario: eta must be in (0, 1]");
  if (!(cfg.power_w > 0.0)) throw std::invalid_argument("scenario: transmit power must be positive");
  if (!(cfg.carrier_hz > 0.0)) throw std::invalid_argument("scenario: carrier frequency must be positive");
  if (!std::isfinite(cfg.rel_antenna_gain_db)) {
    throw std::invalid_argument("scenario: relative antenna gain must be finite");
  }
  validate(cfg.noise);
  if (cfg.trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
}

namespace {

const std::set<std::string> scenario_keys = {
    "elements", "loads", "spacing_x_m", "spacing_y_m", "d_sd_m", "d_ris_sd_m",
    "ref_distance_m", "exponent", "exponent_sd", "exponent_st", "exponent_td",
    "kappa", "kappa_sd", "kappa_st", "kappa_td", "eta", "power_w",
    "carrier_hz", "rel_antenna_gain_db", "trials", "seed"};

const std::set<std::string> noise_keys = {"temperature_k", "bandwidth_hz"};

void reject_unknown(const IniData& data, const std::string& section, const std::set<std::string>& known) {
  const auto sec = data.find(section);
  if (sec == data.end()) return;
  for (const auto& [key, value] : sec->second) {
    if (!known.count(key)) {
      throw std::invalid_argument("config: unknown key '" + key + "' in [" + section + "]");
    }
  }
}

}  // namespace

ScenarioConfig scenario_from_ini(const IniData& data, ScenarioConfig base) {
  reject_unknown(data, "scenario", scenario_keys);
  reject_unknown(data, "noise", noise_keys);
  ScenarioConfig cfg = base;
  cfg.elements = static_cast<std::size_t>(ini_get_u64(data, "scenario", "elements", cfg.elements));
  cfg.loads = static_cast<std::size_t>(ini_get_u64(data, "scenario", "loads", cfg.loads));
  cfg.spacing_x_m = ini_get_double(data, "scenario", "spacing_x_m", cfg.spacing_x_m);
  cfg.spacing_y_m = ini_get_double(data, "scenario", "spacing_y_m", cfg.spacing_y_m);
  cfg.d_sd_m = ini_get_double(data, "scenario", "d_sd_m", cfg.d_sd_m);
  cfg.d_ris_sd_m = ini_get_double(data, "scenario", "d_ris_sd_m", cfg.d_ris_sd_m);
  cfg.ref_distance_m = ini_get_double(data, "scenario", "ref_distance_m", cfg.ref_distance_m);
  if (data.count("scenario") && data.at("scenario").count("exponent")) {
    const double exp_all = ini_get_double(data, "scenario", "exponent", 0.0);
    cfg.exponent_sd = cfg.exponent_st = cfg.exponent_td = exp_all;
  }
  cfg.exponent_sd = ini_get_double(data, "scenario", "exponent_sd", cfg.exponent_sd);
  cfg.exponent_st = ini_get_double(data, "scenario", "exponent_st", cfg.exponent_st);
  cfg.exponent_td = ini_get_double(data, "scenario", "exponent_td", cfg.exponent_td);
  if (data.count("scenario") && data.at("scenario").count("kappa")) {
    const double kappa_all = ini_get_double(data, "scenario", "kappa", 0.0);
    cfg.kappa_sd = cfg.kappa_st = cfg.kappa_td = kappa_all;
  }
  cfg.kappa_sd = ini_get_double(data, "scenario", "kappa_sd", cfg.kappa_sd);
  cfg.kappa_st = ini_get_double(data, "scenario", "kappa_st", cfg.kappa_st);
  cfg.kappa_td = ini_get_double(data, "scenario", "kappa_td", cfg.kappa_td);
  cfg.eta = ini_get_double(data, "scenario", "eta", cfg.eta);
  cfg.power_w = ini_get_double(data, "scenario", "power_w", cfg.power_w);
  cfg.carrier_hz = ini_get_double(data, "scenario", "carrier_hz", cfg.carrier_hz);
  cfg.rel_antenna_gain_db = ini_get_double(data, "scenario", "rel_antenna_gain_db", cfg.rel_antenna_gain_db);
  cfg.trials = static_cast<std::size_t>(ini_get_u64(data, "scenario", "trials", cfg.trials));
  cfg.seed = ini_get_u64(data, "scenario", "seed", cfg.seed);
  cfg.noise.temperature_k = ini_get_double(data, "noise", "temperature_k", cfg.noise.temperature_k);
  cfg.noise.bandwidth_hz = ini_get_double(data, "noise", "bandwidth_hz", cfg.noise.bandwidth_hz);
  validate(cfg);
  return cfg;
}

SceneGeometry build_geometry(const ScenarioConfig& cfg) {
  validate(cfg);
  const double lambda = wavelength(cfg.carrier_hz);
  SceneGeometry geo;
  geo.direct = LinkGeometry{cfg.d_sd_m, cfg.ref_distance_m, cfg.exponent_sd, lambda};

  const std::size_t m_count = cfg.elements;
  geo.source_tag.reserve(m_count);
  geo.tag_dest.reserve(m_count);
  if (m_count == 0) return geo;

  const std::size_t cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m_count))));
  // Surface plane is y = 0; the link runs parallel to the grid's x axis.
  const std::size_t rows = (m_count + cols - 1) / cols;
  const double sx = -0.5 * cfg.d_sd_m, sy = cfg.d_ris_sd_m;
  const double dx = +0.5 * cfg.d_sd_m, dy = cfg.d_ris_sd_m;
  for (std::size_t m = 0; m < m_count; ++m) {
    const std::size_t r = m / cols;
    const std::size_t c = m % cols;
    const double ex = (static_cast<double>(c) - 0.5 * static_cast<double>(cols - 1)) * cfg.spacing_x_m;
    const double ez = (static_cast<double>(r) - 0.5 * static_cast<double>(rows - 1)) * cfg.spacing_y_m;
    const double d_st = std::sqrt((ex - sx) * (ex - sx) + sy * sy + ez * ez);
    const double d_td = std::sqrt((ex - dx) * (ex - dx) + dy * dy + ez * ez);
    geo.source_tag.push_back(LinkGeometry{d_st, cfg.ref_distance_m, cfg.exponent_st, lambda});
    geo.tag_dest.push_back(LinkGeometry{d_td, cfg.ref_distance_m, cfg.exponent_td, lambda});
  }
  return geo;
}

SceneGains scene_gains(const ScenarioConfig& cfg, const SceneGeometry& geometry,
                       double mean_square_deviation) {
  if (geometry.source_tag.size() != cfg.elements || geometry.tag_dest.size() != cfg.elements) {
    throw std::invalid_argument("scene gains: geometry does not match the element count");
  }
  SceneGains gains;
  gains.direct = path_loss(geometry.direct);
  const double rel_gain = db_to_linear(cfg.rel_antenna_gain_db);
  gains.elements.reserve(cfg.elements);
  for (std::size_t m = 0; m < cfg.elements; ++m) {
    gains.elements.push_back(element_gain(cfg.eta, path_loss(geometry.source_tag[m]),
                                          path_loss(geometry.tag_dest[m]), mean_square_deviation,
                                          rel_gain));
  }
  return gains;
}

}  // namespace risim
