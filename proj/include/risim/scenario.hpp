#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "risim/channel.hpp"
#include "risim/ini.hpp"
#include "risim/units.hpp"

namespace risim {

/// Full description of one simulated deployment: a rectangular grid of
/// backscatter elements assisting a source-destination link, plus the
/// Monte Carlo controls. Distances in meters, powers in watts.
struct ScenarioConfig {
  std::size_t elements = 100;  // M
  std::size_t loads = 2;       // K, for single-alphabet studies

  // Element grid pitch; defaults are half a wavelength at 870 MHz.
  double spacing_x_m = 0.5 * speed_of_light_m_s / 870e6;
  double spacing_y_m = 0.5 * speed_of_light_m_s / 870e6;

  double d_sd_m = 3.0;       // source-destination separation
  double d_ris_sd_m = 1.0;   // perpendicular surface-to-link distance
  double ref_distance_m = 3.0;

  double exponent_sd = 3.0;
  double exponent_st = 3.0;
  double exponent_td = 3.0;

  double kappa_sd = 8.0;
  double kappa_st = 8.0;
  double kappa_td = 8.0;

  double eta = 0.1;                  // tag scattering efficiency
  double power_w = 3.16228e-3;       // 5 dBm
  double carrier_hz = 870e6;
  double rel_antenna_gain_db = 10.0; // end-to-end antenna gain relative to isotropic

  NoiseSpec noise{};

  std::size_t trials = 10000;
  std::uint64_t seed = 1;
};

/// Geometry study used for the channel-estimation experiments: Rayleigh
/// fading and a longer, surface-distant link.
ScenarioConfig csi_study_defaults();

/// Overrides base with any keys present in the [scenario] and [noise]
/// sections. Unknown keys in those sections throw std::invalid_argument.
ScenarioConfig scenario_from_ini(const IniData& data, ScenarioConfig base = {});

void validate(const ScenarioConfig& cfg);

/// Places the elements on a centered near-square grid (cols = ceil(sqrt(M)),
/// row-major) in the surface plane, the source and destination on a parallel
/// line at distance d_ris_sd, separated by d_sd and centered on the surface,
/// and returns every link's geometry.
SceneGeometry build_geometry(const ScenarioConfig& cfg);

/// Average power gains of every link of a scene: the direct path loss plus,
/// per element, the cascaded backscatter gain for an alphabet with the given
/// mean square load deviation.
struct SceneGains {
  double direct = 0.0;
  std::vector<double> elements;
};

SceneGains scene_gains(const ScenarioConfig& cfg, const SceneGeometry& geometry,
                       double mean_square_deviation);

}  // namespace risim
