#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "risim/estimation.hpp"
#include "risim/random.hpp"
#include "risim/scenario.hpp"

namespace risim {

/// Tabular result of one sweep experiment: one row per sweep value, one data
/// column per reported quantity, column-major storage.
struct GainReport {
  std::string sweep_name;
  std::vector<double> sweep;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[column][row]
  std::size_t trials = 0;
};

void validate(const GainReport& report);

/// CSV text with a header row, six significant digits, '.' decimal point
/// regardless of locale. Identical reports render to identical bytes.
std::string render_csv(const GainReport& report);
void emit_csv(const GainReport& report, const std::string& path);

std::vector<double> default_distance_grid();

/// Mean power gain of the optimally configured surface over the direct-only
/// link, swept over the surface-to-link distance. The binary and the 21-load
/// varactor alphabets are scored on shared channel draws; gain columns hold
/// the dB value of the mean linear ratio with a 95% interval, plus the mean
/// of the per-trial dB values for comparison.
GainReport run_gain_vs_distance(const ScenarioConfig& cfg, const std::vector<double>& distance_grid,
                                RandomStream root);

/// Element grid pitch for the size sweep: a fixed 0.1 m x 0.05 m packing, or
/// half a carrier wavelength on both axes.
enum class SpacingMode { dense, half_lambda };

/// Mean power gain versus element count, with the per-added-element marginal
/// gain of each grid step for plateau analysis. m_grid must be strictly
/// increasing.
GainReport run_gain_vs_elements(const ScenarioConfig& cfg, const std::vector<std::size_t>& m_grid,
                                SpacingMode mode, bool include_k21, RandomStream root);

/// True-CSI versus estimated-CSI mean gain per element count, with the pilot
/// fraction and error variances actually applied at each size.
GainReport run_csi_impact(const ScenarioConfig& cfg, const std::vector<std::size_t>& m_grid,
                          const EstimationPolicy& policy, RandomStream root);

/// Running-maximum power improvement of the protocol-driven random search on
/// one channel realization, one series per subset size, plus the sweep
/// optimizer's binary optimum as the bound column.
GainReport run_random_search_experiment(const ScenarioConfig& cfg,
                                        const std::vector<std::size_t>& mu_list,
                                        std::size_t n_configs, std::size_t repetitions,
                                        RandomStream root);

}  // namespace risim
