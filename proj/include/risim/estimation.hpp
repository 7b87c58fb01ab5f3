#pragma once

#include <cstddef>
#include <span>

#include "risim/channel.hpp"
#include "risim/ini.hpp"
#include "risim/loads.hpp"
#include "risim/random.hpp"
#include "risim/scenario.hpp"

namespace risim {

/// Pilot-overhead policy for minimum mean-square-error channel estimation.
/// The pilot fraction alpha grows in 1% steps with the number of unknowns
/// (M+1 channels) and is clamped to [alpha_min, alpha_max].
struct EstimationPolicy {
  double alpha_min = 0.01;
  double alpha_max = 0.11;
  double coherence_symbols = 24e5;  // L_c
};

EstimationPolicy estimation_policy_from_ini(const IniData& data, EstimationPolicy base = {});
void validate(const EstimationPolicy& policy);

/// alpha(M) = clamp(ceil(100 * (M+1) / L_c) / 100).
double pilot_fraction(const EstimationPolicy& policy, std::size_t elements);

/// Estimation error variance 1 / (1 + snr / (M+1) * alpha * coherence_symbols)
/// for a unit-power channel. Requires alpha * coherence_symbols >= M + 1
/// (enough pilots for the M+1 unknowns); snr = 0 returns exactly 1.
double mmse_variance(double snr, double alpha, double coherence_symbols, std::size_t elements);

/// Per-channel error variances for one scenario: entry 0 is the direct link,
/// entries 1..M the element cascades. snr_i = 2 P g_i / (N_0 B).
std::vector<double> mmse_profile(const ScenarioConfig& cfg, double direct_gain,
                                 std::span<const double> element_gains, double alpha,
                                 double coherence_symbols);

/// Draws the estimation error first and returns the estimate h - error, so
/// truth = estimate + error holds exactly. mmse[0] applies to the direct
/// link, mmse[1+m] to cascade m; the estimated set stores each estimated
/// cascade with a unit second hop.
ChannelSet sample_estimated_channels(const ChannelSet& truth, std::span<const double> mmse,
                                     RandomStream& rng);

struct CsiGains {
  double true_csi_db = 0.0;
  double est_csi_db = 0.0;
  double alpha = 0.0;
  double mmse_direct = 0.0;
  double mmse_element_mean = 0.0;
};

/// Monte Carlo mean gain over cfg.trials realizations when the configuration
/// is chosen from perfect versus estimated channels; both are scored on the
/// true channels, relative to the direct-only baseline.
CsiGains gain_under_estimation(const ScenarioConfig& cfg, const ModulationAlphabet& alphabet,
                               const EstimationPolicy& policy, RandomStream root);

}  // namespace risim
