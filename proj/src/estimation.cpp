#include "risim/estimation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "risim/optimizer.hpp"
#include "risim/parallel.hpp"
#include "risim/stats.hpp"
#include "risim/units.hpp"

namespace risim {

void validate(const EstimationPolicy& policy) {
  if (!(policy.alpha_min > 0.0) || !(policy.alpha_min < 1.0)) {
    throw std::invalid_argument("estimation: alpha_min must be in (0, 1)");
  }
  if (!(policy.alpha_max >= policy.alpha_min) || !(policy.alpha_max < 1.0)) {
    throw std::invalid_argument("estimation: alpha_max must be in [alpha_min, 1)");
  }
  if (!(policy.coherence_symbols > 0.0)) {
    throw std::invalid_argument("estimation: coherence length must be positive");
  }
}

EstimationPolicy estimation_policy_from_ini(const IniData& data, EstimationPolicy base) {
  EstimationPolicy policy = base;
  policy.alpha_min = ini_get_double(data, "estimation", "alpha_min", policy.alpha_min);
  policy.alpha_max = ini_get_double(data, "estimation", "alpha_max", policy.alpha_max);
  policy.coherence_symbols = ini_get_double(data, "estimation", "coherence_symbols", policy.coherence_symbols);
  validate(policy);
  return policy;
}

double pilot_fraction(const EstimationPolicy& policy, std::size_t elements) {
  validate(policy);
  const double needed = static_cast<double>(elements + 1) / policy.coherence_symbols;
  const double stepped = std::ceil(needed * 100.0) / 100.0;
  return std::min(policy.alpha_max, std::max(policy.alpha_min, stepped));
}

double mmse_variance(double snr, double alpha, double coherence_symbols, std::size_t elements) {
  if (!(snr >= 0.0)) throw std::invalid_argument("mmse: snr must be >= 0");
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("mmse: alpha must be in (0, 1)");
  if (!(coherence_symbols > 0.0)) throw std::invalid_argument("mmse: coherence length must be positive");
  const double pilots = alpha * coherence_symbols;
  const double unknowns = static_cast<double>(elements + 1);
  if (pilots < unknowns) {
    throw std::invalid_argument("mmse: pilot budget alpha * L must cover the M+1 unknowns");
  }
  return 1.0 / (1.0 + snr / unknowns * pilots);
}

std::vector<double> mmse_profile(const ScenarioConfig& cfg, double direct_gain,
                                 std::span<const double> element_gains, double alpha,
                                 double coherence_symbols) {
  if (element_gains.size() != cfg.elements) {
    throw std::invalid_argument("mmse profile: one gain per element required");
  }
  const double n0b = noise_power(cfg.noise);
  const double tx = 2.0 * cfg.power_w;
  std::vector<double> mmse;
  mmse.reserve(cfg.elements + 1);
  mmse.push_back(mmse_variance(tx * direct_gain / n0b, alpha, coherence_symbols, cfg.elements));
  for (const double g : element_gains) {
    mmse.push_back(mmse_variance(tx * g / n0b, alpha, coherence_symbols, cfg.elements));
  }
  return mmse;
}

ChannelSet sample_estimated_channels(const ChannelSet& truth, std::span<const double> mmse,
                                     RandomStream& rng) {
  validate(truth);
  if (mmse.size() != truth.size() + 1) {
    throw std::invalid_argument("estimation: need one error variance per channel (direct + M)");
  }
  for (const double v : mmse) {
    if (!(v >= 0.0) || !(v <= 1.0)) throw std::invalid_argument("estimation: error variance must be in [0, 1]");
  }
  ChannelSet est;
  est.direct = truth.direct - rng.complex_gaussian(mmse[0]);
  est.source_tag.reserve(truth.size());
  est.tag_dest.reserve(truth.size());
  est.cascade.reserve(truth.size());
  for (std::size_t m = 0; m < truth.size(); ++m) {
    const std::complex<double> est_cascade = truth.cascade[m] - rng.complex_gaussian(mmse[1 + m]);
    est.source_tag.push_back(est_cascade);
    est.tag_dest.push_back({1.0, 0.0});
    est.cascade.push_back(est_cascade * std::complex<double>{1.0, 0.0});
  }
  return est;
}

CsiGains gain_under_estimation(const ScenarioConfig& cfg, const ModulationAlphabet& alphabet,
                               const EstimationPolicy& policy, RandomStream root) {
  validate(cfg);
  const SceneGeometry geo = build_geometry(cfg);
  const double msd = alphabet.norm_factor * alphabet.norm_factor;
  const SceneGains gains = scene_gains(cfg, geo, msd);
  const double g0 = gains.direct;
  const double alpha = pilot_fraction(policy, cfg.elements);
  const std::vector<double> mmse = mmse_profile(cfg, g0, gains.elements, alpha, policy.coherence_symbols);

  const bool binary = alphabet.size() == 2;
  std::vector<double> true_lin(cfg.trials), est_lin(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) {
    RandomStream rng = root.substream(t);
    const ChannelSet truth = draw_channel_set(cfg.elements, cfg.kappa_sd, cfg.kappa_st, cfg.kappa_td, rng);
    const ChannelSet estimated = sample_estimated_channels(truth, mmse, rng);
    const ElementTerms terms_true = element_terms(truth, g0, gains.elements, alphabet);
    const ElementTerms terms_est = element_terms(estimated, g0, gains.elements, alphabet);
    const OptimizationResult opt_true = binary ? optimal_config_k2(terms_true) : optimal_config_general(terms_true);
    const OptimizationResult opt_est = binary ? optimal_config_k2(terms_est) : optimal_config_general(terms_est);
    const double baseline = std::norm(terms_true.direct);
    true_lin[t] = opt_true.amplitude * opt_true.amplitude / baseline;
    const double scored = received_amplitude(terms_true, opt_est.config);
    est_lin[t] = scored * scored / baseline;
  });

  CsiGains out;
  out.true_csi_db = linear_to_db(mean(true_lin));
  out.est_csi_db = linear_to_db(mean(est_lin));
  out.alpha = alpha;
  out.mmse_direct = mmse[0];
  double acc = 0.0;
  for (std::size_t m = 1; m < mmse.size(); ++m) acc += mmse[m];
  out.mmse_element_mean = cfg.elements > 0 ? acc / static_cast<double>(cfg.elements) : 0.0;
  return out;
}

}  // namespace risim
