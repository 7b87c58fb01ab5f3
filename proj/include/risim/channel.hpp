#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "risim/random.hpp"

namespace risim {

/// One propagation link, power-law path loss referenced to ref_distance.
struct LinkGeometry {
  double distance_m = 1.0;
  double ref_distance_m = 1.0;
  double exponent = 2.0;
  double wavelength_m = 0.0;
};

/// Rician small-scale fading. kappa is the LoS-to-scatter power ratio
/// (kappa = 0 reduces to Rayleigh); mean_power is E[|h|^2]; los_phase is the
/// deterministic phase of the LoS component for this realization.
struct RicianSpec {
  double kappa = 0.0;
  double mean_power = 1.0;
  double los_phase = 0.0;
};

/// All fading coefficients of one realization: the direct link plus, per
/// element, the forward and backward hops and their product.
struct ChannelSet {
  std::complex<double> direct;
  std::vector<std::complex<double>> source_tag;
  std::vector<std::complex<double>> tag_dest;
  std::vector<std::complex<double>> cascade;

  std::size_t size() const { return cascade.size(); }
};

struct NoiseSpec {
  double temperature_k = 290.0;
  double bandwidth_hz = 48e6;
  static constexpr double boltzmann_j_per_k = 1.380649e-23;
};

/// Positions of the endpoints and every surface element, reduced to the link
/// descriptions the rest of the pipeline needs.
struct SceneGeometry {
  LinkGeometry direct;
  std::vector<LinkGeometry> source_tag;
  std::vector<LinkGeometry> tag_dest;

  std::size_t size() const { return source_tag.size(); }
};

/// c / f; throws std::invalid_argument for a non-positive frequency.
double wavelength(double carrier_hz);

/// (lambda / (4 pi d_ref))^2 * (d_ref / d)^exponent.
double path_loss(const LinkGeometry& link);

/// LoS component of magnitude sqrt(kappa/(kappa+1) * mean_power) at los_phase
/// plus a circular Gaussian of power mean_power/(kappa+1).
std::complex<double> sample_rician(const RicianSpec& spec, RandomStream& rng);

/// Product of the two hops of one element.
std::complex<double> cascade(std::complex<double> h_source_tag, std::complex<double> h_tag_dest);

/// Thermal noise power k_B * T * B in watts.
double noise_power(const NoiseSpec& spec);

/// Draws all 2M+1 unit-power links of one realization. Every link gets an
/// independent uniform LoS phase; draw order is direct, then per element the
/// source-tag hop followed by the tag-destination hop.
ChannelSet draw_channel_set(std::size_t elements, double kappa_direct, double kappa_source_tag,
                            double kappa_tag_dest, RandomStream& rng);

void validate(const LinkGeometry& link);
void validate(const RicianSpec& spec);
void validate(const NoiseSpec& spec);
void validate(const ChannelSet& channels);

}  // namespace risim
