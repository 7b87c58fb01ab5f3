#include "risim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "risim/units.hpp"

namespace risim {

double wavelength(double carrier_hz) {
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("wavelength: carrier frequency must be positive");
  return speed_of_light_m_s / carrier_hz;
}

void validate(const LinkGeometry& link) {
  if (!(link.distance_m > 0.0)) throw std::invalid_argument("link: distance must be positive");
  if (!(link.ref_distance_m > 0.0)) throw std::invalid_argument("link: reference distance must be positive");
  if (!(link.exponent > 0.0)) throw std::invalid_argument("link: path-loss exponent must be positive");
  if (!(link.wavelength_m > 0.0)) throw std::invalid_argument("link: wavelength must be positive");
}

double path_loss(const LinkGeometry& link) {
  validate(link);
  const double ref = link.wavelength_m / (4.0 * std::numbers::pi * link.ref_distance_m);
  return ref * ref * std::pow(link.ref_distance_m / link.distance_m, link.exponent);
}

void validate(const RicianSpec& spec) {
  if (!(spec.kappa >= 0.0)) throw std::invalid_argument("rician: kappa must be >= 0");
  if (!(spec.mean_power > 0.0)) throw std::invalid_argument("rician: mean power must be positive");
  if (!std::isfinite(spec.los_phase)) throw std::invalid_argument("rician: LoS phase must be finite");
}

std::complex<double> sample_rician(const RicianSpec& spec, RandomStream& rng) {
  validate(spec);
  const double los_power = spec.kappa / (spec.kappa + 1.0) * spec.mean_power;
  const double los_mag = std::sqrt(los_power);
  const std::complex<double> los{los_mag * std::cos(spec.los_phase), los_mag * std::sin(spec.los_phase)};
  return los + rng.complex_gaussian(spec.mean_power / (spec.kappa + 1.0));
}

std::complex<double> cascade(std::complex<double> h_source_tag, std::complex<double> h_tag_dest) {
  return h_source_tag * h_tag_dest;
}

void validate(const NoiseSpec& spec) {
  if (!(spec.temperature_k > 0.0)) throw std::invalid_argument("noise: temperature must be positive");
  if (!(spec.bandwidth_hz > 0.0)) throw std::invalid_argument("noise: bandwidth must be positive");
}

double noise_power(const NoiseSpec& spec) {
  validate(spec);
  return NoiseSpec::boltzmann_j_per_k * spec.temperature_k * spec.bandwidth_hz;
}

ChannelSet draw_channel_set(std::size_t elements, double kappa_direct, double kappa_source_tag,
                            double kappa_tag_dest, RandomStream& rng) {
  ChannelSet set;
  const auto draw_link = [&rng](double kappa) {
    RicianSpec spec;
    spec.kappa = kappa;
    spec.mean_power = 1.0;
    spec.los_phase = rng.uniform(0.0, two_pi);
    return sample_rician(spec, rng);
  };
  set.direct = draw_link(kappa_direct);
  set.source_tag.reserve(elements);
  set.tag_dest.reserve(elements);
  set.cascade.reserve(elements);
  for (std::size_t m = 0; m < elements; ++m) {
    const std::complex<double> st = draw_link(kappa_source_tag);
    const std::complex<double> td = draw_link(kappa_tag_dest);
    set.source_tag.push_back(st);
    set.tag_dest.push_back(td);
    set.cascade.push_back(cascade(st, td));
  }
  return set;
}

void validate(const ChannelSet& channels) {
  const std::size_t m = channels.cascade.size();
  if (channels.source_tag.size() != m || channels.tag_dest.size() != m) {
    throw std::invalid_argument("channel set: per-element vectors must have equal length");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (channels.cascade[i] != channels.source_tag[i] * channels.tag_dest[i]) {
      throw std::invalid_argument("channel set: cascade entry is not the product of its hops");
    }
  }
}

}  // namespace risim
