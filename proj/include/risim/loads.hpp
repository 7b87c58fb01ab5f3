#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace risim {

/// A tag's switchable termination states: K reflection coefficients, the
/// antenna's structural mode, and the scattering efficiency.
struct LoadSet {
  std::vector<std::complex<double>> gammas;
  std::complex<double> structural_mode{0.0, 0.0};
  double eta = 1.0;

  std::size_t size() const { return gammas.size(); }
};

/// Normalized per-symbol modulation values with unit mean square.
struct ModulationAlphabet {
  std::vector<std::complex<double>> symbols;
  double norm_factor = 1.0;  // sqrt of the load set's mean square deviation

  std::size_t size() const { return symbols.size(); }
};

/// (1/K) * sum |A_s - Gamma_k|^2.
double mean_square_deviation(const LoadSet& loads);

/// symbols[k] = (A_s - Gamma_k) / sqrt(msd); mean square of the result is 1.
ModulationAlphabet modulation_alphabet(const LoadSet& loads);

/// Mean received power gain of one element:
/// eta * loss_source_tag * loss_tag_dest * msd * rel_antenna_gain (linear).
double element_gain(double eta, double loss_source_tag, double loss_tag_dest, double msd,
                    double rel_antenna_gain);

/// The canonical binary set: Gamma = {+1, -1}, structural mode 0.
LoadSet binary_load_set(double eta = 1.0);

/// count unit-magnitude reflection coefficients evenly spaced over an arc of
/// arc_span_deg degrees centered on arc_center_deg.
LoadSet synth_varactor_set(std::size_t count, double arc_span_deg, std::complex<double> structural_mode,
                           double arc_center_deg = 0.0, double eta = 1.0);

/// Bisects a real structural-mode magnitude over [lo, hi] (signed, measured
/// along the arc-center axis) until the angular span of {A_s - Gamma_k}
/// reaches target_span_deg. The bracket must enclose the target.
std::complex<double> calibrate_structural_mode(std::size_t count, double arc_span_deg,
                                               double target_span_deg, double arc_center_deg,
                                               double lo, double hi);

/// The default 21-state varactor bank: unit-magnitude coefficients over a
/// 120-degree arc with the structural mode calibrated so the symbol span is
/// 60 degrees.
LoadSet default_varactor_set(double eta = 1.0);

/// Angular extent of a point set around the origin, in degrees: 360 minus the
/// largest angular gap between consecutive points. Near-zero points are
/// ignored.
double angular_span_deg(std::span<const std::complex<double>> points);

/// Load-table text format: optional comment lines ('#'), one "A_s re im"
/// line, one "eta value" line, and one "re im" line per load.
LoadSet parse_load_table(std::istream& in);
LoadSet load_load_table(const std::string& path);
void write_load_table(std::ostream& out, const LoadSet& loads);

void validate(const LoadSet& loads);

}  // namespace risim
