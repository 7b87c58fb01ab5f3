#include "risim/loads.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "risim/ini.hpp"
#include "risim/units.hpp"

namespace risim {

void validate(const LoadSet& loads) {
  if (loads.gammas.size() < 2) throw std::invalid_argument("load set: need at least two loads");
  for (const auto& g : loads.gammas) {
    if (std::abs(g) > 1.0 + 1e-12) throw std::invalid_argument("load set: passive loads require |Gamma| <= 1");
  }
  if (!(loads.eta > 0.0) || !(loads.eta <= 1.0)) throw std::invalid_argument("load set: eta must be in (0, 1]");
  double sum = 0.0;
  for (const auto& g : loads.gammas) sum += std::norm(loads.structural_mode - g);
  if (!(sum > 0.0)) throw std::invalid_argument("load set: all loads coincide with the structural mode");
}

double mean_square_deviation(const LoadSet& loads) {
  validate(loads);
  double sum = 0.0;
  for (const auto& g : loads.gammas) sum += std::norm(loads.structural_mode - g);
  return sum / static_cast<double>(loads.gammas.size());
}

ModulationAlphabet modulation_alphabet(const LoadSet& loads) {
  const double msd = mean_square_deviation(loads);
  ModulationAlphabet alphabet;
  alphabet.norm_factor = std::sqrt(msd);
  alphabet.symbols.reserve(loads.gammas.size());
  for (const auto& g : loads.gammas) {
    alphabet.symbols.push_back((loads.structural_mode - g) / alphabet.norm_factor);
  }
  return alphabet;
}

double element_gain(double eta, double loss_source_tag, double loss_tag_dest, double msd,
                    double rel_antenna_gain) {
  if (!(eta > 0.0) || !(loss_source_tag > 0.0) || !(loss_tag_dest > 0.0) || !(msd > 0.0) ||
      !(rel_antenna_gain > 0.0)) {
    throw std::invalid_argument("element gain: all factors must be positive");
  }
  return eta * loss_source_tag * loss_tag_dest * msd * rel_antenna_gain;
}

LoadSet binary_load_set(double eta) {
  LoadSet loads;
  loads.gammas = {{1.0, 0.0}, {-1.0, 0.0}};
  loads.structural_mode = {0.0, 0.0};
  loads.eta = eta;
  return loads;
}

LoadSet synth_varactor_set(std::size_t count, double arc_span_deg, std::complex<double> structural_mode,
                           double arc_center_deg, double eta) {
  if (count < 2) throw std::invalid_argument("varactor set: need at least two loads");
  if (!(arc_span_deg > 0.0) || !(arc_span_deg <= 360.0)) {
    throw std::invalid_argument("varactor set: arc span must be in (0, 360] degrees");
  }
  LoadSet loads;
  loads.structural_mode = structural_mode;
  loads.eta = eta;
  loads.gammas.reserve(count);
  const double start = deg_to_rad(arc_center_deg - 0.5 * arc_span_deg);
  const double step = deg_to_rad(arc_span_deg) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = start + step * static_cast<double>(i);
    loads.gammas.emplace_back(std::cos(a), std::sin(a));
  }
  validate(loads);
  return loads;
}

double angular_span_deg(std::span<const std::complex<double>> points) {
  double max_mag = 0.0;
  for (const auto& p : points) max_mag = std::max(max_mag, std::abs(p));
  std::vector<double> angles;
  angles.reserve(points.size());
  for (const auto& p : points) {
    if (std::abs(p) > 1e-15 * max_mag && std::abs(p) > 0.0) angles.push_back(wrap_angle(std::arg(p)));
  }
  if (angles.size() < 2) return 0.0;
  std::sort(angles.begin(), angles.end());
  double max_gap = two_pi - angles.back() + angles.front();
  for (std::size_t i = 1; i < angles.size(); ++i) {
    max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
  }
  return rad_to_deg(two_pi - max_gap);
}

namespace {

double symbol_span_for(std::size_t count, double arc_span_deg, double arc_center_deg, double a) {
  const std::complex<double> axis{std::cos(deg_to_rad(arc_center_deg)), std::sin(deg_to_rad(arc_center_deg))};
  const LoadSet loads = synth_varactor_set(count, arc_span_deg, a * axis, arc_center_deg, 1.0);
  std::vector<std::complex<double>> deviations;
  deviations.reserve(count);
  for (const auto& g : loads.gammas) deviations.push_back(loads.structural_mode - g);
  return angular_span_deg(deviations);
}

}  // namespace

std::complex<double> calibrate_structural_mode(std::size_t count, double arc_span_deg,
                                               double target_span_deg, double arc_center_deg,
                                               double lo, double hi) {
  double f_lo = symbol_span_for(count, arc_span_deg, arc_center_deg, lo) - target_span_deg;
  double f_hi = symbol_span_for(count, arc_span_deg, arc_center_deg, hi) - target_span_deg;
  if (f_lo * f_hi > 0.0) throw std::invalid_argument("structural-mode calibration: bracket does not enclose the target span");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = symbol_span_for(count, arc_span_deg, arc_center_deg, mid) - target_span_deg;
    if (f_mid == 0.0 || std::abs(hi - lo) < 1e-12) {
      lo = hi = mid;
      break;
    }
    if (f_lo * f_mid <= 0.0) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  const double a = 0.5 * (lo + hi);
  const std::complex<double> axis{std::cos(deg_to_rad(arc_center_deg)), std::sin(deg_to_rad(arc_center_deg))};
  return a * axis;
}

LoadSet default_varactor_set(double eta) {
  // Calibrated structural mode sits on the arc axis opposite the arc, at the
  // magnitude where the symbol span reaches 60 degrees (A_s = -1).
  const std::complex<double> a_s = calibrate_structural_mode(21, 120.0, 60.0, 0.0, -0.2, -5.0);
  return synth_varactor_set(21, 120.0, a_s, 0.0, eta);
}

LoadSet parse_load_table(std::istream& in) {
  LoadSet loads;
  bool saw_structural = false;
  bool saw_eta = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    if (first[0] == '#') continue;
    const auto fail = [lineno](const std::string& what) {
      throw std::invalid_argument("load table line " + std::to_string(lineno) + ": " + what);
    };
    if (first == "A_s") {
      std::string re, im;
      if (!(tokens >> re >> im)) fail("expected 'A_s re im'");
      loads.structural_mode = {parse_double(re), parse_double(im)};
      saw_structural = true;
    } else if (first == "eta") {
      std::string v;
      if (!(tokens >> v)) fail("expected 'eta value'");
      loads.eta = parse_double(v);
      saw_eta = true;
    } else {
      std::string im;
      if (!(tokens >> im)) fail("expected 're im'");
      loads.gammas.emplace_back(parse_double(first), parse_double(im));
    }
    std::string extra;
    if (tokens >> extra) fail("trailing content '" + extra + "'");
  }
  if (!saw_structural) throw std::invalid_argument("load table: missing A_s line");
  if (!saw_eta) throw std::invalid_argument("load table: missing eta line");
  validate(loads);
  return loads;
}

LoadSet load_load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open load table: " + path);
  return parse_load_table(in);
}

namespace {

std::string format_full(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void write_load_table(std::ostream& out, const LoadSet& loads) {
  validate(loads);
  out << "A_s " << format_full(loads.structural_mode.real()) << ' '
      << format_full(loads.structural_mode.imag()) << '\n';
  out << "eta " << format_full(loads.eta) << '\n';
  for (const auto& g : loads.gammas) {
    out << format_full(g.real()) << ' ' << format_full(g.imag()) << '\n';
  }
}

}  // namespace risim
