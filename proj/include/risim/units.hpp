#pragma once

#include <cmath>
#include <numbers>

namespace risim {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double speed_of_light_m_s = 299792458.0;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }
inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double rad) {
  double r = std::fmod(rad, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

}  // namespace risim
