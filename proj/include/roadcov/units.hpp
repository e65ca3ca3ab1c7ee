#pragma once

#include <cmath>

namespace roadcov {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Thermal noise density at 290 K, dBm per Hz.
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Noise power in watts from a bandwidth and receiver noise figure.
inline double noise_power_watts(double bandwidth_hz, double noise_figure_db) {
    return dbm_to_watts(kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

} // namespace roadcov
