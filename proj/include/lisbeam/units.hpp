#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace lisbeam::units {

// Power quantities are carried in milliwatts throughout, so dBm maps directly.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

inline double db_to_power_ratio(double db) { return std::pow(10.0, db / 10.0); }
inline double db_to_amplitude_ratio(double db) { return std::pow(10.0, db / 20.0); }

inline double deg_to_rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }

// Thermal noise floor -174 dBm/Hz integrated over the bandwidth.
inline double thermal_noise_dbm(double bandwidth_hz) { return -174.0 + 10.0 * std::log10(bandwidth_hz); }

// How an antenna gain in dBi becomes the scalar that multiplies the cascade channel.
//   literal:   G = 10^(dBi/10), the linear gain inserted as-is into H_eff = G_t G_r R Phi G
//   amplitude: G = 10^(dBi/20), so that |G|^2 equals the linear power gain
enum class GainScaling { literal, amplitude };

inline double antenna_gain_factor(double dbi, GainScaling scaling)
{
    return scaling == GainScaling::literal ? db_to_power_ratio(dbi) : db_to_amplitude_ratio(dbi);
}

inline GainScaling parse_gain_scaling(const std::string& s)
{
    if (s == "literal")
        return GainScaling::literal;
    if (s == "amplitude")
        return GainScaling::amplitude;
    throw std::invalid_argument("unknown gain scaling '" + s + "' (expected literal|amplitude)");
}

inline const char* to_string(GainScaling s) { return s == GainScaling::literal ? "literal" : "amplitude"; }

} // namespace lisbeam::units
