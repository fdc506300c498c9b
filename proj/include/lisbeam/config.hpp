#pragma once

// Experiment configuration: a flat `key = value` text format.
//
//   # comment
//   n_tx = 64
//   bs_pos = 2, 0, 10          # meters
//   sweep_variable = tx_power_dbm
//   sweep_values = 0, 10, 20, 30
//   methods = tsvd, spgm, random
//
// Omitted keys take the defaults below (the reference LIS-assisted mmWave setup).
// See README.md for the full key list.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lisbeam/channel.hpp"
#include "lisbeam/manifold.hpp"
#include "lisbeam/transceiver.hpp"
#include "lisbeam/units.hpp"

namespace lisbeam {

// Malformed configuration text; the message carries "<source>:<line>".
class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Well-formed but inconsistent configuration; `field()` names the offending key.
class ValidationError : public ConfigError {
public:
    ValidationError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class SweepVariable { tx_power_dbm, lis_elements, n_streams, angle_error_deg };
enum class Method { tsvd, spgm, random };
enum class Precoding { digital, hybrid, both };
enum class PowerAllocationMode { equal, water_filling };

const char* to_string(SweepVariable v);
const char* to_string(Method m);
const char* to_string(Precoding p);
Method parse_method(const std::string& s);
Precoding parse_precoding(const std::string& s);

struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Position& a, const Position& b);

struct ExperimentConfig {
    ArrayGeometry geometry;
    int n_streams = 4;
    int n_rf_tx = 6;
    int n_rf_rx = 6;
    int p_paths = 7;
    int l_paths = 7;

    Position bs_pos{2.0, 0.0, 10.0};
    Position lis_pos{0.0, 148.0, 10.0};
    Position ue_pos{5.0, 150.0, 1.8};

    double path_loss_a = 61.4;
    double path_loss_b = 2.0;
    double shadow_sigma_db = 5.8;
    double rician_mu_db = 10.0;
    double carrier_hz = 28e9;
    double bandwidth_hz = 251.1886e6;
    std::optional<double> noise_dbm; // overrides the thermal floor when set
    double tx_power_dbm = 30.0;
    double tx_gain_dbi = 24.5;
    double rx_gain_dbi = 0.0;
    units::GainScaling gain_scaling = units::GainScaling::literal;
    double angle_error_deg = 0.0;

    SweepVariable sweep_variable = SweepVariable::tx_power_dbm;
    std::vector<double> sweep_values{30.0};
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<Method> methods{Method::tsvd, Method::spgm, Method::random};
    Precoding precoding = Precoding::digital;
    PowerAllocationMode power_allocation = PowerAllocationMode::equal;

    DescentConfig descent;
    HybridConfig hybrid;
    int oracle_levels = 8;

    double noise_power_dbm() const;
    LinkBudget link_budget() const;
    LinkDistances distances() const;

    // Copy with the sweep variable set to `value`.
    ExperimentConfig at_sweep_value(double value) const;

    // Throws ValidationError naming the first violated field.
    void validate() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");
ExperimentConfig load_config(const std::string& path);

} // namespace lisbeam
