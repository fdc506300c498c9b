#include "lisbeam/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace lisbeam {

ValidationError::ValidationError(std::string field, const std::string& message)
    : ConfigError("invalid '" + field + "': " + message), field_(std::move(field))
{
}

const char* to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::tx_power_dbm: return "tx_power_dbm";
    case SweepVariable::lis_elements: return "lis_elements";
    case SweepVariable::n_streams: return "n_streams";
    case SweepVariable::angle_error_deg: return "angle_error_deg";
    }
    return "?";
}

const char* to_string(Method m)
{
    switch (m) {
    case Method::tsvd: return "tsvd";
    case Method::spgm: return "spgm";
    case Method::random: return "random";
    }
    return "?";
}

const char* to_string(Precoding p)
{
    switch (p) {
    case Precoding::digital: return "digital";
    case Precoding::hybrid: return "hybrid";
    case Precoding::both: return "both";
    }
    return "?";
}

Method parse_method(const std::string& s)
{
    if (s == "tsvd")
        return Method::tsvd;
    if (s == "spgm")
        return Method::spgm;
    if (s == "random")
        return Method::random;
    throw std::invalid_argument("unknown method '" + s + "' (expected tsvd|spgm|random)");
}

Precoding parse_precoding(const std::string& s)
{
    if (s == "digital")
        return Precoding::digital;
    if (s == "hybrid")
        return Precoding::hybrid;
    if (s == "both")
        return Precoding::both;
    throw std::invalid_argument("unknown precoding '" + s + "' (expected digital|hybrid|both)");
}

double distance(const Position& a, const Position& b)
{
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

double ExperimentConfig::noise_power_dbm() const
{
    return noise_dbm ? *noise_dbm : units::thermal_noise_dbm(bandwidth_hz);
}

LinkBudget ExperimentConfig::link_budget() const
{
    LinkBudget b;
    b.a_intercept = path_loss_a;
    b.b_exponent = path_loss_b;
    b.shadow_sigma = shadow_sigma_db;
    b.rician_mu = rician_mu_db;
    b.carrier_hz = carrier_hz;
    b.bandwidth_hz = bandwidth_hz;
    b.noise_power = units::dbm_to_mw(noise_power_dbm());
    b.tx_power = units::dbm_to_mw(tx_power_dbm);
    b.tx_antenna_gain = units::antenna_gain_factor(tx_gain_dbi, gain_scaling);
    b.rx_antenna_gain = units::antenna_gain_factor(rx_gain_dbi, gain_scaling);
    return b;
}

LinkDistances ExperimentConfig::distances() const
{
    return {distance(bs_pos, lis_pos), distance(lis_pos, ue_pos)};
}

namespace {

int as_count(double value, const char* field)
{
    if (!(value >= 1.0) || value != std::floor(value) || value > 1e9)
        throw ValidationError(field, "sweep value must be a positive integer");
    return static_cast<int>(value);
}

} // namespace

ExperimentConfig ExperimentConfig::at_sweep_value(double value) const
{
    ExperimentConfig out = *this;
    switch (sweep_variable) {
    case SweepVariable::tx_power_dbm:
        out.tx_power_dbm = value;
        break;
    case SweepVariable::lis_elements: {
        // M_y stays fixed and M_z grows.
        const int m = as_count(value, "sweep_values");
        if (m % geometry.lis_y != 0)
            throw ValidationError("sweep_values", "lis_elements value " + std::to_string(m) +
                                                      " is not a multiple of lis_y = " +
                                                      std::to_string(geometry.lis_y));
        out.geometry.lis_z = m / geometry.lis_y;
        break;
    }
    case SweepVariable::n_streams:
        out.n_streams = as_count(value, "sweep_values");
        break;
    case SweepVariable::angle_error_deg:
        out.angle_error_deg = value;
        break;
    }
    return out;
}

namespace {

void require(bool ok, const char* field, const std::string& message)
{
    if (!ok)
        throw ValidationError(field, message);
}

void validate_point(const ExperimentConfig& c)
{
    const auto& g = c.geometry;
    require(g.n_tx >= 1, "n_tx", "must be >= 1");
    require(g.n_rx >= 1, "n_rx", "must be >= 1");
    require(g.lis_y >= 1, "lis_y", "must be >= 1");
    require(g.lis_z >= 1, "lis_z", "must be >= 1");
    require(g.spacing_ratio > 0.0 && std::isfinite(g.spacing_ratio), "spacing_ratio", "must be positive");
    require(c.n_streams >= 1, "n_streams", "must be >= 1");
    require(c.p_paths >= 1, "p_paths", "must be >= 1");
    require(c.l_paths >= 1, "l_paths", "must be >= 1");
    require(c.n_streams <= std::min(c.n_rf_tx, c.n_rf_rx), "n_streams",
            "N_s = " + std::to_string(c.n_streams) + " exceeds min(n_rf_tx, n_rf_rx) = " +
                std::to_string(std::min(c.n_rf_tx, c.n_rf_rx)));
    require(c.n_rf_tx <= std::min(g.n_tx, g.n_rx), "n_rf_tx", "must not exceed min(n_tx, n_rx)");
    require(c.n_rf_rx <= std::min(g.n_tx, g.n_rx), "n_rf_rx", "must not exceed min(n_tx, n_rx)");
    require(c.n_streams <= std::min(c.l_paths, c.p_paths), "n_streams", "must not exceed min(l_paths, p_paths)");
    require(c.angle_error_deg >= 0.0 && std::isfinite(c.angle_error_deg), "angle_error_deg",
            "must be finite and non-negative");
    require(std::isfinite(c.tx_power_dbm), "tx_power_dbm", "must be finite");
    require(c.bandwidth_hz > 0.0, "bandwidth_hz", "must be positive");
    require(c.carrier_hz > 0.0, "carrier_hz", "must be positive");
    require(c.shadow_sigma_db >= 0.0, "shadow_sigma_db", "must be non-negative");
    const LinkDistances d = c.distances();
    require(d.bs_lis_m > 0.0, "lis_pos", "BS and LIS positions coincide");
    require(d.lis_ue_m > 0.0, "ue_pos", "LIS and UE positions coincide");
}

} // namespace

void ExperimentConfig::validate() const
{
    require(trials >= 1, "trials", "must be >= 1");
    require(!sweep_values.empty(), "sweep_values", "must not be empty");
    require(!methods.empty(), "methods", "must not be empty");
    require(oracle_levels >= 1, "oracle_levels", "must be >= 1");
    try {
        descent.validate();
    } catch (const Error& e) {
        throw ValidationError("descent", e.what());
    }
    require(hybrid.max_alternations >= 1, "hybrid_alternations", "must be >= 1");
    require(hybrid.inner_iters >= 1, "hybrid_inner_iters", "must be >= 1");
    require(hybrid.tolerance >= 0.0, "hybrid_tolerance", "must be non-negative");
    validate_point(*this);
    for (double value : sweep_values)
        validate_point(at_sweep_value(value));
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        out.push_back(trim(item));
    return out;
}

double to_double(const std::string& s)
{
    double value = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw std::invalid_argument("expected a number, got '" + s + "'");
    return value;
}

int to_int(const std::string& s)
{
    int value = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw std::invalid_argument("expected an integer, got '" + s + "'");
    return value;
}

std::uint64_t to_u64(const std::string& s)
{
    std::uint64_t value = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw std::invalid_argument("expected an unsigned 64-bit integer, got '" + s + "'");
    return value;
}

bool to_bool(const std::string& s)
{
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw std::invalid_argument("expected true|false, got '" + s + "'");
}

Position to_position(const std::string& s)
{
    const auto parts = split_list(s);
    if (parts.size() != 3)
        throw std::invalid_argument("expected an x,y,z triple, got '" + s + "'");
    return {to_double(parts[0]), to_double(parts[1]), to_double(parts[2])};
}

std::vector<double> to_double_list(const std::string& s)
{
    std::vector<double> out;
    for (const auto& item : split_list(s))
        out.push_back(to_double(item));
    return out;
}

SweepVariable to_sweep_variable(const std::string& s)
{
    for (auto v : {SweepVariable::tx_power_dbm, SweepVariable::lis_elements, SweepVariable::n_streams,
                   SweepVariable::angle_error_deg})
        if (s == to_string(v))
            return v;
    throw std::invalid_argument("unknown sweep variable '" + s + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"n_tx", [](auto& c, const auto& v) { c.geometry.n_tx = to_int(v); }},
        {"n_rx", [](auto& c, const auto& v) { c.geometry.n_rx = to_int(v); }},
        {"lis_y", [](auto& c, const auto& v) { c.geometry.lis_y = to_int(v); }},
        {"lis_z", [](auto& c, const auto& v) { c.geometry.lis_z = to_int(v); }},
        {"spacing_ratio", [](auto& c, const auto& v) { c.geometry.spacing_ratio = to_double(v); }},
        {"n_streams", [](auto& c, const auto& v) { c.n_streams = to_int(v); }},
        {"n_rf_tx", [](auto& c, const auto& v) { c.n_rf_tx = to_int(v); }},
        {"n_rf_rx", [](auto& c, const auto& v) { c.n_rf_rx = to_int(v); }},
        {"p_paths", [](auto& c, const auto& v) { c.p_paths = to_int(v); }},
        {"l_paths", [](auto& c, const auto& v) { c.l_paths = to_int(v); }},
        {"bs_pos", [](auto& c, const auto& v) { c.bs_pos = to_position(v); }},
        {"lis_pos", [](auto& c, const auto& v) { c.lis_pos = to_position(v); }},
        {"ue_pos", [](auto& c, const auto& v) { c.ue_pos = to_position(v); }},
        {"path_loss_a", [](auto& c, const auto& v) { c.path_loss_a = to_double(v); }},
        {"path_loss_b", [](auto& c, const auto& v) { c.path_loss_b = to_double(v); }},
        {"shadow_sigma_db", [](auto& c, const auto& v) { c.shadow_sigma_db = to_double(v); }},
        {"rician_mu_db", [](auto& c, const auto& v) { c.rician_mu_db = to_double(v); }},
        {"carrier_hz", [](auto& c, const auto& v) { c.carrier_hz = to_double(v); }},
        {"bandwidth_hz", [](auto& c, const auto& v) { c.bandwidth_hz = to_double(v); }},
        {"noise_dbm", [](auto& c, const auto& v) { c.noise_dbm = to_double(v); }},
        {"tx_power_dbm", [](auto& c, const auto& v) { c.tx_power_dbm = to_double(v); }},
        {"tx_gain_dbi", [](auto& c, const auto& v) { c.tx_gain_dbi = to_double(v); }},
        {"rx_gain_dbi", [](auto& c, const auto& v) { c.rx_gain_dbi = to_double(v); }},
        {"gain_scaling", [](auto& c, const auto& v) { c.gain_scaling = units::parse_gain_scaling(v); }},
        {"angle_error_deg", [](auto& c, const auto& v) { c.angle_error_deg = to_double(v); }},
        {"sweep_variable", [](auto& c, const auto& v) { c.sweep_variable = to_sweep_variable(v); }},
        {"sweep_values", [](auto& c, const auto& v) { c.sweep_values = to_double_list(v); }},
        {"trials", [](auto& c, const auto& v) { c.trials = to_int(v); }},
        {"seed", [](auto& c, const auto& v) { c.seed = to_u64(v); }},
        {"methods",
         [](auto& c, const auto& v) {
             c.methods.clear();
             for (const auto& item : split_list(v)) {
                 const Method m = parse_method(item);
                 if (std::find(c.methods.begin(), c.methods.end(), m) != c.methods.end())
                     throw std::invalid_argument("method '" + item + "' listed twice");
                 c.methods.push_back(m);
             }
         }},
        {"precoding", [](auto& c, const auto& v) { c.precoding = parse_precoding(v); }},
        {"water_filling",
         [](auto& c, const auto& v) {
             c.power_allocation = to_bool(v) ? PowerAllocationMode::water_filling : PowerAllocationMode::equal;
         }},
        {"epsilon", [](auto& c, const auto& v) { c.descent.epsilon = to_double(v); }},
        {"max_iters", [](auto& c, const auto& v) { c.descent.max_iters = to_int(v); }},
        {"armijo_shrink", [](auto& c, const auto& v) { c.descent.armijo_shrink = to_double(v); }},
        {"armijo_slope", [](auto& c, const auto& v) { c.descent.armijo_slope = to_double(v); }},
        {"initial_step", [](auto& c, const auto& v) { c.descent.initial_step = to_double(v); }},
        {"hybrid_alternations", [](auto& c, const auto& v) { c.hybrid.max_alternations = to_int(v); }},
        {"hybrid_inner_iters", [](auto& c, const auto& v) { c.hybrid.inner_iters = to_int(v); }},
        {"hybrid_tolerance", [](auto& c, const auto& v) { c.hybrid.tolerance = to_double(v); }},
        {"oracle_levels", [](auto& c, const auto& v) { c.oracle_levels = to_int(v); }},
    };
    return table;
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source)
{
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto where = source + ":" + std::to_string(line_no) + ": ";
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ParseError(where + "unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ParseError(where + "duplicate key '" + key + "'");
        try {
            it->second(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + key + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

} // namespace lisbeam
