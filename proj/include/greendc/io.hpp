// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_IO_HPP
#define GREENDC_IO_HPP

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "greendc/errors.hpp"
#include "greendc/sim.hpp"

namespace greendc {

// ---------------------------------------------------------------------------
// Logging (GREENDC_LOG = error | info | debug)
// ---------------------------------------------------------------------------

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("GREENDC_LOG");
        if (!env) return LogLevel::Error;
        const std::string_view v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        return LogLevel::Error;
    }();
    return level;
}

inline void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "[info] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) std::cerr << "[debug] " << msg << "\n";
}

// ---------------------------------------------------------------------------
// Number formatting and parsing (exact round-trip)
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

inline bool parse_int(std::string_view s, long long& out) {
    s = trim(s);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

inline bool parse_bool(std::string_view s, bool& out) {
    s = trim(s);
    if (s == "true" || s == "1") { out = true; return true; }
    if (s == "false" || s == "0") { out = false; return true; }
    return false;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// D-matrix file (N rows of N comma-separated degC-per-watt values)
// ---------------------------------------------------------------------------

inline ThermalModel load_d_matrix(const std::filesystem::path& path, double t_supply_c) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open heat-transfer matrix file: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        std::vector<double> row;
        for (const auto field : detail::split_csv(trimmed)) {
            double v = 0.0;
            if (!detail::parse_double(field, v)) {
                throw TraceError("d-matrix " + path.string() + " line " +
                                     std::to_string(line_no) + ": malformed value '" +
                                     std::string(field) + "'",
                                 line_no);
            }
            if (v < 0.0) {
                throw TraceError("d-matrix " + path.string() + " line " +
                                     std::to_string(line_no) + ": negative entry",
                                 line_no);
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    ThermalModel model;
    model.n = n;
    model.d.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw TraceError("d-matrix " + path.string() + ": row " + std::to_string(i) +
                             " has " + std::to_string(rows[i].size()) + " values, expected " +
                             std::to_string(n));
        }
        model.d.insert(model.d.end(), rows[i].begin(), rows[i].end());
    }
    model.t_supply_c.assign(n, t_supply_c);
    return model;
}

inline void write_d_matrix(const ThermalModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (std::size_t i = 0; i < model.n; ++i) {
        for (std::size_t k = 0; k < model.n; ++k) {
            if (k) out << ',';
            out << format_double(model.d[i * model.n + k]);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Scenario config (sectioned key = value text)
// ---------------------------------------------------------------------------

namespace detail {

struct ConfigCursor {
    std::string section;
    std::string key;
    std::size_t line = 0;

    std::string describe() const { return section + "." + key; }
};

[[noreturn]] inline void range_error(const ConfigCursor& c, const std::string& why) {
    throw ConfigError("config line " + std::to_string(c.line) + ": " + c.describe() + " " +
                          why,
                      c.describe(), c.line);
}

inline double want_double(const ConfigCursor& c, std::string_view value) {
    double v = 0.0;
    if (!parse_double(value, v)) {
        throw ConfigError("config line " + std::to_string(c.line) + ": " + c.describe() +
                              " is not a number: '" + std::string(value) + "'",
                          c.describe(), c.line);
    }
    return v;
}

inline long long want_int(const ConfigCursor& c, std::string_view value) {
    long long v = 0;
    if (!parse_int(value, v)) {
        throw ConfigError("config line " + std::to_string(c.line) + ": " + c.describe() +
                              " is not an integer: '" + std::string(value) + "'",
                          c.describe(), c.line);
    }
    return v;
}

inline bool want_bool(const ConfigCursor& c, std::string_view value) {
    bool v = false;
    if (!parse_bool(value, v)) {
        throw ConfigError("config line " + std::to_string(c.line) + ": " + c.describe() +
                              " is not a boolean: '" + std::string(value) + "'",
                          c.describe(), c.line);
    }
    return v;
}

}  // namespace detail

/// Parses a sectioned key = value document into a Scenario. Every key is
/// optional (defaults are the reference parameters); unknown sections or
/// keys are rejected with their line number.
inline Scenario parse_config(std::istream& in,
                             const std::filesystem::path& base_dir = {}) {
    Scenario sc;
    std::string pending_d_matrix;
    detail::ConfigCursor cur;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = detail::trim(line);
        if (text.empty() || text.front() == '#' || text.front() == ';') continue;
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) +
                                      ": unterminated section header",
                                  "", line_no);
            }
            cur.section = std::string(detail::trim(text.substr(1, text.size() - 2)));
            static const std::set<std::string> known = {
                "datacenter", "power",    "cooling",  "thermal", "economics",
                "simulation", "strategy", "ga",       "forecast", "traces"};
            if (!known.count(cur.section)) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                      ": unknown section [" + cur.section + "]",
                                  cur.section, line_no);
            }
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                                  ": expected key = value",
                              "", line_no);
        }
        cur.key = std::string(detail::trim(text.substr(0, eq)));
        cur.line = line_no;
        const std::string_view value = detail::trim(text.substr(eq + 1));
        const std::string id = cur.describe();

        if (id == "datacenter.n_pms") {
            const long long v = detail::want_int(cur, value);
            if (v < 1) detail::range_error(cur, "must be >= 1");
            sc.n_pms = static_cast<std::size_t>(v);
        } else if (id == "datacenter.n_vms") {
            const long long v = detail::want_int(cur, value);
            if (v < 1) detail::range_error(cur, "must be >= 1");
            sc.n_vms = static_cast<std::size_t>(v);
        } else if (id == "datacenter.pm_capacity_mips") {
            const double v = detail::want_double(cur, value);
            if (!(v > 0)) detail::range_error(cur, "must be > 0");
            sc.pm_capacity_mips = v;
        } else if (id == "power.p_max_watts") {
            const double v = detail::want_double(cur, value);
            if (!(v > 0)) detail::range_error(cur, "must be > 0");
            sc.power.p_max_watts = v;
        } else if (id == "power.idle_ratio") {
            const double v = detail::want_double(cur, value);
            if (v < 0 || v > 1) detail::range_error(cur, "must be in [0,1]");
            sc.power.idle_ratio = v;
        } else if (id == "power.sleep_watts") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.power.sleep_watts = v;
        } else if (id == "cooling.k_econ_per_c") {
            const double v = detail::want_double(cur, value);
            if (!(v > 0)) detail::range_error(cur, "must be > 0");
            sc.cooling.k_econ_per_c = v;
        } else if (id == "cooling.t_supply_c") {
            sc.cooling.t_supply_c = detail::want_double(cur, value);
        } else if (id == "cooling.t_safe_c") {
            sc.cooling.t_safe_c = detail::want_double(cur, value);
        } else if (id == "cooling.econ_min_delta_c") {
            const double v = detail::want_double(cur, value);
            if (!(v > 0)) detail::range_error(cur, "must be > 0");
            sc.cooling.econ_min_delta_c = v;
        } else if (id == "cooling.supply_adjustment") {
            sc.cooling.adjust_supply = detail::want_bool(cur, value);
        } else if (id == "thermal.diag_c_per_w") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.thermal_diag_c_per_w = v;
        } else if (id == "thermal.neighbor_c_per_w") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.thermal_neighbor_c_per_w = v;
        } else if (id == "thermal.t_supplied_air_c") {
            sc.t_supplied_air_c = detail::want_double(cur, value);
        } else if (id == "thermal.d_matrix_file") {
            pending_d_matrix = std::string(value);
        } else if (id == "economics.energy_price") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.costs.energy_price = v;
        } else if (id == "economics.wakeup_cost") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.costs.wakeup_cost = v;
        } else if (id == "economics.migration_cost") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.costs.migration_cost = v;
        } else if (id == "economics.pricing_basis") {
            if (value == "brown_kwh") {
                sc.costs.pricing = PricingBasis::BrownEnergyKwh;
            } else if (value == "brown_watts") {
                sc.costs.pricing = PricingBasis::BrownPowerWatts;
            } else if (value == "all_watts") {
                sc.costs.pricing = PricingBasis::AllPowerWatts;
            } else {
                detail::range_error(cur, "must be brown_kwh, brown_watts, or all_watts");
            }
        } else if (id == "simulation.slot_length_s") {
            const double v = detail::want_double(cur, value);
            if (!(v > 0)) detail::range_error(cur, "must be > 0");
            sc.slot_length_s = v;
        } else if (id == "simulation.n_slots") {
            const long long v = detail::want_int(cur, value);
            if (v < 1) detail::range_error(cur, "must be >= 1");
            sc.n_slots = static_cast<std::size_t>(v);
        } else if (id == "simulation.migration_delay_s") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.migration_delay_s = v;
        } else if (id == "simulation.wakeup_delay_s") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.wakeup_delay_s = v;
        } else if (id == "simulation.rng_seed") {
            const long long v = detail::want_int(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.rng_seed = static_cast<std::uint64_t>(v);
        } else if (id == "strategy.name") {
            if (value == "dlb") {
                sc.strategy = StrategyId::Dlb;
            } else if (value == "dvmc") {
                sc.strategy = StrategyId::Dvmc;
            } else if (value == "jop") {
                sc.strategy = StrategyId::Jop;
            } else {
                detail::range_error(cur, "must be dlb, dvmc, or jop");
            }
        } else if (id == "strategy.upper_util") {
            const double v = detail::want_double(cur, value);
            if (!(v > 0 && v <= 1)) detail::range_error(cur, "must be in (0,1]");
            sc.thresholds.upper_util = v;
        } else if (id == "strategy.lower_util") {
            const double v = detail::want_double(cur, value);
            if (!(v > 0 && v < 1)) detail::range_error(cur, "must be in (0,1)");
            sc.thresholds.lower_util = v;
        } else if (id == "ga.population_size") {
            const long long v = detail::want_int(cur, value);
            if (v < 1) detail::range_error(cur, "must be >= 1");
            sc.ga.population_size = static_cast<std::size_t>(v);
        } else if (id == "ga.elite_count") {
            const long long v = detail::want_int(cur, value);
            if (v < 1) detail::range_error(cur, "must be >= 1");
            sc.ga.elite_count = static_cast<std::size_t>(v);
        } else if (id == "ga.mutation_prob") {
            const double v = detail::want_double(cur, value);
            if (v < 0 || v > 1) detail::range_error(cur, "must be in [0,1]");
            sc.ga.mutation_prob_per_gene = v;
        } else if (id == "ga.generations") {
            const long long v = detail::want_int(cur, value);
            if (v < 1) detail::range_error(cur, "must be >= 1");
            sc.ga.generations = static_cast<std::size_t>(v);
        } else if (id == "forecast.k_neighbors") {
            const long long v = detail::want_int(cur, value);
            if (v < 1) detail::range_error(cur, "must be >= 1");
            sc.forecast.k_neighbors = static_cast<std::size_t>(v);
        } else if (id == "forecast.window_len") {
            const long long v = detail::want_int(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.forecast.window_len = static_cast<std::size_t>(v);
        } else if (id == "forecast.zero_ape_floor_w") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.forecast.zero_ape_floor_w = v;
        } else if (id == "forecast.slots_per_day") {
            const long long v = detail::want_int(cur, value);
            if (v < 1) detail::range_error(cur, "must be >= 1");
            sc.forecast.slots_per_day = static_cast<std::size_t>(v);
        } else if (id == "traces.demand_peak_fraction") {
            const double v = detail::want_double(cur, value);
            if (!(v > 0)) detail::range_error(cur, "must be > 0");
            sc.demand_peak_fraction = v;
        } else if (id == "traces.demand_trough_fraction") {
            const double v = detail::want_double(cur, value);
            if (v < 0 || v > 1) detail::range_error(cur, "must be in [0,1]");
            sc.demand_trough_fraction = v;
        } else if (id == "traces.solar_peak_w") {
            const double v = detail::want_double(cur, value);
            if (v < 0) detail::range_error(cur, "must be >= 0");
            sc.solar_peak_w = v;
        } else if (id == "traces.t_out_min_c") {
            sc.t_out_min_c = detail::want_double(cur, value);
        } else if (id == "traces.t_out_max_c") {
            sc.t_out_max_c = detail::want_double(cur, value);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  id + "'",
                              id, line_no);
        }
    }

    if (sc.thresholds.lower_util >= sc.thresholds.upper_util) {
        throw ConfigError("strategy.lower_util must be below strategy.upper_util",
                          "strategy.lower_util", 0);
    }
    if (sc.ga.elite_count > sc.ga.population_size) {
        throw ConfigError("ga.elite_count must not exceed ga.population_size",
                          "ga.elite_count", 0);
    }
    if (sc.migration_delay_s >= sc.slot_length_s || sc.wakeup_delay_s >= sc.slot_length_s) {
        throw ConfigError("delays must be shorter than simulation.slot_length_s",
                          "simulation.slot_length_s", 0);
    }
    if (sc.t_out_min_c > sc.t_out_max_c) {
        throw ConfigError("traces.t_out_min_c must not exceed traces.t_out_max_c",
                          "traces.t_out_min_c", 0);
    }
    if (!pending_d_matrix.empty()) {
        std::filesystem::path p(pending_d_matrix);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        ThermalModel model = load_d_matrix(p, sc.t_supplied_air_c);
        if (model.n != sc.n_pms) {
            throw ConfigError("thermal.d_matrix_file has " + std::to_string(model.n) +
                                  " rows, expected datacenter.n_pms = " +
                                  std::to_string(sc.n_pms),
                              "thermal.d_matrix_file", 0);
        }
        sc.thermal_override = std::move(model);
    }
    return sc;
}

inline Scenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    log_info("loading config " + path.string());
    return parse_config(in, path.parent_path());
}

/// Serializes a scenario back to config text. When the scenario carries a
/// thermal override, d_matrix_ref names the sibling CSV holding it.
inline void write_config(const Scenario& sc, std::ostream& out,
                         const std::string& d_matrix_ref = "d_matrix.csv") {
    out << "[datacenter]\n";
    out << "n_pms = " << sc.n_pms << "\n";
    out << "n_vms = " << sc.n_vms << "\n";
    out << "pm_capacity_mips = " << format_double(sc.pm_capacity_mips) << "\n";
    out << "\n[power]\n";
    out << "p_max_watts = " << format_double(sc.power.p_max_watts) << "\n";
    out << "idle_ratio = " << format_double(sc.power.idle_ratio) << "\n";
    out << "sleep_watts = " << format_double(sc.power.sleep_watts) << "\n";
    out << "\n[cooling]\n";
    out << "k_econ_per_c = " << format_double(sc.cooling.k_econ_per_c) << "\n";
    out << "t_supply_c = " << format_double(sc.cooling.t_supply_c) << "\n";
    out << "t_safe_c = " << format_double(sc.cooling.t_safe_c) << "\n";
    out << "econ_min_delta_c = " << format_double(sc.cooling.econ_min_delta_c) << "\n";
    out << "supply_adjustment = " << (sc.cooling.adjust_supply ? "true" : "false") << "\n";
    out << "\n[thermal]\n";
    out << "diag_c_per_w = " << format_double(sc.thermal_diag_c_per_w) << "\n";
    out << "neighbor_c_per_w = " << format_double(sc.thermal_neighbor_c_per_w) << "\n";
    out << "t_supplied_air_c = " << format_double(sc.t_supplied_air_c) << "\n";
    if (sc.thermal_override) {
        out << "d_matrix_file = " << d_matrix_ref << "\n";
    }
    out << "\n[economics]\n";
    out << "energy_price = " << format_double(sc.costs.energy_price) << "\n";
    out << "wakeup_cost = " << format_double(sc.costs.wakeup_cost) << "\n";
    out << "migration_cost = " << format_double(sc.costs.migration_cost) << "\n";
    out << "pricing_basis = ";
    switch (sc.costs.pricing) {
        case PricingBasis::BrownEnergyKwh: out << "brown_kwh"; break;
        case PricingBasis::BrownPowerWatts: out << "brown_watts"; break;
        case PricingBasis::AllPowerWatts: out << "all_watts"; break;
    }
    out << "\n";
    out << "\n[simulation]\n";
    out << "slot_length_s = " << format_double(sc.slot_length_s) << "\n";
    out << "n_slots = " << sc.n_slots << "\n";
    out << "migration_delay_s = " << format_double(sc.migration_delay_s) << "\n";
    out << "wakeup_delay_s = " << format_double(sc.wakeup_delay_s) << "\n";
    out << "rng_seed = " << sc.rng_seed << "\n";
    out << "\n[strategy]\n";
    out << "name = " << strategy_name(sc.strategy) << "\n";
    out << "upper_util = " << format_double(sc.thresholds.upper_util) << "\n";
    out << "lower_util = " << format_double(sc.thresholds.lower_util) << "\n";
    out << "\n[ga]\n";
    out << "population_size = " << sc.ga.population_size << "\n";
    out << "elite_count = " << sc.ga.elite_count << "\n";
    out << "mutation_prob = " << format_double(sc.ga.mutation_prob_per_gene) << "\n";
    out << "generations = " << sc.ga.generations << "\n";
    out << "\n[forecast]\n";
    out << "k_neighbors = " << sc.forecast.k_neighbors << "\n";
    out << "window_len = " << sc.forecast.window_len << "\n";
    out << "zero_ape_floor_w = " << format_double(sc.forecast.zero_ape_floor_w) << "\n";
    out << "slots_per_day = " << sc.forecast.slots_per_day << "\n";
    out << "\n[traces]\n";
    out << "demand_peak_fraction = " << format_double(sc.demand_peak_fraction) << "\n";
    out << "demand_trough_fraction = " << format_double(sc.demand_trough_fraction) << "\n";
    out << "solar_peak_w = " << format_double(sc.solar_peak_w) << "\n";
    out << "t_out_min_c = " << format_double(sc.t_out_min_c) << "\n";
    out << "t_out_max_c = " << format_double(sc.t_out_max_c) << "\n";
}

// ---------------------------------------------------------------------------
// Trace CSVs
// ---------------------------------------------------------------------------

namespace detail {

struct CsvReader {
    std::ifstream in;
    std::string path;
    std::size_t line_no = 0;

    CsvReader(const std::filesystem::path& p, std::string_view expected_header)
        : in(p), path(p.string()) {
        if (!in) throw IoError("cannot open trace file: " + path);
        std::string header;
        if (!std::getline(in, header)) {
            throw TraceError(path + ": empty file, expected header '" +
                             std::string(expected_header) + "'");
        }
        ++line_no;
        if (trim(header) != expected_header) {
            throw TraceError(path + " line 1: expected header '" +
                                 std::string(expected_header) + "', got '" +
                                 std::string(trim(header)) + "'",
                             1);
        }
    }

    bool next(std::vector<std::string_view>& fields, std::string& storage) {
        while (std::getline(in, storage)) {
            ++line_no;
            if (trim(storage).empty()) continue;
            fields = split_csv(trim(storage));
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw TraceError(path + " line " + std::to_string(line_no) + ": " + why, line_no);
    }

    std::size_t field_index(std::string_view field) {
        long long v = 0;
        if (!parse_int(field, v) || v < 0) fail("malformed index '" + std::string(field) + "'");
        return static_cast<std::size_t>(v);
    }

    double field_double(std::string_view field) {
        double v = 0.0;
        if (!parse_double(field, v)) fail("malformed number '" + std::string(field) + "'");
        return v;
    }
};

// Loads a dense (slot -> value) series with the given header and column name.
inline std::vector<double> load_slot_series(const std::filesystem::path& path,
                                            std::string_view header, bool nonnegative) {
    CsvReader reader(path, header);
    std::map<std::size_t, double> values;
    std::vector<std::string_view> fields;
    std::string storage;
    while (reader.next(fields, storage)) {
        if (fields.size() != 2) reader.fail("expected 2 fields");
        const std::size_t slot = reader.field_index(fields[0]);
        const double v = reader.field_double(fields[1]);
        if (nonnegative && v < 0.0) reader.fail("value must be >= 0");
        if (!values.emplace(slot, v).second) {
            reader.fail("duplicate slot " + std::to_string(slot));
        }
    }
    std::vector<double> series(values.empty() ? 0 : values.rbegin()->first + 1, 0.0);
    for (std::size_t t = 0; t < series.size(); ++t) {
        auto it = values.find(t);
        if (it == values.end()) {
            throw TraceError(path.string() + ": missing slot " + std::to_string(t));
        }
        series[t] = it->second;
    }
    return series;
}

}  // namespace detail

/// Loads the three trace files. Coverage must be dense: every (slot, vm)
/// pair exactly once in the demand file, every slot exactly once in the
/// solar and temperature files, and all three agree on the slot count.
inline TraceSet load_traces(const std::filesystem::path& demand_path,
                            const std::filesystem::path& solar_path,
                            const std::filesystem::path& temp_path) {
    TraceSet traces;

    detail::CsvReader reader(demand_path, "slot,vm_id,demand_mips");
    std::map<std::pair<std::size_t, std::size_t>, double> cells;
    std::size_t max_slot = 0;
    std::size_t max_vm = 0;
    std::vector<std::string_view> fields;
    std::string storage;
    bool any = false;
    while (reader.next(fields, storage)) {
        if (fields.size() != 3) reader.fail("expected 3 fields");
        const std::size_t slot = reader.field_index(fields[0]);
        const std::size_t vm = reader.field_index(fields[1]);
        const double demand = reader.field_double(fields[2]);
        if (demand < 0.0) reader.fail("demand must be >= 0");
        if (!cells.emplace(std::make_pair(slot, vm), demand).second) {
            reader.fail("duplicate (slot " + std::to_string(slot) + ", vm " +
                        std::to_string(vm) + ")");
        }
        max_slot = std::max(max_slot, slot);
        max_vm = std::max(max_vm, vm);
        any = true;
    }
    if (!any) throw TraceError(demand_path.string() + ": no data rows");
    const std::size_t n_slots = max_slot + 1;
    const std::size_t n_vms = max_vm + 1;
    traces.demand_mips.assign(n_slots, std::vector<double>(n_vms, 0.0));
    for (std::size_t t = 0; t < n_slots; ++t) {
        for (std::size_t j = 0; j < n_vms; ++j) {
            auto it = cells.find({t, j});
            if (it == cells.end()) {
                throw TraceError(demand_path.string() + ": missing cell (slot " +
                                 std::to_string(t) + ", vm " + std::to_string(j) + ")");
            }
            traces.demand_mips[t][j] = it->second;
        }
    }

    traces.solar_w = detail::load_slot_series(solar_path, "slot,power_w", true);
    traces.t_out_c = detail::load_slot_series(temp_path, "slot,t_out_c", false);
    if (traces.solar_w.size() != n_slots) {
        throw TraceError(solar_path.string() + ": has " +
                         std::to_string(traces.solar_w.size()) + " slots, demand has " +
                         std::to_string(n_slots) + " (first mismatch at slot " +
                         std::to_string(std::min(traces.solar_w.size(), n_slots)) + ")");
    }
    if (traces.t_out_c.size() != n_slots) {
        throw TraceError(temp_path.string() + ": has " +
                         std::to_string(traces.t_out_c.size()) + " slots, demand has " +
                         std::to_string(n_slots) + " (first mismatch at slot " +
                         std::to_string(std::min(traces.t_out_c.size(), n_slots)) + ")");
    }
    return traces;
}

/// Loads a standalone generation series (the forecast-eval input format).
inline std::vector<double> load_solar_csv(const std::filesystem::path& path) {
    return detail::load_slot_series(path, "slot,power_w", true);
}

inline void write_traces(const TraceSet& traces, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "demand.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / "demand.csv").string());
        out << "slot,vm_id,demand_mips\n";
        for (std::size_t t = 0; t < traces.demand_mips.size(); ++t) {
            for (std::size_t j = 0; j < traces.demand_mips[t].size(); ++j) {
                out << t << ',' << j << ',' << format_double(traces.demand_mips[t][j])
                    << '\n';
            }
        }
    }
    {
        std::ofstream out(dir / "solar.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / "solar.csv").string());
        out << "slot,power_w\n";
        for (std::size_t t = 0; t < traces.solar_w.size(); ++t) {
            out << t << ',' << format_double(traces.solar_w[t]) << '\n';
        }
    }
    {
        std::ofstream out(dir / "temperature.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / "temperature.csv").string());
        out << "slot,t_out_c\n";
        for (std::size_t t = 0; t < traces.t_out_c.size(); ++t) {
            out << t << ',' << format_double(traces.t_out_c[t]) << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Report bundle
// ---------------------------------------------------------------------------

/// Writes the run summary, the per-slot ledger, and the four plot CSVs.
/// Returns the manifest of written files. Numbers print in shortest exact
/// form so identical reports produce identical bytes.
inline std::vector<std::filesystem::path> write_report(const RunReport& report,
                                                       const Scenario& scenario,
                                                       const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    std::vector<fs::path> manifest;
    auto open = [&](const char* name) {
        fs::path p = out_dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot write " + p.string());
        manifest.push_back(p);
        return out;
    };

    {
        auto out = open("summary.txt");
        out << "strategy: " << strategy_name(report.strategy) << "\n";
        out << "seed: " << report.seed << "\n";
        out << "slots: " << report.ledgers.size() << "\n";
        out << "accumulated_net_dollars: " << format_double(report.accumulated_net_dollars)
            << "\n";
        out << "total_revenue_dollars: " << format_double(report.total_revenue_dollars)
            << "\n";
        out << "total_energy_cost_dollars: "
            << format_double(report.total_energy_cost_dollars) << "\n";
        out << "total_transition_cost_dollars: "
            << format_double(report.total_transition_cost_dollars) << "\n";
        out << "green_utilization: " << format_double(report.green_utilization) << "\n";
        out << "total_wakeups: " << report.total_wakeups << "\n";
        out << "total_migrations: " << report.total_migrations << "\n";
        if (!report.active_pm_counts.empty()) {
            const auto [mn, mx] = std::minmax_element(report.active_pm_counts.begin(),
                                                      report.active_pm_counts.end());
            out << "active_pms_min: " << *mn << "\n";
            out << "active_pms_max: " << *mx << "\n";
        }
        out << "forecast_warmup_slots: " << report.forecast_warmup_slots << "\n";
    }
    {
        auto out = open("ledger.csv");
        out << "slot,revenue_dollars,energy_cost_dollars,wakeup_cost_dollars,"
               "migration_cost_dollars,green_used_kwh,brown_used_kwh,total_power_w,"
               "cooling_power_w,net_dollars,active_pms\n";
        for (std::size_t t = 0; t < report.ledgers.size(); ++t) {
            const SlotLedger& l = report.ledgers[t];
            out << t << ',' << format_double(l.revenue_dollars) << ','
                << format_double(l.energy_cost_dollars) << ','
                << format_double(l.wakeup_cost_dollars) << ','
                << format_double(l.migration_cost_dollars) << ','
                << format_double(l.green_used_kwh) << ',' << format_double(l.brown_used_kwh)
                << ',' << format_double(l.total_power_w) << ','
                << format_double(l.cooling_power_w) << ',' << format_double(l.net_dollars)
                << ',' << report.active_pm_counts[t] << '\n';
        }
    }
    {
        auto out = open("accumulated_net.csv");
        out << "slot,accumulated_net_dollars\n";
        double acc = 0.0;
        for (std::size_t t = 0; t < report.ledgers.size(); ++t) {
            acc += report.ledgers[t].net_dollars;
            out << t << ',' << format_double(acc) << '\n';
        }
    }
    {
        auto out = open("power_breakdown.csv");
        out << "slot,total_power_w,it_power_w,cooling_power_w,solar_available_w,"
               "green_used_kwh,brown_used_kwh\n";
        for (std::size_t t = 0; t < report.ledgers.size(); ++t) {
            const SlotLedger& l = report.ledgers[t];
            out << t << ',' << format_double(l.total_power_w) << ','
                << format_double(l.total_power_w - l.cooling_power_w) << ','
                << format_double(l.cooling_power_w) << ',' << format_double(report.solar_w[t])
                << ',' << format_double(l.green_used_kwh) << ','
                << format_double(l.brown_used_kwh) << '\n';
        }
    }
    {
        auto out = open("active_pms.csv");
        out << "slot,active_pms\n";
        for (std::size_t t = 0; t < report.active_pm_counts.size(); ++t) {
            out << t << ',' << report.active_pm_counts[t] << '\n';
        }
    }
    {
        auto out = open("cooling_energy.csv");
        out << "slot,cooling_energy_kwh\n";
        for (std::size_t t = 0; t < report.cooling_energy_kwh.size(); ++t) {
            out << t << ',' << format_double(report.cooling_energy_kwh[t]) << '\n';
        }
    }
    {
        auto out = open("resolved_config.ini");
        write_config(scenario, out);
        if (scenario.thermal_override) {
            write_d_matrix(*scenario.thermal_override, out_dir / "d_matrix.csv");
            manifest.push_back(out_dir / "d_matrix.csv");
        }
    }
    return manifest;
}

}  // namespace greendc

#endif  // GREENDC_IO_HPP
