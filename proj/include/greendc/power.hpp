// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_POWER_HPP
#define GREENDC_POWER_HPP

#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace greendc {

/// Linear utilization-to-power model: p = p_max * (c + (1-c) * theta).
struct PowerModel {
    double p_max_watts = 259.0;
    double idle_ratio = 0.66;
    double sleep_watts = 0.0;  // draw of a sleeping PM

    bool operator==(const PowerModel&) const = default;
};

/// Cooling efficiency model: air economizer when outside air is colder than
/// the (possibly adjusted) supply target, CRAC otherwise.
struct CoolingModel {
    double k_econ_per_c = 0.1;     // economizer factor
    double t_supply_c = 25.0;      // target supply temperature
    double t_safe_c = 35.0;        // safe outlet temperature for the hottest server
    double econ_min_delta_c = 0.5; // minimum supply-minus-outside gap for the economizer
    bool adjust_supply = true;     // derive the effective supply from the hottest server

    bool operator==(const CoolingModel&) const = default;
};

/// Heat recirculation: inlet = t_supply + D * power, D in degC per watt.
struct ThermalModel {
    std::size_t n = 0;
    std::vector<double> d;           // row-major n*n
    std::vector<double> t_supply_c;  // length n

    bool operator==(const ThermalModel&) const = default;
};

inline double pm_power(double theta, const PowerModel& model) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::domain_error("pm_power: utilization " + std::to_string(theta) +
                                " outside [0,1]");
    }
    return model.p_max_watts * (model.idle_ratio + (1.0 - model.idle_ratio) * theta);
}

/// Cooling efficiency at the given effective supply and outside temperatures.
/// The guard band keeps the economizer branch away from its singularity.
inline double cop(double t_sup_effective_c, double t_out_c, const CoolingModel& model) {
    if (t_out_c <= t_sup_effective_c - model.econ_min_delta_c) {
        return 1.0 / (model.k_econ_per_c * (t_sup_effective_c - t_out_c));
    }
    const double t = t_sup_effective_c;
    return 0.0068 * t * t + 0.0008 * t + 0.458;
}

/// Total facility draw: IT power plus cooling at the given efficiency.
inline double datacenter_power(double it_watts_total, double cop_value) {
    if (!(cop_value > 0.0)) {
        throw std::domain_error("datacenter_power: CoP must be positive, got " +
                                std::to_string(cop_value));
    }
    return (1.0 + 1.0 / cop_value) * it_watts_total;
}

inline double datacenter_power(std::span<const double> pm_powers, double cop_value) {
    return datacenter_power(std::reduce(pm_powers.begin(), pm_powers.end(), 0.0), cop_value);
}

inline std::vector<double> inlet_temperatures(const ThermalModel& model,
                                              std::span<const double> pm_powers) {
    if (pm_powers.size() != model.n || model.d.size() != model.n * model.n ||
        model.t_supply_c.size() != model.n) {
        throw std::invalid_argument("inlet_temperatures: dimension mismatch (N=" +
                                    std::to_string(model.n) + ", powers=" +
                                    std::to_string(pm_powers.size()) + ")");
    }
    std::vector<double> t_in(model.n, 0.0);
    for (std::size_t i = 0; i < model.n; ++i) {
        double acc = model.t_supply_c[i];
        const double* row = model.d.data() + i * model.n;
        for (std::size_t k = 0; k < model.n; ++k) acc += row[k] * pm_powers[k];
        t_in[i] = acc;
    }
    return t_in;
}

/// Effective supply temperature once the hottest server is pulled back to the
/// safe level: t_supply + (t_safe - hottest). Cooler servers permit a warmer
/// supply, hotter ones force a colder one.
inline double adjust_supply_temperature(double t_server_hottest_c, const CoolingModel& model) {
    return model.t_supply_c + (model.t_safe_c - t_server_hottest_c);
}

/// Synthetic recirculation matrix for a single-row layout: self-heating on
/// the diagonal, weaker coupling to index neighbors, uniform supply air.
inline ThermalModel default_thermal_model(std::size_t n, double diag_c_per_w = 0.015,
                                          double neighbor_c_per_w = 0.003,
                                          double t_supply_c = 18.0) {
    ThermalModel m;
    m.n = n;
    m.d.assign(n * n, 0.0);
    m.t_supply_c.assign(n, t_supply_c);
    for (std::size_t i = 0; i < n; ++i) {
        m.d[i * n + i] = diag_c_per_w;
        if (i > 0) m.d[i * n + (i - 1)] = neighbor_c_per_w;
        if (i + 1 < n) m.d[i * n + (i + 1)] = neighbor_c_per_w;
    }
    return m;
}

}  // namespace greendc

#endif  // GREENDC_POWER_HPP
