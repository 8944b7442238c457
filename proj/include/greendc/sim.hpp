// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_SIM_HPP
#define GREENDC_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "greendc/economics.hpp"
#include "greendc/errors.hpp"
#include "greendc/forecast.hpp"
#include "greendc/model.hpp"
#include "greendc/power.hpp"
#include "greendc/strategies.hpp"

namespace greendc {

enum class StrategyId { Dlb, Dvmc, Jop };

inline const char* strategy_name(StrategyId id) {
    switch (id) {
        case StrategyId::Dlb: return "dlb";
        case StrategyId::Dvmc: return "dvmc";
        case StrategyId::Jop: return "jop";
    }
    return "?";
}

/// Full description of one experiment. Defaults reproduce the reference
/// setup: 40 PMs of 1500 MIPS / 259 W / 66% idle ratio, 100 VMs cycling
/// through the three example revenue profiles, 24 hourly slots.
struct Scenario {
    std::size_t n_pms = 40;
    std::size_t n_vms = 100;
    double pm_capacity_mips = 1500.0;

    PowerModel power;
    CoolingModel cooling;
    double thermal_diag_c_per_w = 0.015;
    double thermal_neighbor_c_per_w = 0.003;
    double t_supplied_air_c = 18.0;
    std::optional<ThermalModel> thermal_override;

    CostModel costs{0.08, 0.00024, 0.00012, PricingBasis::BrownPowerWatts};

    double slot_length_s = 3600.0;
    std::size_t n_slots = 24;
    double migration_delay_s = 5.0;
    double wakeup_delay_s = 15.0;

    StrategyId strategy = StrategyId::Jop;
    ThresholdConfig thresholds;
    GAConfig ga;
    ForecastConfig forecast;
    std::uint64_t rng_seed = 1;

    // Synthetic trace shape.
    double demand_peak_fraction = 0.70;    // aggregate peak over total capacity
    double demand_trough_fraction = 0.10;  // overnight floor relative to the peak
    double solar_peak_w = 5000.0;
    double t_out_min_c = 10.0;
    double t_out_max_c = 30.0;

    bool operator==(const Scenario&) const = default;

    ThermalModel thermal_model() const {
        if (thermal_override) return *thermal_override;
        return default_thermal_model(n_pms, thermal_diag_c_per_w, thermal_neighbor_c_per_w,
                                     t_supplied_air_c);
    }
};

struct TraceSet {
    std::vector<std::vector<double>> demand_mips;  // [slot][vm]
    std::vector<double> solar_w;                   // [slot]
    std::vector<double> t_out_c;                   // [slot]

    bool operator==(const TraceSet&) const = default;
};

struct RunReport {
    StrategyId strategy = StrategyId::Dlb;
    std::uint64_t seed = 0;
    std::vector<SlotLedger> ledgers;
    double accumulated_net_dollars = 0.0;
    double total_revenue_dollars = 0.0;
    double total_energy_cost_dollars = 0.0;
    double total_transition_cost_dollars = 0.0;
    double green_utilization = 0.0;  // sum used over sum available, 0 when none offered
    std::vector<std::size_t> active_pm_counts;
    std::vector<double> cooling_energy_kwh;
    std::vector<double> green_available_kwh;
    std::vector<double> solar_w;
    std::vector<double> green_forecast_w;  // what JOP planned against (actuals elsewhere)
    std::size_t forecast_warmup_slots = 0; // leading slots planned with perfect knowledge
    std::size_t total_wakeups = 0;
    std::size_t total_migrations = 0;

    bool operator==(const RunReport&) const = default;
};

namespace detail {

// Two-peak diurnal shape normalized to max 1, floored at the trough fraction.
inline std::vector<double> diurnal_base(std::size_t n_slots, double trough_fraction) {
    const double sigma = 2.5;
    const double day = static_cast<double>(n_slots);
    std::vector<double> base(n_slots, 0.0);
    double peak = 0.0;
    for (std::size_t t = 0; t < n_slots; ++t) {
        const double x = static_cast<double>(t);
        const double g1 = std::exp(-std::pow(x - day * 10.0 / 24.0, 2) / (2 * sigma * sigma));
        const double g2 =
            0.85 * std::exp(-std::pow(x - day * 20.0 / 24.0, 2) / (2 * sigma * sigma));
        base[t] = g1 + g2;
        peak = std::max(peak, base[t]);
    }
    for (double& v : base) {
        v = trough_fraction + (1.0 - trough_fraction) * (v / peak);
    }
    return base;
}

}  // namespace detail

/// Bell-shaped generation profile: dark before slot 6/24 of the day and
/// after slot 19/24, peaking at midday, with optional multiplicative noise.
inline std::vector<double> synthesize_solar_series(std::size_t n_slots,
                                                   std::size_t slots_per_day, double peak_w,
                                                   double noise_fraction,
                                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> solar(n_slots, 0.0);
    const double day = static_cast<double>(slots_per_day);
    const double dawn = day * 6.0 / 24.0;
    const double dusk = day * 19.0 / 24.0;
    for (std::size_t t = 0; t < n_slots; ++t) {
        const double hour = static_cast<double>(t % slots_per_day);
        if (hour < dawn || hour > dusk) continue;
        const double phase = (hour - dawn) / (dusk - dawn);
        double value = peak_w * std::sin(std::numbers::pi * phase);
        if (noise_fraction > 0.0) {
            value *= 1.0 - noise_fraction + 2.0 * noise_fraction * detail::rng_unit(rng);
        }
        solar[t] = std::max(0.0, value);
    }
    return solar;
}

/// Paper-shaped synthetic traces: two-peak demand with a per-VM scale factor
/// drawn uniformly from [0.7, 1.3], a clamped solar bell, and a sinusoidal
/// outside temperature that bottoms out pre-dawn. Deterministic per seed.
inline TraceSet synthesize_traces(const Scenario& sc, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    TraceSet traces;
    const std::size_t t_n = sc.n_slots;

    const std::vector<double> base = detail::diurnal_base(t_n, sc.demand_trough_fraction);
    const double per_vm_peak = sc.demand_peak_fraction * static_cast<double>(sc.n_pms) *
                               sc.pm_capacity_mips / static_cast<double>(sc.n_vms);
    std::vector<double> vm_scale(sc.n_vms);
    for (double& s : vm_scale) s = 0.7 + 0.6 * detail::rng_unit(rng);

    traces.demand_mips.assign(t_n, std::vector<double>(sc.n_vms, 0.0));
    for (std::size_t t = 0; t < t_n; ++t) {
        for (std::size_t j = 0; j < sc.n_vms; ++j) {
            traces.demand_mips[t][j] = base[t] * per_vm_peak * vm_scale[j];
        }
    }

    traces.solar_w = synthesize_solar_series(t_n, sc.forecast.slots_per_day, sc.solar_peak_w,
                                             0.0, seed + 1);

    traces.t_out_c.resize(t_n);
    const double mid = 0.5 * (sc.t_out_min_c + sc.t_out_max_c);
    const double amp = 0.5 * (sc.t_out_max_c - sc.t_out_min_c);
    const double day = static_cast<double>(sc.forecast.slots_per_day);
    for (std::size_t t = 0; t < t_n; ++t) {
        const double hour = static_cast<double>(t % sc.forecast.slots_per_day);
        traces.t_out_c[t] =
            mid + amp * std::cos(2.0 * std::numbers::pi * (hour - day * 15.0 / 24.0) / day);
    }
    return traces;
}

/// All PMs active, VMs placed round-robin, profiles cycling through the
/// example applications.
inline DatacenterState initial_state(const Scenario& sc) {
    DatacenterState state;
    state.slot_length_s = sc.slot_length_s;
    state.pms.resize(sc.n_pms);
    for (std::size_t i = 0; i < sc.n_pms; ++i) {
        state.pms[i] = {i, sc.pm_capacity_mips, sc.power.p_max_watts, sc.power.idle_ratio,
                        true};
    }
    state.vms.resize(sc.n_vms);
    const std::size_t n_profiles = default_app_profiles().size();
    for (std::size_t j = 0; j < sc.n_vms; ++j) {
        state.vms[j] = {j, 0.0, 0.0, j % sc.n_pms, j % n_profiles};
    }
    return state;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t slot) {
    std::uint64_t z = seed ^ (slot * 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// One slot's extra outputs beyond the ledger.
struct StepResult {
    DatacenterState state;
    SlotLedger ledger;
    std::size_t active_pms = 0;
    TransitionCounts transitions;
    double green_planning_w = 0.0;  // green supply the strategy planned against
};

/// Advances one slot: demand update, strategy plan, plan application,
/// allocation, delay penalties, thermal/power evaluation, ledger.
/// green_forecast_w is only consulted by JOP.
inline StepResult step(const DatacenterState& state, const Scenario& sc,
                       std::span<const double> slot_demand, double solar_w, double t_out_c,
                       double green_forecast_w, const EvalModels& models) {
    if (slot_demand.size() != state.vms.size()) {
        throw std::invalid_argument("step: demand row length " +
                                    std::to_string(slot_demand.size()) + " != VM count " +
                                    std::to_string(state.vms.size()));
    }

    DatacenterState current = state;
    for (std::size_t j = 0; j < current.vms.size(); ++j) {
        current.vms[j].demand_mips = slot_demand[j];
    }

    ActionPlan plan;
    double planning_green = 0.0;
    switch (sc.strategy) {
        case StrategyId::Dlb:
            plan = dlb_step(current, sc.thresholds);
            break;
        case StrategyId::Dvmc:
            plan = dvmc_step(current, sc.thresholds);
            break;
        case StrategyId::Jop: {
            GAConfig ga = sc.ga;
            ga.rng_seed = detail::mix_seed(sc.rng_seed,
                                           static_cast<std::uint64_t>(current.slot_index));
            planning_green = green_forecast_w;
            plan = jop_step(current, green_forecast_w, t_out_c, ga, models);
            break;
        }
    }

    PlanOutcome outcome = apply_plan(current, plan);
    DatacenterState next = std::move(outcome.state);

    const std::vector<double> allocations = allocate_capacity(next, next.placement());
    for (std::size_t j = 0; j < next.vms.size(); ++j) {
        next.vms[j].allocated_mips = allocations[j];
    }

    // Delay penalties: a migrated VM loses the migration window, and a VM
    // whose host just woke additionally loses the wakeup window.
    std::vector<double> revenue_scale(next.vms.size(), 1.0);
    const double mig_factor = 1.0 - sc.migration_delay_s / sc.slot_length_s;
    const double wake_factor = 1.0 - sc.wakeup_delay_s / sc.slot_length_s;
    for (std::size_t j : outcome.migrated_vms) revenue_scale[j] *= mig_factor;
    for (std::size_t j = 0; j < next.vms.size(); ++j) {
        for (std::size_t i : outcome.woken_pms) {
            if (next.vms[j].host == i) revenue_scale[j] *= wake_factor;
        }
    }

    std::vector<double> powers(next.pms.size(), 0.0);
    std::vector<double> loads(next.pms.size(), 0.0);
    for (std::size_t j = 0; j < next.vms.size(); ++j) {
        loads[next.vms[j].host] += next.vms[j].allocated_mips;
    }
    double it_total = 0.0;
    std::size_t active_count = 0;
    for (std::size_t i = 0; i < next.pms.size(); ++i) {
        if (next.pms[i].active) {
            ++active_count;
            const double theta = std::clamp(loads[i] / next.pms[i].capacity_mips, 0.0, 1.0);
            powers[i] = pm_power(theta, models.power);
        } else {
            powers[i] = models.power.sleep_watts;
        }
        it_total += powers[i];
    }

    const std::vector<double> t_in = inlet_temperatures(models.thermal, powers);
    const double hottest =
        t_in.empty() ? models.cooling.t_supply_c : *std::max_element(t_in.begin(), t_in.end());
    const double t_eff = models.cooling.adjust_supply
                             ? adjust_supply_temperature(hottest, models.cooling)
                             : models.cooling.t_supply_c;
    const double cop_value = cop(t_eff, t_out_c, models.cooling);
    const double p_dc = datacenter_power(it_total, cop_value);

    EnergySupply supply{solar_w * sc.slot_length_s / 3.6e6, true};
    StepResult result;
    result.ledger = net_revenue(current, next, allocations, models.profiles, p_dc,
                                p_dc - it_total, supply, models.costs, revenue_scale);
    next.slot_index = current.slot_index + 1;
    result.state = std::move(next);
    result.active_pms = active_count;
    result.transitions = outcome.counts;
    result.green_planning_w = planning_green;
    return result;
}

/// Folds step over every slot from the round-robin initial state.
inline RunReport run(const Scenario& sc, const TraceSet& traces) {
    if (traces.demand_mips.size() != sc.n_slots || traces.solar_w.size() != sc.n_slots ||
        traces.t_out_c.size() != sc.n_slots) {
        throw std::invalid_argument("run: trace length does not match n_slots=" +
                                    std::to_string(sc.n_slots));
    }

    EvalModels models{sc.power, sc.cooling, sc.thermal_model(), sc.costs,
                      default_app_profiles()};
    DatacenterState state = initial_state(sc);

    RunReport report;
    report.strategy = sc.strategy;
    report.seed = sc.rng_seed;
    report.forecast_warmup_slots =
        sc.strategy == StrategyId::Jop
            ? std::min<std::size_t>(forecast_warmup_slots(sc.forecast), sc.n_slots)
            : 0;

    double green_available_total = 0.0;
    double green_used_total = 0.0;

    for (std::size_t t = 0; t < sc.n_slots; ++t) {
        double forecast_w = traces.solar_w[t];
        if (sc.strategy == StrategyId::Jop && t >= forecast_warmup_slots(sc.forecast)) {
            forecast_w = forecast_slot(std::span<const double>(traces.solar_w).subspan(0, t),
                                       t, sc.forecast);
        }
        StepResult r = step(state, sc, traces.demand_mips[t], traces.solar_w[t],
                            traces.t_out_c[t], forecast_w, models);
        state = std::move(r.state);

        report.ledgers.push_back(r.ledger);
        report.accumulated_net_dollars += r.ledger.net_dollars;
        report.total_revenue_dollars += r.ledger.revenue_dollars;
        report.total_energy_cost_dollars += r.ledger.energy_cost_dollars;
        report.total_transition_cost_dollars +=
            r.ledger.wakeup_cost_dollars + r.ledger.migration_cost_dollars;
        report.active_pm_counts.push_back(r.active_pms);
        report.cooling_energy_kwh.push_back(r.ledger.cooling_power_w * sc.slot_length_s /
                                            3.6e6);
        const double available = traces.solar_w[t] * sc.slot_length_s / 3.6e6;
        report.green_available_kwh.push_back(available);
        report.solar_w.push_back(traces.solar_w[t]);
        report.green_forecast_w.push_back(sc.strategy == StrategyId::Jop ? forecast_w : 0.0);
        report.total_wakeups += r.transitions.wakeups;
        report.total_migrations += r.transitions.migrations;
        green_available_total += available;
        green_used_total += r.ledger.green_used_kwh;
    }
    report.green_utilization =
        green_available_total > 0.0 ? green_used_total / green_available_total : 0.0;
    return report;
}

}  // namespace greendc

#endif  // GREENDC_SIM_HPP
