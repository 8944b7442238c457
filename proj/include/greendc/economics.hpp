// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_ECONOMICS_HPP
#define GREENDC_ECONOMICS_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "greendc/errors.hpp"
#include "greendc/model.hpp"

namespace greendc {

/// Piecewise-linear revenue in satisfaction percent: zero up to lower_pct,
/// linear ramp, saturated at u_max from upper_pct on.
struct RevenueFunction {
    double lower_pct = 50.0;
    double upper_pct = 90.0;
    double u_max_dollars = 100.0;

    bool operator==(const RevenueFunction&) const = default;
};

/// The three example application profiles (lower %, upper %, ceiling $).
inline std::vector<RevenueFunction> default_app_profiles() {
    return {{50.0, 90.0, 100.0}, {40.0, 60.0, 60.0}, {30.0, 70.0, 80.0}};
}

/// How the per-slot energy bill is derived from the power draw.
///  - BrownEnergyKwh: grid energy in kWh times the price (green is free).
///  - BrownPowerWatts: average grid power in watts times the price; the
///    objective-style billing where the power term enters at watt scale.
///  - AllPowerWatts: same watt scale, but green draw is billed too.
enum class PricingBasis { BrownEnergyKwh, BrownPowerWatts, AllPowerWatts };

struct CostModel {
    double energy_price = 0.08;      // $ per kWh or per average watt, per the basis
    double wakeup_cost = 0.00024;    // $ per PM activation
    double migration_cost = 0.00012; // $ per VM migration
    PricingBasis pricing = PricingBasis::BrownEnergyKwh;

    bool operator==(const CostModel&) const = default;
};

struct EnergySupply {
    double green_available_kwh = 0.0;
    bool grid_unlimited = true;

    bool operator==(const EnergySupply&) const = default;
};

/// One slot's money and energy accounting.
struct SlotLedger {
    double revenue_dollars = 0.0;
    double energy_cost_dollars = 0.0;
    double wakeup_cost_dollars = 0.0;
    double migration_cost_dollars = 0.0;
    double green_used_kwh = 0.0;
    double brown_used_kwh = 0.0;
    double total_power_w = 0.0;
    double cooling_power_w = 0.0;
    double net_dollars = 0.0;

    bool operator==(const SlotLedger&) const = default;
};

inline double revenue(double demand_mips, double allocated_mips, const RevenueFunction& fn) {
    if (allocated_mips < 0.0) {
        throw std::domain_error("revenue: negative allocation " + std::to_string(allocated_mips));
    }
    if (demand_mips <= 0.0) return fn.u_max_dollars;  // no demand is trivially satisfied
    if (allocated_mips > demand_mips * (1.0 + 1e-12) + 1e-9) {
        throw std::domain_error("revenue: allocation " + std::to_string(allocated_mips) +
                                " exceeds demand " + std::to_string(demand_mips));
    }
    const double s = 100.0 * allocated_mips / demand_mips;
    if (s <= fn.lower_pct) return 0.0;
    if (s >= fn.upper_pct) return fn.u_max_dollars;
    return fn.u_max_dollars * (s - fn.lower_pct) / (fn.upper_pct - fn.lower_pct);
}

inline double transition_costs(std::size_t n_wakeups, std::size_t n_migrations,
                               const CostModel& cm) {
    return static_cast<double>(n_wakeups) * cm.wakeup_cost +
           static_cast<double>(n_migrations) * cm.migration_cost;
}

struct EnergySplit {
    double cost_dollars = 0.0;
    double green_kwh = 0.0;
    double brown_kwh = 0.0;
};

/// Splits one slot's energy demand into green-first/brown-remainder and
/// prices it per the cost model's basis.
inline EnergySplit energy_cost_split(double p_dc_watts, double slot_length_s,
                                     const EnergySupply& supply, const CostModel& cm) {
    if (p_dc_watts < 0.0) {
        throw std::domain_error("energy_cost_split: negative power " +
                                std::to_string(p_dc_watts));
    }
    EnergySplit split;
    const double demand_kwh = p_dc_watts * slot_length_s / 3.6e6;
    split.green_kwh = std::min(demand_kwh, supply.green_available_kwh);
    split.brown_kwh = demand_kwh - split.green_kwh;
    switch (cm.pricing) {
        case PricingBasis::BrownEnergyKwh:
            split.cost_dollars = split.brown_kwh * cm.energy_price;
            break;
        case PricingBasis::BrownPowerWatts:
            split.cost_dollars = cm.energy_price * (split.brown_kwh * 3.6e6 / slot_length_s);
            break;
        case PricingBasis::AllPowerWatts:
            split.cost_dollars = cm.energy_price * p_dc_watts;
            break;
    }
    return split;
}

/// Net revenue of a committed slot: application revenue minus energy,
/// wakeup, and migration costs. Wakeups and migrations are derived from the
/// before/after states. revenue_scale, when provided, carries per-VM delay
/// penalty factors. Rejects states that break the hard constraints.
inline SlotLedger net_revenue(const DatacenterState& before, const DatacenterState& after,
                              std::span<const double> allocations,
                              std::span<const RevenueFunction> profiles,
                              double p_dc_watts, double cooling_power_w,
                              const EnergySupply& supply, const CostModel& cm,
                              std::span<const double> revenue_scale = {}) {
    const std::size_t m = after.vms.size();
    if (allocations.size() != m) {
        throw std::invalid_argument("net_revenue: allocation vector length " +
                                    std::to_string(allocations.size()) + " != VM count " +
                                    std::to_string(m));
    }
    DatacenterState committed = after;
    for (std::size_t j = 0; j < m; ++j) committed.vms[j].allocated_mips = allocations[j];
    if (auto violations = validate_placement(committed); !violations.empty()) {
        std::string msg = "net_revenue: state violates constraints:";
        for (const auto& v : violations) msg += "\n  " + v.detail;
        throw ConstraintError(msg);
    }

    SlotLedger ledger;
    for (std::size_t j = 0; j < m; ++j) {
        const auto& vm = committed.vms[j];
        if (vm.app_profile >= profiles.size()) {
            throw std::out_of_range("net_revenue: VM " + std::to_string(vm.id) +
                                    " references unknown revenue profile " +
                                    std::to_string(vm.app_profile));
        }
        if (vm.demand_mips <= 0.0) continue;  // idle applications earn nothing
        double r = revenue(vm.demand_mips, vm.allocated_mips, profiles[vm.app_profile]);
        if (!revenue_scale.empty()) r *= revenue_scale[j];
        ledger.revenue_dollars += r;
    }

    std::size_t n_wakeups = 0;
    for (std::size_t i = 0; i < after.pms.size() && i < before.pms.size(); ++i) {
        if (after.pms[i].active && !before.pms[i].active) ++n_wakeups;
    }
    std::size_t n_migrations = 0;
    for (std::size_t j = 0; j < m && j < before.vms.size(); ++j) {
        if (after.vms[j].host != before.vms[j].host) ++n_migrations;
    }

    const EnergySplit split = energy_cost_split(p_dc_watts, after.slot_length_s, supply, cm);
    ledger.energy_cost_dollars = split.cost_dollars;
    ledger.green_used_kwh = split.green_kwh;
    ledger.brown_used_kwh = split.brown_kwh;
    ledger.wakeup_cost_dollars = static_cast<double>(n_wakeups) * cm.wakeup_cost;
    ledger.migration_cost_dollars = static_cast<double>(n_migrations) * cm.migration_cost;
    ledger.total_power_w = p_dc_watts;
    ledger.cooling_power_w = cooling_power_w;
    ledger.net_dollars = ledger.revenue_dollars - ledger.energy_cost_dollars -
                         ledger.wakeup_cost_dollars - ledger.migration_cost_dollars;
    return ledger;
}

}  // namespace greendc

#endif  // GREENDC_ECONOMICS_HPP
