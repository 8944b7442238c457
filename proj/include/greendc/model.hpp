// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_MODEL_HPP
#define GREENDC_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "greendc/errors.hpp"

namespace greendc {

/// A server. Capacity is CPU only (MIPS); sleeping machines host nothing.
struct PhysicalMachine {
    std::size_t id = 0;
    double capacity_mips = 0.0;
    double p_max_watts = 0.0;
    double idle_ratio = 0.0;  // idle power as a fraction of p_max_watts, in [0,1]
    bool active = true;

    bool operator==(const PhysicalMachine&) const = default;
};

/// A migratable application container with time-varying CPU demand.
struct VirtualMachine {
    std::size_t id = 0;
    double demand_mips = 0.0;
    double allocated_mips = 0.0;
    std::size_t host = 0;         // index into the PM list
    std::size_t app_profile = 0;  // index into the scenario's revenue functions

    bool operator==(const VirtualMachine&) const = default;
};

/// Assignment vector: hosts[j] is the PM index serving VM j.
struct Placement {
    std::vector<std::size_t> hosts;

    std::size_t size() const noexcept { return hosts.size(); }
    bool operator==(const Placement&) const = default;
};

struct DatacenterState {
    std::vector<PhysicalMachine> pms;
    std::vector<VirtualMachine> vms;
    long slot_index = 0;
    double slot_length_s = 3600.0;

    Placement placement() const {
        Placement p;
        p.hosts.reserve(vms.size());
        for (const auto& vm : vms) p.hosts.push_back(vm.host);
        return p;
    }

    bool operator==(const DatacenterState&) const = default;
};

/// One slot's reconfiguration: target placement plus PM activity flips.
/// Every PM referenced by new_placement must be active already or listed in
/// wakeups; sleeps may only contain PMs with zero load under new_placement.
struct ActionPlan {
    Placement new_placement;
    std::set<std::size_t> wakeups;
    std::set<std::size_t> sleeps;

    bool operator==(const ActionPlan&) const = default;
};

enum class ConstraintKind {
    PmOverCommitted,       // hosted allocation exceeds capacity (or sleeping host loaded)
    AllocationOutOfBounds, // allocation negative or above demand
    HostOutOfRange,        // host index not a valid PM
};

struct Violation {
    ConstraintKind kind;
    std::size_t pm = static_cast<std::size_t>(-1);
    std::size_t vm = static_cast<std::size_t>(-1);
    std::string detail;
};

struct TransitionCounts {
    std::size_t wakeups = 0;
    std::size_t migrations = 0;

    bool operator==(const TransitionCounts&) const = default;
};

/// Result of applying a plan; lists who incurs delay penalties this slot.
struct PlanOutcome {
    DatacenterState state;
    TransitionCounts counts;
    std::vector<std::size_t> migrated_vms;
    std::vector<std::size_t> woken_pms;
};

namespace detail {

// Slack for floating-point load sums: proportional scaling can overshoot
// capacity by a few ulps.
inline bool exceeds(double lhs, double rhs) {
    return lhs > rhs + 1e-9 + 1e-12 * std::max(rhs, 1.0);
}

inline std::vector<double> pm_loads(const DatacenterState& state) {
    std::vector<double> loads(state.pms.size(), 0.0);
    for (const auto& vm : state.vms) {
        if (vm.host < loads.size()) loads[vm.host] += vm.allocated_mips;
    }
    return loads;
}

}  // namespace detail

/// Fraction of PM capacity currently allocated, clamped to [0,1].
/// Sleeping PMs report 0 regardless of (invalid) resident allocations.
inline double utilization(const DatacenterState& state, std::size_t pm_index) {
    if (pm_index >= state.pms.size()) {
        throw std::out_of_range("utilization: PM index " + std::to_string(pm_index) +
                                " out of range (N=" + std::to_string(state.pms.size()) + ")");
    }
    const auto& pm = state.pms[pm_index];
    if (!pm.active) return 0.0;
    double load = 0.0;
    for (const auto& vm : state.vms) {
        if (vm.host == pm_index) load += vm.allocated_mips;
    }
    return std::clamp(load / pm.capacity_mips, 0.0, 1.0);
}

/// Checks the hard constraints of a committed state. Violations are data,
/// not errors: an empty result means the state is feasible.
inline std::vector<Violation> validate_placement(const DatacenterState& state) {
    std::vector<Violation> out;
    const std::size_t n = state.pms.size();

    std::vector<double> loads(n, 0.0);
    for (const auto& vm : state.vms) {
        if (vm.host >= n) {
            out.push_back({ConstraintKind::HostOutOfRange, vm.host, vm.id,
                           "VM " + std::to_string(vm.id) + " assigned to nonexistent PM " +
                               std::to_string(vm.host)});
            continue;
        }
        loads[vm.host] += vm.allocated_mips;
        if (vm.allocated_mips < -1e-12 ||
            detail::exceeds(vm.allocated_mips, vm.demand_mips)) {
            out.push_back({ConstraintKind::AllocationOutOfBounds, vm.host, vm.id,
                           "VM " + std::to_string(vm.id) + " allocation " +
                               std::to_string(vm.allocated_mips) + " outside [0, demand=" +
                               std::to_string(vm.demand_mips) + "]"});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double cap = state.pms[i].active ? state.pms[i].capacity_mips : 0.0;
        if (detail::exceeds(loads[i], cap)) {
            out.push_back({ConstraintKind::PmOverCommitted, i, static_cast<std::size_t>(-1),
                           "PM " + std::to_string(i) + " hosts " + std::to_string(loads[i]) +
                               " MIPS against usable capacity " + std::to_string(cap)});
        }
    }
    return out;
}

/// Computes per-VM allocations for a candidate placement: full demand when it
/// fits, proportional-fair scaling on oversubscribed PMs, zero on sleeping PMs.
inline std::vector<double> allocate_capacity(const DatacenterState& state,
                                             const Placement& placement) {
    const std::size_t n = state.pms.size();
    const std::size_t m = state.vms.size();
    if (placement.size() != m) {
        throw std::invalid_argument("allocate_capacity: placement length " +
                                    std::to_string(placement.size()) + " != VM count " +
                                    std::to_string(m));
    }
    std::vector<double> demand_sum(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t host = placement.hosts[j];
        if (host >= n) {
            throw std::out_of_range("allocate_capacity: VM " + std::to_string(j) +
                                    " placed on nonexistent PM " + std::to_string(host));
        }
        demand_sum[host] += state.vms[j].demand_mips;
    }
    std::vector<double> scale(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!state.pms[i].active) {
            scale[i] = 0.0;
        } else if (demand_sum[i] > state.pms[i].capacity_mips) {
            scale[i] = state.pms[i].capacity_mips / demand_sum[i];
        }
    }
    std::vector<double> alloc(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        alloc[j] = state.vms[j].demand_mips * scale[placement.hosts[j]];
    }
    return alloc;
}

/// Applies a plan, returning the updated state plus the transition counts
/// that feed wakeup/migration costs and delay penalties.
inline PlanOutcome apply_plan(const DatacenterState& state, const ActionPlan& plan) {
    const std::size_t n = state.pms.size();
    const std::size_t m = state.vms.size();
    if (plan.new_placement.size() != m) {
        throw PlanError("plan placement length " + std::to_string(plan.new_placement.size()) +
                        " != VM count " + std::to_string(m));
    }
    for (std::size_t i : plan.wakeups) {
        if (i >= n) throw PlanError("plan wakes nonexistent PM " + std::to_string(i));
        if (plan.sleeps.count(i)) {
            throw PlanError("plan both wakes and sleeps PM " + std::to_string(i));
        }
    }
    for (std::size_t i : plan.sleeps) {
        if (i >= n) throw PlanError("plan sleeps nonexistent PM " + std::to_string(i));
    }

    std::vector<double> new_load(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t host = plan.new_placement.hosts[j];
        if (host >= n) {
            throw PlanError("plan places VM " + std::to_string(j) + " on nonexistent PM " +
                            std::to_string(host));
        }
        if (!state.pms[host].active && !plan.wakeups.count(host)) {
            throw PlanError("plan places VM " + std::to_string(j) + " on PM " +
                            std::to_string(host) + " which is neither active nor woken");
        }
        new_load[host] += state.vms[j].demand_mips;
    }
    for (std::size_t i : plan.sleeps) {
        bool hosts_vm = false;
        for (std::size_t j = 0; j < m; ++j) {
            if (plan.new_placement.hosts[j] == i) { hosts_vm = true; break; }
        }
        if (hosts_vm) {
            throw PlanError("plan sleeps PM " + std::to_string(i) +
                            " which still hosts VMs under the new placement");
        }
    }

    PlanOutcome out;
    out.state = state;
    for (std::size_t i : plan.wakeups) {
        if (!out.state.pms[i].active) {
            out.state.pms[i].active = true;
            out.counts.wakeups += 1;
            out.woken_pms.push_back(i);
        }
    }
    for (std::size_t i : plan.sleeps) out.state.pms[i].active = false;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t host = plan.new_placement.hosts[j];
        if (out.state.vms[j].host != host) {
            out.counts.migrations += 1;
            out.migrated_vms.push_back(j);
            out.state.vms[j].host = host;
        }
    }
    return out;
}

}  // namespace greendc

#endif  // GREENDC_MODEL_HPP
