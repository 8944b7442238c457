// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_TEST_HELPERS_HPP
#define GREENDC_TEST_HELPERS_HPP

#include <cstddef>
#include <random>
#include <vector>

#include "greendc/model.hpp"

namespace greendc::testing {

/// State with uniform-capacity PMs and VMs given as (demand, allocated, host).
struct VmSpec {
    double demand;
    double allocated;
    std::size_t host;
    std::size_t profile = 0;
};

inline DatacenterState make_state(std::size_t n_pms, double capacity,
                                  const std::vector<VmSpec>& vms, double slot_length_s = 3600.0) {
    DatacenterState state;
    state.slot_length_s = slot_length_s;
    state.pms.resize(n_pms);
    for (std::size_t i = 0; i < n_pms; ++i) {
        state.pms[i] = {i, capacity, 259.0, 0.66, true};
    }
    state.vms.resize(vms.size());
    for (std::size_t j = 0; j < vms.size(); ++j) {
        state.vms[j] = {j, vms[j].demand, vms[j].allocated, vms[j].host, vms[j].profile};
    }
    return state;
}

inline DatacenterState random_state(std::mt19937_64& rng, std::size_t n_pms,
                                    std::size_t n_vms, double capacity = 1500.0) {
    std::uniform_real_distribution<double> demand_dist(10.0, capacity * 0.6);
    std::uniform_int_distribution<std::size_t> host_dist(0, n_pms - 1);
    std::vector<VmSpec> vms;
    vms.reserve(n_vms);
    for (std::size_t j = 0; j < n_vms; ++j) {
        const double d = demand_dist(rng);
        vms.push_back({d, 0.0, host_dist(rng), j % 3});
    }
    return make_state(n_pms, capacity, vms);
}

}  // namespace greendc::testing

#endif  // GREENDC_TEST_HELPERS_HPP
