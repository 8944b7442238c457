// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal library walkthrough: build a small scenario, synthesize one day of
// traces, run all three strategies, and print their accumulated net revenue.

#include <cstdio>

#include "greendc/greendc.hpp"

int main() {
    using namespace greendc;

    Scenario sc;
    sc.n_pms = 8;
    sc.n_vms = 20;
    sc.ga.population_size = 60;
    sc.ga.generations = 80;
    sc.rng_seed = 7;

    const TraceSet traces = synthesize_traces(sc, sc.rng_seed);

    for (StrategyId s : {StrategyId::Dlb, StrategyId::Dvmc, StrategyId::Jop}) {
        Scenario variant = sc;
        variant.strategy = s;
        const RunReport report = run(variant, traces);
        std::printf("%-5s net $%10.2f  green %.2f  min active %zu\n", strategy_name(s),
                    report.accumulated_net_dollars, report.green_utilization,
                    *std::min_element(report.active_pm_counts.begin(),
                                      report.active_pm_counts.end()));
    }
    return 0;
}
