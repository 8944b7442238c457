// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_STRATEGIES_HPP
#define GREENDC_STRATEGIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "greendc/economics.hpp"
#include "greendc/errors.hpp"
#include "greendc/model.hpp"
#include "greendc/power.hpp"

namespace greendc {

struct ThresholdConfig {
    double upper_util = 0.85;  // overload trigger (DLB and DVMC)
    double lower_util = 0.30;  // consolidation trigger (DVMC)

    bool operator==(const ThresholdConfig&) const = default;
};

struct GAConfig {
    std::size_t population_size = 100;
    std::size_t elite_count = 20;
    double mutation_prob_per_gene = 0.05;
    std::size_t generations = 200;
    std::uint64_t rng_seed = 0;

    bool operator==(const GAConfig&) const = default;
};

struct Individual {
    Placement genome;
    double fitness = 0.0;
};

struct GaResult {
    Individual best;
    std::vector<double> best_history;  // best-ever fitness after init and each generation
};

namespace detail {

inline double rng_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline std::size_t rng_below(std::mt19937_64& g, std::size_t n) {
    return n ? static_cast<std::size_t>(g() % n) : 0;
}

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

}  // namespace detail

/// Fitness-proportional selection probabilities over already-positive values.
inline std::vector<double> roulette_probabilities(std::span<const double> positive_fitnesses) {
    if (positive_fitnesses.empty()) {
        throw std::domain_error("roulette_probabilities: empty fitness list");
    }
    double sum = 0.0;
    for (double f : positive_fitnesses) {
        if (!(f > 0.0)) {
            throw std::domain_error("roulette_probabilities: nonpositive fitness " +
                                    std::to_string(f));
        }
        sum += f;
    }
    std::vector<double> p(positive_fitnesses.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = positive_fitnesses[i] / sum;
    return p;
}

/// Selection probabilities for raw (possibly negative) fitness: shift by
/// (1 - min) so every value is at least 1, then normalize. Preserves ranking
/// and degrades to uniform sampling when all fitnesses are equal.
inline std::vector<double> selection_probabilities(std::span<const double> fitnesses) {
    if (fitnesses.empty()) {
        throw std::domain_error("selection_probabilities: empty fitness list");
    }
    const double mn = *std::min_element(fitnesses.begin(), fitnesses.end());
    std::vector<double> shifted(fitnesses.size());
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = fitnesses[i] - mn + 1.0;
    return roulette_probabilities(shifted);
}

/// Parent pool: the best-ever individuals (the archive) carried unchanged,
/// the remaining slots resampled from the current population in proportion
/// to shifted fitness.
inline std::vector<Individual> ga_select(const std::vector<Individual>& population,
                                         const std::vector<Individual>& elite_archive,
                                         const GAConfig& cfg, std::mt19937_64& rng) {
    if (population.empty()) {
        throw std::domain_error("ga_select: empty population");
    }
    std::vector<Individual> pool;
    pool.reserve(cfg.population_size);
    const std::size_t n_elite = std::min(cfg.elite_count, elite_archive.size());
    for (std::size_t i = 0; i < n_elite && pool.size() < cfg.population_size; ++i) {
        pool.push_back(elite_archive[i]);
    }

    std::vector<double> fitnesses(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) fitnesses[i] = population[i].fitness;
    const std::vector<double> probs = selection_probabilities(fitnesses);
    std::vector<double> cum(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cum.begin());

    while (pool.size() < cfg.population_size) {
        const double u = detail::rng_unit(rng);
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cum.begin());
        if (idx >= population.size()) idx = population.size() - 1;
        pool.push_back(population[idx]);
    }
    return pool;
}

/// Single-point crossover: tails beyond the cut are swapped.
inline std::pair<Placement, Placement> ga_crossover(const Placement& x1, const Placement& x2,
                                                    std::size_t cut_k) {
    if (x1.size() != x2.size()) {
        throw std::invalid_argument("ga_crossover: genome lengths differ (" +
                                    std::to_string(x1.size()) + " vs " +
                                    std::to_string(x2.size()) + ")");
    }
    if (cut_k < 1 || cut_k >= x1.size()) {
        throw std::domain_error("ga_crossover: cut " + std::to_string(cut_k) +
                                " outside [1, " + std::to_string(x1.size()) + ")");
    }
    Placement c1 = x1;
    Placement c2 = x2;
    for (std::size_t g = cut_k; g < x1.size(); ++g) {
        c1.hosts[g] = x2.hosts[g];
        c2.hosts[g] = x1.hosts[g];
    }
    return {std::move(c1), std::move(c2)};
}

/// Each gene mutates independently to a uniformly random *different* PM.
/// A single-PM datacenter has no different value, so mutation is a no-op.
inline Placement ga_mutate(const Placement& genome, std::size_t n_pms, double prob,
                           std::mt19937_64& rng) {
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw std::domain_error("ga_mutate: probability " + std::to_string(prob) +
                                " outside [0,1]");
    }
    Placement out = genome;
    if (n_pms < 2) return out;
    for (std::size_t g = 0; g < out.size(); ++g) {
        if (detail::rng_unit(rng) < prob) {
            const std::size_t r = detail::rng_below(rng, n_pms - 1);
            out.hosts[g] = (r >= out.hosts[g]) ? r + 1 : r;
        }
    }
    return out;
}

namespace detail {

// Keeps the archive sorted by fitness (descending, earlier entries win ties)
// and capped at `cap`. Exact duplicates of an archived individual are skipped.
inline void archive_absorb(std::vector<Individual>& archive, const Individual& ind,
                           std::size_t cap) {
    auto pos = std::find_if(archive.begin(), archive.end(),
                            [&](const Individual& e) { return e.fitness < ind.fitness; });
    for (auto it = archive.begin(); it != pos; ++it) {
        if (it->fitness == ind.fitness && it->genome == ind.genome) return;
    }
    if (archive.size() >= cap && pos == archive.end()) return;
    archive.insert(pos, ind);
    if (archive.size() > cap) archive.pop_back();
}

}  // namespace detail

/// Generational GA over placement vectors. The search starts from the live
/// placement: it is individual zero, and the rest of the initial population
/// randomizes a random subset of its genes. Elites persist across
/// generations; the best-ever individual is returned. Deterministic for a
/// fixed seed (random draws happen in one fixed serial order).
template <typename FitnessFn>
GaResult ga_optimize(const Placement& current, std::size_t n_pms, FitnessFn&& fitness,
                     const GAConfig& cfg) {
    if (cfg.population_size < 1) {
        throw std::invalid_argument("ga_optimize: population_size must be >= 1");
    }
    if (cfg.elite_count < 1 || cfg.elite_count > cfg.population_size) {
        throw std::invalid_argument("ga_optimize: elite_count must be in [1, population_size]");
    }
    if (cfg.generations < 1) {
        throw std::invalid_argument("ga_optimize: generations must be >= 1");
    }
    std::mt19937_64 rng(cfg.rng_seed);
    const std::size_t m = current.size();

    std::vector<Individual> pop;
    pop.reserve(cfg.population_size);
    pop.push_back({current, 0.0});
    while (pop.size() < cfg.population_size) {
        Individual ind{current, 0.0};
        if (n_pms >= 1 && m >= 1) {
            const double frac = detail::rng_unit(rng);
            for (std::size_t g = 0; g < m; ++g) {
                if (detail::rng_unit(rng) < frac) {
                    ind.genome.hosts[g] = detail::rng_below(rng, n_pms);
                }
            }
        }
        pop.push_back(std::move(ind));
    }
    for (auto& ind : pop) ind.fitness = fitness(ind.genome);

    std::vector<Individual> archive;
    Individual best = pop.front();
    for (const auto& ind : pop) {
        if (ind.fitness > best.fitness) best = ind;
        detail::archive_absorb(archive, ind, cfg.elite_count);
    }

    GaResult result;
    result.best_history.reserve(cfg.generations + 1);
    result.best_history.push_back(best.fitness);

    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        std::vector<Individual> pool = ga_select(pop, archive, cfg, rng);
        const std::size_t n_elite = std::min(cfg.elite_count, archive.size());

        std::vector<Individual> next(pool.begin(),
                                     pool.begin() + static_cast<long>(n_elite));
        next.reserve(cfg.population_size);
        std::size_t idx = n_elite;
        while (next.size() < cfg.population_size) {
            const Individual& p1 = pool[idx];
            const Individual& p2 = pool[(idx + 1 < pool.size()) ? idx + 1 : n_elite];
            idx = (idx + 2 <= pool.size()) ? idx + 2 : n_elite;

            Placement c1 = p1.genome;
            Placement c2 = p2.genome;
            if (m >= 2) {
                const std::size_t cut = 1 + detail::rng_below(rng, m - 1);
                std::tie(c1, c2) = ga_crossover(p1.genome, p2.genome, cut);
            }
            c1 = ga_mutate(c1, n_pms, cfg.mutation_prob_per_gene, rng);
            c2 = ga_mutate(c2, n_pms, cfg.mutation_prob_per_gene, rng);

            Individual i1{std::move(c1), 0.0};
            i1.fitness = fitness(i1.genome);
            next.push_back(std::move(i1));
            if (next.size() < cfg.population_size) {
                Individual i2{std::move(c2), 0.0};
                i2.fitness = fitness(i2.genome);
                next.push_back(std::move(i2));
            }
        }
        for (std::size_t i = n_elite; i < next.size(); ++i) {
            if (next[i].fitness > best.fitness) best = next[i];
            detail::archive_absorb(archive, next[i], cfg.elite_count);
        }
        result.best_history.push_back(best.fitness);
        pop = std::move(next);
    }
    result.best = std::move(best);
    return result;
}

/// Exhaustive search over every placement in [0,N)^M. Enumeration is
/// lexicographic and only strict improvements are kept, so ties resolve to
/// the lexicographically smallest genome.
template <typename FitnessFn>
Individual brute_force_optimum(const DatacenterState& state, FitnessFn&& fitness,
                               double max_placements = 1e6) {
    const std::size_t n = state.pms.size();
    const std::size_t m = state.vms.size();
    if (n == 0) throw std::domain_error("brute_force_optimum: no PMs");
    if (std::pow(static_cast<double>(n), static_cast<double>(m)) > max_placements) {
        throw SizeError("brute_force_optimum: " + std::to_string(n) + "^" +
                        std::to_string(m) + " placements exceed the bound of " +
                        std::to_string(max_placements));
    }
    Placement cur;
    cur.hosts.assign(m, 0);
    Individual best{cur, fitness(cur)};
    auto increment = [&]() -> bool {
        for (std::size_t pos = m; pos-- > 0;) {
            if (++cur.hosts[pos] < n) return true;
            cur.hosts[pos] = 0;
        }
        return false;
    };
    while (increment()) {
        const double f = fitness(cur);
        if (f > best.fitness) best = {cur, f};
    }
    return best;
}

// ---------------------------------------------------------------------------
// Heuristic strategies
// ---------------------------------------------------------------------------

namespace detail {

struct PlanningView {
    std::vector<double> load;       // demanded MIPS per PM under the working placement
    std::vector<char> active;
    std::vector<double> capacity;

    explicit PlanningView(const DatacenterState& state, const Placement& placement)
        : load(state.pms.size(), 0.0),
          active(state.pms.size(), 0),
          capacity(state.pms.size(), 0.0) {
        for (std::size_t i = 0; i < state.pms.size(); ++i) {
            active[i] = state.pms[i].active ? 1 : 0;
            capacity[i] = state.pms[i].capacity_mips;
        }
        for (std::size_t j = 0; j < state.vms.size(); ++j) {
            load[placement.hosts[j]] += state.vms[j].demand_mips;
        }
    }

    double util(std::size_t i) const { return active[i] ? load[i] / capacity[i] : 0.0; }
    bool fits(std::size_t i, double demand, double upper) const {
        return active[i] && (load[i] + demand) / capacity[i] <= upper;
    }
};

inline std::vector<std::size_t> residents_by_demand(const DatacenterState& state,
                                                    const Placement& placement,
                                                    std::size_t pm) {
    std::vector<std::size_t> vms;
    for (std::size_t j = 0; j < placement.size(); ++j) {
        if (placement.hosts[j] == pm) vms.push_back(j);
    }
    std::stable_sort(vms.begin(), vms.end(), [&](std::size_t a, std::size_t b) {
        return state.vms[a].demand_mips > state.vms[b].demand_mips;
    });
    return vms;
}

}  // namespace detail

/// Load balancing: every PM stays active; PMs above the upper threshold shed
/// their largest VMs onto the least-utilized active PM with room.
inline ActionPlan dlb_step(const DatacenterState& state, const ThresholdConfig& th) {
    ActionPlan plan;
    plan.new_placement = state.placement();
    detail::PlanningView view(state, plan.new_placement);
    const std::size_t n = state.pms.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return view.util(a) > view.util(b);
    });

    for (std::size_t src : order) {
        if (!view.active[src] || view.util(src) <= th.upper_util) continue;
        for (std::size_t j : detail::residents_by_demand(state, plan.new_placement, src)) {
            if (view.util(src) <= th.upper_util) break;
            const double d = state.vms[j].demand_mips;
            std::size_t dest = detail::npos;
            double dest_util = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                if (i == src || !view.fits(i, d, th.upper_util)) continue;
                if (view.util(i) < dest_util) {
                    dest = i;
                    dest_util = view.util(i);
                }
            }
            if (dest == detail::npos) continue;
            view.load[src] -= d;
            view.load[dest] += d;
            plan.new_placement.hosts[j] = dest;
        }
    }
    return plan;  // never wakes or sleeps anything
}

/// Consolidation: overloaded PMs spill onto the fullest active PM that still
/// fits (waking a sleeping PM only when nothing active does); PMs under the
/// lower threshold are vacated whole, and every PM left without VMs sleeps.
inline ActionPlan dvmc_step(const DatacenterState& state, const ThresholdConfig& th) {
    ActionPlan plan;
    plan.new_placement = state.placement();
    detail::PlanningView view(state, plan.new_placement);
    const std::size_t n = state.pms.size();

    auto pick_fullest_fit = [&](std::size_t src, double demand) -> std::size_t {
        std::size_t dest = detail::npos;
        double dest_util = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == src || !view.fits(i, demand, th.upper_util)) continue;
            if (view.util(i) > dest_util) {
                dest = i;
                dest_util = view.util(i);
            }
        }
        return dest;
    };

    // Overload relief.
    for (bool progressed = true; progressed;) {
        progressed = false;
        std::size_t src = detail::npos;
        double worst = th.upper_util;
        for (std::size_t i = 0; i < n; ++i) {
            if (view.active[i] && view.util(i) > worst) {
                src = i;
                worst = view.util(i);
            }
        }
        if (src == detail::npos) break;
        for (std::size_t j : detail::residents_by_demand(state, plan.new_placement, src)) {
            if (view.util(src) <= th.upper_util) break;
            const double d = state.vms[j].demand_mips;
            std::size_t dest = pick_fullest_fit(src, d);
            if (dest == detail::npos) {
                // Wake the first sleeping PM the VM fits on, preferring one
                // that keeps it under the upper threshold.
                std::size_t fallback = detail::npos;
                for (std::size_t i = 0; i < n && dest == detail::npos; ++i) {
                    if (view.active[i]) continue;
                    if (d <= view.capacity[i] * th.upper_util) {
                        dest = i;
                    } else if (d <= view.capacity[i] && fallback == detail::npos) {
                        fallback = i;
                    }
                }
                if (dest == detail::npos) dest = fallback;
                if (dest != detail::npos) {
                    view.active[dest] = 1;
                    plan.wakeups.insert(dest);
                }
            }
            if (dest == detail::npos) continue;
            view.load[src] -= d;
            view.load[dest] += d;
            plan.new_placement.hosts[j] = dest;
            progressed = true;
        }
    }

    // Consolidation: vacate under-loaded PMs all-or-nothing, emptiest first.
    std::vector<std::size_t> sources;
    for (std::size_t i = 0; i < n; ++i) {
        if (view.active[i] && !plan.wakeups.count(i) && view.util(i) < th.lower_util) {
            sources.push_back(i);
        }
    }
    std::stable_sort(sources.begin(), sources.end(), [&](std::size_t a, std::size_t b) {
        return view.util(a) < view.util(b);
    });
    for (std::size_t src : sources) {
        if (view.util(src) >= th.lower_util) continue;  // filled up meanwhile
        const auto residents = detail::residents_by_demand(state, plan.new_placement, src);
        std::vector<double> load_copy = view.load;
        std::vector<std::pair<std::size_t, std::size_t>> moves;
        bool ok = true;
        for (std::size_t j : residents) {
            const double d = state.vms[j].demand_mips;
            std::size_t dest = detail::npos;
            double dest_util = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == src || !view.active[i]) continue;
                if ((load_copy[i] + d) / view.capacity[i] > th.upper_util) continue;
                const double u = load_copy[i] / view.capacity[i];
                if (u > dest_util) {
                    dest = i;
                    dest_util = u;
                }
            }
            if (dest == detail::npos) {
                ok = false;
                break;
            }
            load_copy[dest] += d;
            moves.emplace_back(j, dest);
        }
        if (!ok) continue;
        for (const auto& [j, dest] : moves) {
            plan.new_placement.hosts[j] = dest;
            view.load[dest] += state.vms[j].demand_mips;
        }
        view.load[src] = 0.0;
    }

    // Anything active and empty goes to sleep; wakeups that ended empty are dropped.
    std::vector<std::size_t> vm_count(n, 0);
    for (std::size_t j = 0; j < plan.new_placement.size(); ++j) {
        vm_count[plan.new_placement.hosts[j]] += 1;
    }
    for (auto it = plan.wakeups.begin(); it != plan.wakeups.end();) {
        it = (vm_count[*it] == 0) ? plan.wakeups.erase(it) : std::next(it);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (state.pms[i].active && vm_count[i] == 0) plan.sleeps.insert(i);
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Joint optimal planning
// ---------------------------------------------------------------------------

/// Everything a candidate-placement evaluation needs besides the state.
struct EvalModels {
    PowerModel power;
    CoolingModel cooling;
    ThermalModel thermal;
    CostModel costs;
    std::vector<RevenueFunction> profiles;
};

/// Net objective value of a candidate placement for one slot: a PM is taken
/// as active iff it hosts a VM, allocations are proportional-fair, energy is
/// billed against the forecast green supply, and wakeup/migration costs are
/// charged relative to the live state.
inline double placement_net_value(const DatacenterState& state, const Placement& candidate,
                                  double green_forecast_w, double t_out_c,
                                  const EvalModels& models) {
    const std::size_t n = state.pms.size();
    const std::size_t m = state.vms.size();
    if (candidate.size() != m) {
        throw std::invalid_argument("placement_net_value: genome length " +
                                    std::to_string(candidate.size()) + " != VM count " +
                                    std::to_string(m));
    }

    std::vector<double> demand_sum(n, 0.0);
    std::vector<std::size_t> vm_count(n, 0);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t host = candidate.hosts[j];
        if (host >= n) {
            throw std::out_of_range("placement_net_value: VM " + std::to_string(j) +
                                    " placed on nonexistent PM " + std::to_string(host));
        }
        demand_sum[host] += state.vms[j].demand_mips;
        vm_count[host] += 1;
    }

    std::vector<double> powers(n, 0.0);
    double it_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (vm_count[i] > 0) {
            const double theta =
                std::min(1.0, demand_sum[i] / state.pms[i].capacity_mips);
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

    double total_revenue = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const auto& vm = state.vms[j];
        if (vm.demand_mips <= 0.0) continue;  // idle applications earn nothing
        const std::size_t host = candidate.hosts[j];
        const double scale =
            demand_sum[host] > state.pms[host].capacity_mips
                ? state.pms[host].capacity_mips / demand_sum[host]
                : 1.0;
        total_revenue += revenue(vm.demand_mips, vm.demand_mips * scale,
                                 models.profiles[vm.app_profile]);
    }

    EnergySupply supply{green_forecast_w * state.slot_length_s / 3.6e6, true};
    const EnergySplit split =
        energy_cost_split(p_dc, state.slot_length_s, supply, models.costs);

    std::size_t wakeups = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (vm_count[i] > 0 && !state.pms[i].active) ++wakeups;
    }
    std::size_t migrations = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (candidate.hosts[j] != state.vms[j].host) ++migrations;
    }

    return total_revenue - split.cost_dollars -
           transition_costs(wakeups, migrations, models.costs);
}

/// Converts a target placement into a plan: sleeping PMs that gain VMs are
/// woken, active PMs left empty are slept.
inline ActionPlan plan_from_placement(const DatacenterState& state, const Placement& target) {
    ActionPlan plan;
    plan.new_placement = target;
    std::vector<std::size_t> vm_count(state.pms.size(), 0);
    for (std::size_t j = 0; j < target.size(); ++j) vm_count[target.hosts[j]] += 1;
    for (std::size_t i = 0; i < state.pms.size(); ++i) {
        if (vm_count[i] > 0 && !state.pms[i].active) plan.wakeups.insert(i);
        if (vm_count[i] == 0 && state.pms[i].active) plan.sleeps.insert(i);
    }
    return plan;
}

/// GA search for the placement maximizing the slot's net value against the
/// forecast green supply.
inline ActionPlan jop_step(const DatacenterState& state, double green_forecast_w,
                           double t_out_c, const GAConfig& ga, const EvalModels& models) {
    auto fitness = [&](const Placement& x) {
        return placement_net_value(state, x, green_forecast_w, t_out_c, models);
    };
    const GaResult result = ga_optimize(state.placement(), state.pms.size(), fitness, ga);
    return plan_from_placement(state, result.best.genome);
}

}  // namespace greendc

#endif  // GREENDC_STRATEGIES_HPP
