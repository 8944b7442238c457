// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "greendc/model.hpp"
#include "test_helpers.hpp"

using namespace greendc;
using greendc::testing::make_state;
using greendc::testing::random_state;
using Catch::Matchers::WithinAbs;

TEST_CASE("utilization sums hosted allocations over capacity", "[model]") {
    auto state = make_state(2, 1500.0, {{600, 600, 0}, {300, 300, 0}});
    CHECK_THAT(utilization(state, 0), WithinAbs(0.6, 1e-12));
    CHECK(utilization(state, 1) == 0.0);

    SECTION("full load reaches exactly one") {
        auto full = make_state(1, 1500.0, {{1500, 1500, 0}});
        CHECK(utilization(full, 0) == 1.0);
    }
    SECTION("sleeping PM reports zero") {
        state.pms[0].active = false;
        CHECK(utilization(state, 0) == 0.0);
    }
    SECTION("invalid index throws") {
        CHECK_THROWS_AS(utilization(state, 2), std::out_of_range);
    }
    SECTION("monotone in any single allocation") {
        auto s2 = state;
        s2.vms[1].allocated_mips += 100.0;
        CHECK(utilization(s2, 0) >= utilization(state, 0));
    }
}

TEST_CASE("validate_placement reports broken constraints as data", "[model]") {
    SECTION("feasible state yields no violations") {
        auto state = make_state(2, 1500.0, {{600, 600, 0}, {300, 300, 1}});
        CHECK(validate_placement(state).empty());
    }
    SECTION("loaded sleeping PM is an overcommit") {
        auto state = make_state(2, 1500.0, {{100, 100, 0}});
        state.pms[0].active = false;
        auto violations = validate_placement(state);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == ConstraintKind::PmOverCommitted);
        CHECK(violations[0].pm == 0);
    }
    SECTION("allocation above demand is out of bounds") {
        auto state = make_state(1, 1500.0, {{150, 200, 0}});
        auto violations = validate_placement(state);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == ConstraintKind::AllocationOutOfBounds);
        CHECK(violations[0].vm == 0);
    }
    SECTION("host index out of range") {
        auto state = make_state(1, 1500.0, {{150, 150, 0}});
        state.vms[0].host = 7;
        auto violations = validate_placement(state);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == ConstraintKind::HostOutOfRange);
    }
}

TEST_CASE("allocate_capacity gives full demand or proportional shares", "[model]") {
    SECTION("underloaded PM serves everything") {
        auto state = make_state(1, 1500.0, {{500, 0, 0}, {400, 0, 0}});
        auto alloc = allocate_capacity(state, state.placement());
        CHECK(alloc == std::vector<double>{500.0, 400.0});
    }
    SECTION("oversubscription scales proportionally") {
        auto state = make_state(1, 1500.0, {{1000, 0, 0}, {1000, 0, 0}});
        auto alloc = allocate_capacity(state, state.placement());
        CHECK_THAT(alloc[0], WithinAbs(750.0, 1e-9));
        CHECK_THAT(alloc[1], WithinAbs(750.0, 1e-9));
    }
    SECTION("sleeping PM allocates nothing") {
        auto state = make_state(2, 1500.0, {{500, 0, 0}});
        state.pms[0].active = false;
        auto alloc = allocate_capacity(state, state.placement());
        CHECK(alloc[0] == 0.0);
    }
    SECTION("allocation always passes validation") {
        std::mt19937_64 rng(42);
        for (int rep = 0; rep < 50; ++rep) {
            auto state = random_state(rng, 4, 12);
            auto alloc = allocate_capacity(state, state.placement());
            for (std::size_t j = 0; j < alloc.size(); ++j) {
                state.vms[j].allocated_mips = alloc[j];
            }
            CAPTURE(rep);
            CHECK(validate_placement(state).empty());
        }
    }
}

TEST_CASE("apply_plan updates placement and counts transitions", "[model]") {
    SECTION("identity plan flips nothing") {
        auto state = make_state(2, 1500.0, {{500, 500, 0}, {400, 400, 1}});
        ActionPlan plan{state.placement(), {}, {}};
        auto outcome = apply_plan(state, plan);
        CHECK(outcome.counts == TransitionCounts{0, 0});
        CHECK(outcome.state.placement() == state.placement());
    }
    SECTION("wakeups and migrations are counted by set size") {
        auto state = make_state(4, 1500.0, {{500, 0, 0}, {400, 0, 0}, {300, 0, 1}});
        state.pms[2].active = false;
        state.pms[3].active = false;
        ActionPlan plan;
        plan.new_placement.hosts = {2, 3, 2};  // all three VMs move
        plan.wakeups = {2, 3};
        auto outcome = apply_plan(state, plan);
        CHECK(outcome.counts.wakeups == 2);
        CHECK(outcome.counts.migrations == 3);
        CHECK(outcome.migrated_vms == std::vector<std::size_t>{0, 1, 2});
        CHECK(outcome.woken_pms == std::vector<std::size_t>{2, 3});
    }
    SECTION("waking an already-active PM costs nothing") {
        auto state = make_state(2, 1500.0, {{500, 0, 0}});
        ActionPlan plan{state.placement(), {1}, {}};
        CHECK(apply_plan(state, plan).counts.wakeups == 0);
    }
    SECTION("placing on a sleeping PM that is not woken is a plan error") {
        auto state = make_state(2, 1500.0, {{500, 0, 0}});
        state.pms[1].active = false;
        ActionPlan plan;
        plan.new_placement.hosts = {1};
        CHECK_THROWS_AS(apply_plan(state, plan), PlanError);
    }
    SECTION("sleeping a PM that still hosts VMs is a plan error") {
        auto state = make_state(2, 1500.0, {{500, 0, 0}});
        ActionPlan plan{state.placement(), {}, {0}};
        CHECK_THROWS_AS(apply_plan(state, plan), PlanError);
    }
    SECTION("VM count is conserved and the inverse plan restores the placement") {
        std::mt19937_64 rng(7);
        for (int rep = 0; rep < 20; ++rep) {
            auto state = random_state(rng, 5, 10);
            std::uniform_int_distribution<std::size_t> host_dist(0, 4);
            ActionPlan plan;
            plan.new_placement = state.placement();
            for (auto& h : plan.new_placement.hosts) h = host_dist(rng);
            auto fwd = apply_plan(state, plan);
            REQUIRE(fwd.state.vms.size() == state.vms.size());

            ActionPlan inverse;
            inverse.new_placement = state.placement();
            auto back = apply_plan(fwd.state, inverse);
            CHECK(back.state.placement() == state.placement());
            CHECK(back.counts.migrations == fwd.counts.migrations);
        }
    }
}
