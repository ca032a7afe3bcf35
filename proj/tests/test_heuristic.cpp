#include <gtest/gtest.h>

#include <numeric>

#include "ccdarp/generator.hpp"
#include "ccdarp/heuristic.hpp"
#include "ccdarp/oracle.hpp"
#include "test_support.hpp"

namespace ccdarp {
namespace {

using testing::Trip;

Scenario permissive(const Instance& inst) { return Scenario(inst, testing::permissive_model(inst)); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Solution solution_with(const Scenario& sc, const std::vector<std::vector<int>>& routes) {
    Solution sol = empty_solution(sc);
    for (std::size_t k = 0; k < routes.size(); ++k) {
        const ScheduleResult res = build_schedule(static_cast<int>(k), routes[k], sc);
        EXPECT_TRUE(std::holds_alternative<Route>(res)) << "route " << k;
        apply_route(sol, std::get<Route>(res), sc);
    }
    return sol;
}

// Four congruent requests, rotated by quarter turns around the depot.
Instance pinwheel() {
    std::vector<Trip> trips;
    const double c[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& v : c) {
        Trip t;
        t.pickup = {5 * v[0], 5 * v[1]};
        t.dropoff = {5 * v[0] - 3 * v[1], 5 * v[1] + 3 * v[0]};
        trips.push_back(t);
    }
    return testing::build_instance(trips, {2, 3, 480, 30});
}

// -----------------------------------------------------------------------------
// Ordering indices
// -----------------------------------------------------------------------------

TEST(GeneralIndex, FormulaAndEndpoints) {
    EXPECT_DOUBLE_EQ(general_index(0.2, 0.05, 0.1), 0.125);
    EXPECT_DOUBLE_EQ(general_index(0.2, 0.05, 0.0), 0.05);
    EXPECT_DOUBLE_EQ(general_index(0.2, 0.05, 1.0), 0.8);
}

TEST(Indices, SymmetricInstance) {
    const Instance inst = pinwheel();
    for (double d : decentralisation_indices(inst)) EXPECT_NEAR(d, 0.25, 1e-12);
    for (double t : travel_time_indices(inst)) EXPECT_NEAR(t, 0.25, 1e-12);
}

TEST(Indices, NormalisedOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        GeneratorConfig cfg;
        cfg.requests = 2 + static_cast<int>(seed % 9);
        cfg.seed = seed;
        const Instance inst = generate_instance(cfg);
        EXPECT_NEAR(sum(decentralisation_indices(inst)), 1.0, 1e-12);
        EXPECT_NEAR(sum(travel_time_indices(inst)), 1.0, 1e-12);
    }
}

TEST(Indices, HandMatrix) {
    Trip t;
    InstanceData data = testing::build_instance({t, t}, {1, 3, 480, 30}).data();
    // t(i, j) = i + j off the diagonal over nodes 0..5.
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) data.travel_time(i, j) = i == j ? 0.0 : static_cast<double>(i + j);
    }
    const Instance inst(std::move(data));
    // Request 1 (nodes 1, 3) over j in {0, 2, 4, 5}: (1+3+5+6) + (3+5+7+8) = 38.
    // Request 2 (nodes 2, 4) over j in {0, 1, 3, 5}: (2+3+5+7) + (4+5+7+9) = 42.
    EXPECT_DOUBLE_EQ(decentralisation_index(1, inst), 38.0 / 80.0);
    EXPECT_DOUBLE_EQ(decentralisation_index(2, inst), 42.0 / 80.0);
    EXPECT_DOUBLE_EQ(travel_time_index(1, inst), 4.0 / 10.0);
    EXPECT_DOUBLE_EQ(travel_time_index(2, inst), 6.0 / 10.0);
}

TEST(Indices, ZeroDirectTrip) {
    Trip a;
    a.pickup = {2, 2};
    a.dropoff = {2, 2};
    Trip b;
    b.dropoff = {4, 0};
    const Instance inst = testing::build_instance({a, b}, {1, 3, 480, 30});
    EXPECT_EQ(travel_time_index(1, inst), 0.0);
    EXPECT_EQ(travel_time_index(2, inst), 1.0);
}

TEST(Indices, AllDistancesZero) {
    Trip t;
    const Instance inst = testing::build_instance({t, t, t}, {1, 3, 480, 30});
    for (double d : decentralisation_indices(inst)) EXPECT_DOUBLE_EQ(d, 1.0 / 3.0);
    for (double v : travel_time_indices(inst)) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

// -----------------------------------------------------------------------------
// Insertion order
// -----------------------------------------------------------------------------

TEST(SwapPass, HandSimulation) {
    // Scores of requests A..D = 1..4.
    const std::vector<double> g{0.30, 0.20, 0.10, 0.25};
    std::vector<int> order{1, 2, 3, 4};
    adjacent_swap_pass(order, g, 0.03);
    // B passes A; C passes A, then B; D passes A but not B.
    EXPECT_EQ(order, (std::vector<int>{3, 2, 4, 1}));
}

TEST(SwapPass, LargeDeltaKeepsOrder) {
    const std::vector<double> g{0.30, 0.20, 0.10, 0.25};
    std::vector<int> order{1, 2, 3, 4};
    adjacent_swap_pass(order, g, 0.21);
    EXPECT_EQ(order, (std::vector<int>{1, 2, 3, 4}));
}

TEST(SwapPass, ThresholdIsInclusive) {
    const std::vector<double> g{0.5, 0.25};
    std::vector<int> order{1, 2};
    adjacent_swap_pass(order, g, 0.25);
    EXPECT_EQ(order, (std::vector<int>{2, 1}));
}

Instance timed_requests(int vehicles) {
    // Earliest times 40, 10, 30 (outbound: 50 - 20), 20.
    std::vector<Trip> trips(4);
    trips[0].pickup = {1, 0, {40, 55}};
    trips[0].dropoff = {9, 0};
    trips[1].pickup = {0, 2, {10, 25}};
    trips[1].dropoff = {0, 3};
    trips[2].pickup = {0, -5};
    trips[2].dropoff = {0, -25, {50, 65}};
    trips[2].direction = Direction::outbound;
    trips[3].pickup = {-4, 0, {20, 35}};
    trips[3].dropoff = {-8, 0};
    return testing::build_instance(trips, {vehicles, 3, 480, 30});
}

TEST(InsertionOrder, OrderingTime) {
    const Instance inst = timed_requests(1);
    EXPECT_EQ(ordering_time(inst.request(1), inst), 40.0);
    EXPECT_EQ(ordering_time(inst.request(3), inst), 30.0);
}

TEST(InsertionOrder, SeedsFirstThenTimeOrderWithSwaps) {
    const Instance inst = timed_requests(1);
    const auto g = general_indices(inst, 0.1);
    HeuristicParams params;
    params.delta = 0.99;  // no swaps
    const auto order = build_insertion_order(inst, params);
    ASSERT_EQ(order.size(), 4u);
    const int seed = static_cast<int>(std::min_element(g.begin(), g.end()) - g.begin()) + 1;
    EXPECT_EQ(order.front(), seed);
    std::vector<int> expected;
    for (int id : {2, 4, 3, 1}) {
        if (id != seed) expected.push_back(id);
    }
    EXPECT_EQ(std::vector<int>(order.begin() + 1, order.end()), expected);

    params.delta = 1e-6;  // every descent swaps: the tail ends up in G order
    const auto swapped = build_insertion_order(inst, params);
    for (std::size_t k = 2; k < swapped.size(); ++k) {
        EXPECT_LE(g[static_cast<std::size_t>(swapped[k - 1] - 1)], g[static_cast<std::size_t>(swapped[k] - 1)] + 1e-6);
    }
}

TEST(InsertionOrder, AllSeedsGivesGeneralIndexOrder) {
    const Instance inst = timed_requests(4);
    const auto g = general_indices(inst, 0.1);
    const auto order = build_insertion_order(inst, {});
    for (std::size_t k = 1; k < order.size(); ++k) {
        EXPECT_LE(g[static_cast<std::size_t>(order[k - 1] - 1)], g[static_cast<std::size_t>(order[k] - 1)]);
    }
    // More vehicles than requests behaves the same.
    EXPECT_EQ(build_insertion_order(timed_requests(6), {}), order);
}

TEST(HeuristicParamsValidation, RejectsOutOfRange) {
    EXPECT_NO_THROW(validate(HeuristicParams{}));
    EXPECT_THROW(validate(HeuristicParams{0.0, 0.03}), ConfigError);
    EXPECT_THROW(validate(HeuristicParams{0.1, 1.0}), ConfigError);
}

// -----------------------------------------------------------------------------
// Construction
// -----------------------------------------------------------------------------

TEST(Construction, AllRejectedWhenNothingIsChanceFeasible) {
    const Instance inst = timed_requests(2);
    const Scenario sc(inst, testing::default_model(inst, 20.0, 0.999999, 1000.0));
    const Construction c = construct_initial(sc);
    EXPECT_EQ(c.solution.profit, 0.0);
    EXPECT_EQ(c.solution.pool().size(), 4u);
    EXPECT_EQ(c.seeded, 0);
    EXPECT_TRUE(check_feasible(c.solution, sc).passed());
    EXPECT_EQ(solve_lsh(sc).solution.profit, 0.0);
}

TEST(Construction, SingleRequest) {
    Trip t;
    t.pickup = {3, 4};
    t.dropoff = {6, 8};
    t.load = 2;
    const Instance inst = testing::build_instance({t}, {1, 3, 480, 30});
    const Scenario sc = permissive(inst);
    const Construction c = construct_initial(sc);
    ASSERT_EQ(c.solution.served(), (std::vector<int>{1}));
    EXPECT_DOUBLE_EQ(c.solution.profit, 20.0 * 2 - (5.0 + 5.0 + 10.0));
    EXPECT_EQ(c.seeded, 1);
}

TEST(Construction, FailedSeedIsRetriedInOrder) {
    // Request 2 is the lowest-G seed but cannot fit alone; it is demoted, not dropped outright.
    Trip a;
    a.pickup = {1, 0};
    a.dropoff = {20, 0};
    Trip b;
    b.pickup = {0, 1};
    b.dropoff = {0, 2};
    b.load = 5;
    const Instance inst = testing::build_instance({a, b}, {1, 3, 480, 30});
    const Scenario sc = permissive(inst);
    const Construction c = construct_initial(sc);
    EXPECT_EQ(c.order.front(), 2);
    EXPECT_EQ(c.seeded, 0);
    EXPECT_EQ(c.solution.served(), (std::vector<int>{1}));
}

TEST(Construction, PassesCheckerOnGeneratedInstances) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GeneratorConfig cfg;
        cfg.requests = 20;
        cfg.vehicles = 3;
        cfg.seed = seed;
        const Instance inst = generate_instance(cfg);
        const Scenario sc(inst, testing::default_model(inst));
        const Construction c = construct_initial(sc);
        const FeasibilityReport rep = check_feasible(c.solution, sc);
        EXPECT_TRUE(rep.passed()) << rep.summary();
    }
}

// -----------------------------------------------------------------------------
// Selection search
// -----------------------------------------------------------------------------

TEST(LsSelection, AddsProfitablePoolRequest) {
    Trip t;
    t.pickup = {1, 0};
    t.dropoff = {2, 0};
    Trip costly;
    costly.pickup = {10, 0};
    costly.dropoff = {15, 0};
    const Instance inst = testing::build_instance({t, costly}, {2, 3, 480, 30});
    const Scenario sc = permissive(inst);
    const Solution out = ls_selection(empty_solution(sc), sc);
    // Request 2 earns 20 but needs a detour of at least 26, so it stays in the pool.
    EXPECT_EQ(out.served(), (std::vector<int>{1}));
    EXPECT_DOUBLE_EQ(out.profit, 16.0);
}

TEST(LsSelection, LocalOptimumIsKept) {
    const Instance inst = pinwheel();
    const Scenario sc = permissive(inst);
    const Solution start = solution_with(sc, {{0, 1, 5, 2, 6, 9}, {0, 3, 7, 4, 8, 9}});
    ASSERT_TRUE(start.pool().empty());
    ASSERT_GT(start.profit, 0.0);
    const Solution out = ls_selection(start, sc);
    EXPECT_EQ(out.profit, start.profit);
    EXPECT_EQ(out.accepted, start.accepted);
}

// Request 1 earns 20 at cost 12, request 2 earns 40 at cost 12; their pickups are 10 apart and
// both must start in [10, 12], so at most one of them can be served.
Instance swap_only_instance() {
    Trip a;
    a.pickup = {5, 0, {10, 12}};
    a.dropoff = {6, 0};
    Trip b;
    b.pickup = {-5, 0, {10, 12}};
    b.dropoff = {-6, 0};
    b.load = 2;
    return testing::build_instance({a, b}, {1, 2, 480, 30});
}

TEST(LsSelection, SwapFindsWhatAddAndRemoveCannot) {
    const Instance inst = swap_only_instance();
    const Scenario sc = permissive(inst);
    const Solution start = solution_with(sc, {{0, 1, 3, 5}});
    ASSERT_DOUBLE_EQ(start.profit, 8.0);
    // Step one on its own: ADD(2) is infeasible and REM(1) loses 8.
    EXPECT_FALSE(try_insert(start.routes[0], 2, sc).has_value());

    const Solution out = ls_selection(start, sc);
    EXPECT_EQ(out.served(), (std::vector<int>{2}));
    EXPECT_DOUBLE_EQ(out.profit, 28.0);
    EXPECT_DOUBLE_EQ(brute_force_exact(sc).profit, 28.0);
    EXPECT_TRUE(check_feasible(out, sc).passed());
}

// -----------------------------------------------------------------------------
// Routing search
// -----------------------------------------------------------------------------

// Requests on opposite sides of the depot, interleaved on one vehicle: cost 10+20+21+22+11 = 84.
Instance opposite_requests(int vehicles) {
    Trip a;
    a.pickup = {10, 0};
    a.dropoff = {11, 0};
    Trip b;
    b.pickup = {-10, 0};
    b.dropoff = {-11, 0};
    return testing::build_instance({a, b}, {vehicles, 2, 480, 60});
}

TEST(LsRouting, ReassignSavesHandComputedCost) {
    const Scenario sc = permissive(opposite_requests(2));
    const Solution start = solution_with(sc, {{0, 1, 2, 3, 4, 5}});
    ASSERT_DOUBLE_EQ(start.routing_cost, 84.0);
    const Solution out = ls_routing(start, sc);
    // Moving either request to the idle vehicle saves 62 on vehicle 0 and costs 22 on vehicle 1.
    EXPECT_DOUBLE_EQ(start.routing_cost - out.routing_cost, 40.0);
    EXPECT_EQ(out.vehicles_used(), 2);
    EXPECT_EQ(out.accepted, start.accepted);
    EXPECT_DOUBLE_EQ(out.revenue, start.revenue);
    EXPECT_TRUE(check_feasible(out, sc).passed());
}

TEST(LsRouting, SingleVehicleUsesReinsertion) {
    const Scenario sc = permissive(opposite_requests(1));
    const Solution start = solution_with(sc, {{0, 1, 2, 3, 4, 5}});
    const Solution out = ls_routing(start, sc);
    EXPECT_DOUBLE_EQ(out.routing_cost, 44.0);
    EXPECT_EQ(out.accepted, start.accepted);
}

TEST(LsRouting, SymmetricSolutionIsStable) {
    const Scenario sc = permissive(opposite_requests(2));
    const Solution start = solution_with(sc, {{0, 1, 3, 5}, {0, 2, 4, 5}});
    const Solution out = ls_routing(start, sc);
    EXPECT_EQ(out.routing_cost, start.routing_cost);
    EXPECT_EQ(out.routes[0].stops, start.routes[0].stops);
    EXPECT_EQ(out.routes[1].stops, start.routes[1].stops);
}

// -----------------------------------------------------------------------------
// LS-H
// -----------------------------------------------------------------------------

void expect_strictly_increasing(const SolveResult& res) {
    for (std::size_t k = 1; k < res.trace.size(); ++k) {
        EXPECT_GT(res.trace[k].profit, res.trace[k - 1].profit + kImprovementEpsilon);
        EXPECT_EQ(res.trace[k].iteration, static_cast<int>(k));
    }
    EXPECT_EQ(res.trace.back().profit, res.solution.profit);
    EXPECT_EQ(res.trace.front().profit, res.initial_profit);
}

TEST(SolveLsh, OptimalConstructionStopsAfterOneIteration) {
    Trip t;
    t.pickup = {1, 0};
    t.dropoff = {2, 0};
    const Scenario sc = permissive(testing::build_instance({t}, {1, 3, 480, 30}));
    const SolveResult res = solve_lsh(sc);
    ASSERT_EQ(res.trace.size(), 1u);
    EXPECT_DOUBLE_EQ(res.solution.profit, 16.0);
}

TEST(SolveLsh, TraceAndFeasibilityOnGeneratedInstances) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        GeneratorConfig cfg;
        cfg.requests = 24;
        cfg.vehicles = 3;
        cfg.classes = 2;
        cfg.seed = 100 + seed;
        const Instance inst = generate_instance(cfg);
        const Scenario sc(inst, testing::default_model(inst, 20.0, 0.8, 10.0));
        const SolveResult res = solve_lsh(sc);
        expect_strictly_increasing(res);
        const FeasibilityReport rep = check_feasible(res.solution, sc);
        EXPECT_TRUE(rep.passed()) << rep.summary();
        EXPECT_EQ(res.solution.profit, res.solution.revenue - res.solution.routing_cost);
        EXPECT_GE(res.solution.profit, res.initial_profit);
    }
}

TEST(SolveLsh, Deterministic) {
    GeneratorConfig cfg;
    cfg.requests = 30;
    cfg.vehicles = 3;
    cfg.seed = 5;
    const Instance inst = generate_instance(cfg);
    const Scenario sc(inst, testing::default_model(inst, 20.0, 0.8, 10.0));
    const SolveResult a = solve_lsh(sc);
    const SolveResult b = solve_lsh(sc);
    EXPECT_EQ(a.solution.profit, b.solution.profit);
    EXPECT_EQ(a.order, b.order);
    for (std::size_t k = 0; k < a.solution.routes.size(); ++k) {
        EXPECT_EQ(a.solution.routes[k].stops, b.solution.routes[k].stops);
        EXPECT_EQ(a.solution.routes[k].start, b.solution.routes[k].start);
    }
    EXPECT_EQ(trace_csv(a, inst), trace_csv(b, inst));
}

TEST(SolveLsh, NeverAboveOracle) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Instance inst = testing::random_tiny_instance(seed);
        const Scenario sc(inst, testing::default_model(inst));
        const SolveResult res = solve_lsh(sc);
        const Solution best = brute_force_exact(sc);
        EXPECT_LE(res.solution.profit, best.profit + 1e-9) << "seed " << seed;
        EXPECT_TRUE(check_feasible(res.solution, sc).passed()) << "seed " << seed;
    }
}

TEST(SolveLsh, TraceCsvLayout) {
    Trip t;
    t.pickup = {1, 0};
    t.dropoff = {2, 0};
    Trip u = t;
    u.class_id = 3;
    const Instance inst = testing::build_instance({t, u}, {1, 3, 480, 30});
    const Scenario sc = permissive(inst);
    const std::string csv = trace_csv(solve_lsh(sc), inst);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "iteration,profit,served,routing_cost,revenue,served_class_1,served_class_3");
}

TEST(SolveLsh, ShuffledTiesStayFeasible) {
    GeneratorConfig cfg;
    cfg.requests = 16;
    cfg.vehicles = 2;
    cfg.seed = 8;
    const Instance inst = generate_instance(cfg);
    const Scenario sc(inst, testing::default_model(inst, 20.0, 0.8, 10.0));
    HeuristicParams params;
    params.shuffle_ties = true;
    params.rng_seed = 17;
    const SolveResult res = solve_lsh(sc, params);
    EXPECT_TRUE(check_feasible(res.solution, sc).passed());
    auto sorted = res.order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> ids(16);
    std::iota(ids.begin(), ids.end(), 1);
    EXPECT_EQ(sorted, ids);
}

}  // namespace
}  // namespace ccdarp
