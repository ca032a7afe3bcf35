#include <gtest/gtest.h>

#include <numeric>

#include "ccdarp/heuristic.hpp"
#include "ccdarp/schedule.hpp"
#include "test_support.hpp"

namespace ccdarp {
namespace {

using testing::Trip;

Route expect_route(const ScheduleResult& result) {
    if (const auto* bad = std::get_if<Infeasibility>(&result)) {
        ADD_FAILURE() << "unexpected infeasibility: " << bad->describe();
        return {};
    }
    return std::get<Route>(result);
}

Infeasibility expect_infeasible(const ScheduleResult& result) {
    if (std::holds_alternative<Route>(result)) {
        ADD_FAILURE() << "sequence unexpectedly feasible";
        return {};
    }
    return std::get<Infeasibility>(result);
}

// Two requests along the x axis: 1 from (5,0) to (10,0), 2 from (5,5) to (10,5).
Instance two_requests(int load = 1, int capacity = 3, double ride_cap = 30) {
    Trip a;
    a.pickup = {5, 0, {20, 35}, 1};
    a.dropoff = {10, 0, {0, 1440}, 1};
    a.load = load;
    a.private_cost = 100;
    Trip b;
    b.pickup = {5, 5, {0, 1440}, 1};
    b.dropoff = {10, 5, {40, 60}, 1};
    b.direction = Direction::outbound;
    b.load = load;
    b.private_cost = 100;
    return testing::build_instance({a, b}, {2, capacity, 480, ride_cap});
}

Scenario permissive(const Instance& inst) { return Scenario(inst, testing::permissive_model(inst)); }

// -----------------------------------------------------------------------------
// build_schedule
// -----------------------------------------------------------------------------

TEST(BuildSchedule, EmptyRoute) {
    const Scenario sc = permissive(two_requests());
    const Route r = idle_route(0, sc);
    EXPECT_TRUE(r.idle());
    EXPECT_EQ(r.duration(), 0.0);
    EXPECT_EQ(r.cost, sc.instance().cost(0, 5));
    EXPECT_EQ(r.cost, 0.0);
}

TEST(BuildSchedule, WaitsForWindowOpening) {
    const Scenario sc = permissive(two_requests());
    const int seq[] = {0, 1, 3, 5};
    const Route r = expect_route(build_schedule(0, seq, sc));
    EXPECT_EQ(r.start[1], 20.0);
    EXPECT_EQ(r.start[2], 26.0);
    EXPECT_EQ(r.load, (std::vector<int>{0, 1, 0, 0}));
    // The vehicle leaves the depot just in time instead of idling at the pickup.
    EXPECT_EQ(r.start[0], 15.0);
    EXPECT_DOUBLE_EQ(r.cost, 20.0);
}

TEST(BuildSchedule, LateArrivalCitesNode) {
    Instance inst = two_requests();
    InstanceData data = inst.data();
    data.nodes[1].window = {0, 3};
    const Scenario sc = permissive(Instance(std::move(data)));
    const int seq[] = {0, 1, 3, 5};
    const Infeasibility bad = expect_infeasible(build_schedule(0, seq, sc));
    EXPECT_EQ(bad.kind, Violation::time_window);
    EXPECT_EQ(bad.node, 1);
    EXPECT_EQ(bad.value, 5.0);
    EXPECT_EQ(bad.limit, 3.0);
}

TEST(BuildSchedule, StructureViolations) {
    const Scenario sc = permissive(two_requests());
    const int reversed[] = {0, 3, 1, 5};
    EXPECT_EQ(expect_infeasible(build_schedule(0, reversed, sc)).kind, Violation::structure);
    const int unpaired[] = {0, 1, 5};
    EXPECT_EQ(expect_infeasible(build_schedule(0, unpaired, sc)).kind, Violation::structure);
    const int open[] = {0, 1, 3};
    EXPECT_EQ(expect_infeasible(build_schedule(0, open, sc)).kind, Violation::structure);
}

TEST(BuildSchedule, CapacityViolation) {
    const Scenario sc = permissive(two_requests(2, 3));
    const int seq[] = {0, 1, 2, 3, 4, 5};
    const Infeasibility bad = expect_infeasible(build_schedule(0, seq, sc));
    EXPECT_EQ(bad.kind, Violation::capacity);
    EXPECT_EQ(bad.node, 2);
}

TEST(BuildSchedule, RideTimeViolation) {
    const Scenario sc = permissive(two_requests(1, 3, 7));
    // Request 1 rides 5 + hypot(5,5) + 5 minutes of travel plus two services.
    const int seq[] = {0, 1, 2, 4, 3, 5};
    const Infeasibility bad = expect_infeasible(build_schedule(0, seq, sc));
    EXPECT_EQ(bad.kind, Violation::ride_time);
    EXPECT_EQ(bad.node, 1);
}

TEST(BuildSchedule, ChanceViolationCitesRequest) {
    // Request 1 is chance-feasible only with at most about 3.1 minutes of extra ride time.
    Trip a;
    a.pickup = {10, 0, {10, 25}};
    a.dropoff = {20, 0};
    a.private_cost = 23.0;
    Trip b;
    b.pickup = {10, 5};
    b.dropoff = {20, 5};
    b.private_cost = 100.0;
    const Instance inst = testing::build_instance({a, b}, {1, 3, 480, 30});
    const Scenario sc(inst, testing::default_model(inst));
    EXPECT_TRUE(sc.terms(1).servable);

    const int direct[] = {0, 1, 3, 2, 4, 5};
    EXPECT_TRUE(std::holds_alternative<Route>(build_schedule(0, direct, sc)));
    const int detour[] = {0, 1, 2, 3, 4, 5};
    const Infeasibility bad = expect_infeasible(build_schedule(0, detour, sc));
    EXPECT_EQ(bad.kind, Violation::chance);
    EXPECT_EQ(bad.node, 1);
}

TEST(BuildSchedule, OutboundBlockShiftsTowardsDeadline) {
    // Blocks shift one at a time from the left: the pickup block first absorbs the 30-minute wait
    // before the dropoff, then the dropoff block moves on its own to the end of its window.
    Trip t;
    t.pickup = {5, 0};
    t.dropoff = {10, 0, {40, 60}};
    t.direction = Direction::outbound;
    t.private_cost = 30.0;
    const Instance inst = testing::build_instance({t}, {1, 3, 480, 30});
    const Scenario sc(inst, testing::default_model(inst));
    const int seq[] = {0, 1, 2, 3};
    const Route r = expect_route(build_schedule(0, seq, sc));
    EXPECT_DOUBLE_EQ(r.start[1], 35.0);
    EXPECT_DOUBLE_EQ(r.start[2], 60.0);
    EXPECT_DOUBLE_EQ(request_outcome(r, 1, sc).outcome.schedule_delay, 0.0);
}

TEST(BuildSchedule, Idempotent) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Instance inst = testing::random_tiny_instance(seed);
        const Scenario sc(inst, testing::default_model(inst));
        const SolveResult res = solve_lsh(sc);
        for (const Route& r : res.solution.routes) {
            const Route again = expect_route(build_schedule(r.vehicle, r.stops, sc));
            EXPECT_EQ(again.start, r.start);
            EXPECT_EQ(again.load, r.load);
            EXPECT_EQ(again.cost, r.cost);
        }
    }
}

// -----------------------------------------------------------------------------
// Insertion and removal
// -----------------------------------------------------------------------------

TEST(TryInsert, EmptyRouteDeltaCost) {
    const Scenario sc = permissive(two_requests());
    const Instance& inst = sc.instance();
    const auto ins = try_insert(idle_route(0, sc), 1, sc);
    ASSERT_TRUE(ins.has_value());
    EXPECT_EQ(ins->pickup_after, 0);
    EXPECT_EQ(ins->dropoff_after, 0);
    EXPECT_DOUBLE_EQ(ins->delta_cost, inst.cost(0, 1) + inst.cost(1, 3) + inst.cost(3, 5) - inst.cost(0, 5));
    EXPECT_EQ(ins->route.stops, (std::vector<int>{0, 1, 3, 5}));
}

TEST(TryInsert, EnumeratesSixPairsAroundOneRequest) {
    const Scenario sc = permissive(two_requests());
    const int seq[] = {0, 1, 3, 5};
    const Route r = expect_route(build_schedule(0, seq, sc));
    RouteScheduler scheduler(sc);
    InsertionStats stats;
    ASSERT_TRUE(try_insert(r, 2, scheduler, std::numeric_limits<double>::infinity(), &stats).has_value());
    EXPECT_EQ(stats.candidates, 6);
    EXPECT_GE(stats.evaluated, 1);
}

TEST(TryInsert, LoadAboveCapacity) {
    const Scenario sc = permissive(two_requests(4, 3));
    EXPECT_FALSE(try_insert(idle_route(0, sc), 1, sc).has_value());
}

TEST(TryInsert, CostBoundPrunes) {
    const Scenario sc = permissive(two_requests());
    RouteScheduler scheduler(sc);
    const Route idle = idle_route(0, sc);
    const auto ins = try_insert(idle, 1, scheduler);
    ASSERT_TRUE(ins.has_value());
    EXPECT_FALSE(try_insert(idle, 1, scheduler, ins->delta_cost).has_value());
    EXPECT_TRUE(try_insert(idle, 1, scheduler, ins->delta_cost + 1e-9).has_value());
}

TEST(RemoveRequest, OnlyRequestLeavesEmptyRoute) {
    const Scenario sc = permissive(two_requests());
    const int seq[] = {0, 1, 3, 5};
    const Route r = expect_route(build_schedule(0, seq, sc));
    const Route empty = expect_route(remove_request(r, 1, sc));
    EXPECT_TRUE(empty.idle());
    EXPECT_EQ(empty.cost, 0.0);
}

TEST(RemoveRequest, AbsentRequestIsContractViolation) {
    const Scenario sc = permissive(two_requests());
    EXPECT_THROW(remove_request(idle_route(0, sc), 2, sc), std::invalid_argument);
}

TEST(RemoveRequest, ReinsertAtSamePositionsRestoresCost) {
    const Scenario sc = permissive(two_requests());
    const int seq[] = {0, 1, 2, 3, 4, 5};
    const Route full = expect_route(build_schedule(0, seq, sc));
    const Route without = expect_route(remove_request(full, 2, sc));
    EXPECT_EQ(without.stops, (std::vector<int>{0, 1, 3, 5}));
    // Pickup after position 1, dropoff after position 2 of the reduced route.
    const int back[] = {0, 1, 2, 3, 4, 5};
    EXPECT_DOUBLE_EQ(expect_route(build_schedule(0, back, sc)).cost, full.cost);
    const auto ins = try_insert(without, 2, sc);
    ASSERT_TRUE(ins.has_value());
    EXPECT_LE(ins->route.cost, full.cost + 1e-9);
}

TEST(RemoveRequest, StrictlyCheaperOnEuclideanRoutes) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Instance inst = testing::random_tiny_instance(seed);
        const Scenario sc = permissive(inst);
        std::vector<int> seq{0};
        for (const Request& r : inst.requests()) {
            seq.push_back(r.pickup);
            seq.push_back(r.dropoff);
        }
        seq.push_back(inst.destination_depot());
        const double full = sequence_cost(seq, inst);
        for (const Request& r : inst.requests()) {
            std::vector<int> rest;
            for (int s : seq) {
                if (s != r.pickup && s != r.dropoff) rest.push_back(s);
            }
            EXPECT_LT(sequence_cost(rest, inst), full);
            ++checked;
        }
    }
    EXPECT_GT(checked, 100);
}

// Cheapest feasible (pickup_after, dropoff_after) by scheduling every pair with build_schedule.
std::optional<double> brute_force_insertion(const Route& route, int request_id, const Scenario& sc) {
    const Instance& inst = sc.instance();
    const Request& req = inst.request(request_id);
    std::optional<double> best;
    const int last = static_cast<int>(route.stops.size()) - 2;
    for (int a = 0; a <= last; ++a) {
        for (int b = a; b <= last; ++b) {
            std::vector<int> seq;
            for (int k = 0; k <= last + 1; ++k) {
                seq.push_back(route.stops[static_cast<std::size_t>(k)]);
                if (k == a) seq.push_back(req.pickup);
                if (k == b) seq.push_back(req.dropoff);
            }
            const ScheduleResult res = build_schedule(route.vehicle, seq, sc);
            if (const Route* r = std::get_if<Route>(&res)) {
                const double delta = r->cost - route.cost;
                if (!best || delta < *best) best = delta;
            }
        }
    }
    return best;
}

TEST(TryInsert, ExhaustiveOnSmallRoutes) {
    int found = 0;
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Instance inst = testing::random_tiny_instance(seed, 4, 1);
        const Scenario sc(inst, testing::default_model(inst, 20.0, 0.8, 5.0));
        // Grow a route greedily from the first requests, then test the last one.
        Route route = idle_route(0, sc);
        const int n = inst.request_count();
        for (int id = 1; id < n && id <= 3; ++id) {
            if (auto ins = try_insert(route, id, sc)) route = ins->route;
        }
        const auto fast = try_insert(route, n, sc);
        const auto slow = brute_force_insertion(route, n, sc);
        ASSERT_EQ(fast.has_value(), slow.has_value()) << "seed " << seed;
        ++compared;
        if (fast) {
            ++found;
            EXPECT_NEAR(fast->delta_cost, *slow, 1e-9) << "seed " << seed;
            EXPECT_NEAR(fast->route.cost - route.cost, fast->delta_cost, 1e-9);
        }
    }
    EXPECT_EQ(compared, 300);
    EXPECT_GT(found, 30);
}

TEST(TryInsert, TiesGoToLowestPositions) {
    // Pickup and dropoff both sit on the depot, so every placement adds zero cost.
    Trip t;
    Trip u;
    u.pickup = {3, 0};
    u.dropoff = {3, 0};
    const Instance inst = testing::build_instance({u, t}, {1, 3, 480, 30});
    const Scenario sc = permissive(inst);
    const auto first = try_insert(idle_route(0, sc), 1, sc);
    ASSERT_TRUE(first.has_value());
    const auto ins = try_insert(first->route, 2, sc);
    ASSERT_TRUE(ins.has_value());
    EXPECT_EQ(ins->delta_cost, 0.0);
    EXPECT_EQ(ins->pickup_after, 0);
    EXPECT_EQ(ins->dropoff_after, 0);
}

// -----------------------------------------------------------------------------
// Solutions and the independent checker
// -----------------------------------------------------------------------------

Solution one_request_solution(const Scenario& sc, const std::vector<int>& stops) {
    Solution sol = empty_solution(sc);
    sol.routes[0] = expect_route(build_schedule(0, stops, sc));
    for (int s : stops) {
        if (sc.instance().is_pickup(s)) sol.accepted[static_cast<std::size_t>(s - 1)] = 1;
    }
    update_totals(sol, sc);
    return sol;
}

TEST(Objective, EmptySolutionIsZero) {
    const Scenario sc = permissive(two_requests());
    const Solution sol = empty_solution(sc);
    EXPECT_EQ(objective(sol, sc), 0.0);
    EXPECT_EQ(sol.profit, 0.0);
    EXPECT_TRUE(check_feasible(sol, sc).passed());
}

TEST(Objective, FareTimesLoadMinusRouteCost) {
    Trip t;
    t.pickup = {5, 0};
    t.dropoff = {7.5, 0};
    t.load = 2;
    const Instance inst = testing::build_instance({t}, {1, 3, 480, 30});
    const Scenario sc = permissive(inst);
    const Solution sol = one_request_solution(sc, {0, 1, 2, 3});
    EXPECT_DOUBLE_EQ(sol.routing_cost, 15.0);
    EXPECT_DOUBLE_EQ(sol.revenue, 40.0);
    EXPECT_DOUBLE_EQ(objective(sol, sc), 25.0);
    EXPECT_EQ(sol.profit, sol.revenue - sol.routing_cost);
}

TEST(CheckFeasible, PassesScheduledSolution) {
    const Scenario sc = permissive(two_requests());
    const Solution sol = one_request_solution(sc, {0, 1, 2, 3, 4, 5});
    const FeasibilityReport rep = check_feasible(sol, sc);
    EXPECT_TRUE(rep.passed()) << rep.summary();
}

TEST(CheckFeasible, FlagsChanceViolation) {
    Trip a;
    a.pickup = {10, 0, {10, 25}};
    a.dropoff = {20, 0};
    a.private_cost = 23.0;
    Trip b;
    b.pickup = {10, 5};
    b.dropoff = {20, 5};
    b.private_cost = 100.0;
    const Instance inst = testing::build_instance({a, b}, {1, 3, 480, 30});
    const Scenario loose = permissive(inst);
    const Scenario strict(inst, testing::default_model(inst));
    const Solution sol = one_request_solution(loose, {0, 1, 2, 3, 4, 5});
    const FeasibilityReport rep = check_feasible(sol, strict);
    ASSERT_EQ(rep.failures.size(), 1u) << rep.summary();
    EXPECT_NE(rep.failures[0].find("request 1: utility gap"), std::string::npos);
}

TEST(CheckFeasible, FlagsBrokenLinkage) {
    const Scenario sc = permissive(two_requests());
    Solution sol = one_request_solution(sc, {0, 1, 3, 5});
    sol.accepted[1] = 1;
    update_totals(sol, sc);
    const FeasibilityReport rep = check_feasible(sol, sc);
    ASSERT_FALSE(rep.passed());
    EXPECT_NE(rep.summary().find("request 2 is accepted but not fully visited"), std::string::npos);

    Solution hidden = one_request_solution(sc, {0, 1, 3, 5});
    hidden.accepted[0] = 0;
    update_totals(hidden, sc);
    EXPECT_NE(check_feasible(hidden, sc).summary().find("request 1 is rejected but visited"), std::string::npos);
}

TEST(CheckFeasible, FlagsTamperedSchedule) {
    const Scenario sc = permissive(two_requests());
    Solution sol = one_request_solution(sc, {0, 1, 3, 5});
    sol.routes[0].start[2] -= 1.0;  // dropoff served before the vehicle gets there
    EXPECT_FALSE(check_feasible(sol, sc).passed());

    Solution bad_profit = one_request_solution(sc, {0, 1, 3, 5});
    bad_profit.profit += 1.0;
    EXPECT_FALSE(check_feasible(bad_profit, sc).passed());

    Solution bad_load = one_request_solution(sc, {0, 1, 3, 5});
    bad_load.routes[0].load[1] = 2;
    EXPECT_FALSE(check_feasible(bad_load, sc).passed());
}

TEST(CheckFeasible, FlagsRideTimeAboveCap) {
    const Instance loose_inst = two_requests(1, 3, 30);
    const Instance tight_inst = two_requests(1, 3, 7);
    const Solution sol = one_request_solution(permissive(loose_inst), {0, 1, 2, 4, 3, 5});
    const FeasibilityReport rep = check_feasible(sol, permissive(tight_inst));
    EXPECT_NE(rep.summary().find("request 1: ride time"), std::string::npos) << rep.summary();
}

TEST(RequestOutcome, DelayFollowsDirection) {
    const Scenario sc = permissive(two_requests());
    const Solution sol = one_request_solution(sc, {0, 1, 3, 2, 4, 5});
    const Route& r = sol.routes[0];
    const RequestOutcome in = request_outcome(r, 1, sc);
    EXPECT_DOUBLE_EQ(in.outcome.schedule_delay, r.start[1] - 20.0);
    EXPECT_DOUBLE_EQ(in.outcome.ride_time, r.start[2] - r.start[1] - 1.0);
    const RequestOutcome out = request_outcome(r, 2, sc);
    EXPECT_DOUBLE_EQ(out.outcome.schedule_delay, 60.0 - r.start[4]);
}

}  // namespace
}  // namespace ccdarp
