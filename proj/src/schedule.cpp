#include "ccdarp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace ccdarp {

int Route::position_of(int node) const {
    const auto it = std::find(stops.begin(), stops.end(), node);
    return it == stops.end() ? -1 : static_cast<int>(it - stops.begin());
}

std::vector<int> Route::requests(const Instance& inst) const {
    std::vector<int> out;
    for (int s : stops) {
        if (inst.is_pickup(s)) out.push_back(s);
    }
    return out;
}

const char* to_string(Violation v) {
    switch (v) {
        case Violation::structure: return "structure";
        case Violation::time_window: return "time_window";
        case Violation::ride_time: return "ride_time";
        case Violation::capacity: return "capacity";
        case Violation::route_duration: return "route_duration";
        case Violation::chance: return "chance";
    }
    return "unknown";
}

std::string Infeasibility::describe() const {
    return fmt::format("{} violated at node {}: {:.6g} against limit {:.6g}", to_string(kind), node, value, limit);
}

// ---------------------------------------------------------------------------
// Scheduling
// ---------------------------------------------------------------------------

RouteScheduler::RouteScheduler(const Scenario& scenario)
    : scenario_(&scenario), position_(static_cast<std::size_t>(scenario.instance().node_count()), -1) {}

void RouteScheduler::index_positions(std::span<const int> stops) {
    for (std::size_t k = 0; k < stops.size(); ++k) position_[static_cast<std::size_t>(stops[k])] = static_cast<int>(k);
}

void RouteScheduler::clear_positions(std::span<const int> stops) {
    for (int s : stops) position_[static_cast<std::size_t>(s)] = -1;
}

RouteScheduler::Assessment RouteScheduler::assess(std::span<const int> stops, std::span<const double> start,
                                                  std::size_t first, std::size_t last) const {
    const Instance& inst = scenario_->instance();
    const double max_ride = inst.fleet().max_ride_time;
    Assessment a;
    for (std::size_t k = first; k <= last; ++k) {
        const int s = stops[k];
        if (s == inst.origin_depot() || s == inst.destination_depot()) continue;
        const int id = inst.request_of(s);
        const Request& r = inst.request(id);
        const auto p = static_cast<std::size_t>(position_[static_cast<std::size_t>(r.pickup)]);
        const auto d = static_cast<std::size_t>(position_[static_cast<std::size_t>(r.dropoff)]);
        if (s == r.dropoff && p >= first && p <= last) continue;  // already counted at the pickup
        const RequestTerms& terms = scenario_->terms(id);
        const double ride = start[d] - start[p] - inst.node(r.pickup).service;
        const double delay = terms.direction == Direction::inbound ? start[p] - terms.delay_anchor
                                                                   : std::max(0.0, terms.delay_anchor - start[d]);
        a.disutility += terms.beta_T * ride + terms.beta_S * delay;
        if (ride < inst.direct_time(r) - kTimeTolerance || ride > max_ride + kTimeTolerance) a.valid = false;
    }
    if (start.back() - start.front() > inst.fleet().max_route_duration + kTimeTolerance) a.valid = false;
    return a;
}

std::optional<Infeasibility> RouteScheduler::check_ride_and_chance(std::span<const int> stops) const {
    const Instance& inst = scenario_->instance();
    const double max_ride = inst.fleet().max_ride_time;
    for (std::size_t k = 1; k + 1 < stops.size(); ++k) {
        const int s = stops[k];
        if (!inst.is_pickup(s)) continue;
        const Request& r = inst.request(s);
        const auto d = static_cast<std::size_t>(position_[static_cast<std::size_t>(r.dropoff)]);
        const double ride = start_[d] - start_[k] - inst.node(s).service;
        const double direct = inst.direct_time(r);
        if (ride < direct - kTimeTolerance) return Infeasibility{Violation::ride_time, s, ride, direct};
        if (ride > max_ride + kTimeTolerance) return Infeasibility{Violation::ride_time, s, ride, max_ride};
        const RequestTerms& terms = scenario_->terms(s);
        const double delay = terms.direction == Direction::inbound ? start_[k] - terms.delay_anchor
                                                                   : std::max(0.0, terms.delay_anchor - start_[d]);
        const double gap = terms.base_gap + terms.beta_T * ride + terms.beta_S * delay;
        if (gap > terms.threshold + scenario_->tolerance()) {
            return Infeasibility{Violation::chance, s, gap, terms.threshold};
        }
    }
    return std::nullopt;
}

std::optional<Infeasibility> RouteScheduler::evaluate(std::span<const int> stops) {
    const Instance& inst = scenario_->instance();
    const std::size_t m = stops.size();
    size_ = m;
    if (start_.size() < m) {
        start_.resize(m);
        earliest_.resize(m);
        wait_.resize(m);
        scratch_.resize(m);
    }

    // Forward pass: earliest service starts, window and capacity checks.
    const int capacity = inst.fleet().capacity;
    int load = 0;
    start_[0] = inst.node(stops[0]).window.earliest;
    wait_[0] = 0.0;
    for (std::size_t k = 1; k < m; ++k) {
        const Node& prev = inst.node(stops[k - 1]);
        const Node& cur = inst.node(stops[k]);
        const double arrival = start_[k - 1] + prev.service + inst.time(prev.id, cur.id);
        if (arrival > cur.window.latest + kTimeTolerance) {
            return Infeasibility{Violation::time_window, cur.id, arrival, cur.window.latest};
        }
        start_[k] = std::max(cur.window.earliest, arrival);
        wait_[k] = start_[k] - arrival;
        load += cur.load;
        if (load > capacity || load < 0) {
            return Infeasibility{Violation::capacity, cur.id, static_cast<double>(load), static_cast<double>(capacity)};
        }
    }
    std::copy_n(start_.begin(), m, earliest_.begin());

    // Leave the depot as late as possible without idling at the first stop.
    if (m >= 2) {
        const Node& depot = inst.node(stops[0]);
        const double latest_departure = start_[1] - depot.service - inst.time(stops[0], stops[1]);
        start_[0] = std::max(start_[0], std::min(depot.window.latest, latest_departure));
        wait_[1] = start_[1] - (start_[0] + depot.service + inst.time(stops[0], stops[1]));
    }

    // Blocks of consecutive stops served without idling, each shifted later by 0 or its maximum slack.
    index_positions(stops);
    std::copy_n(start_.begin(), m, scratch_.begin());
    const std::span<const double> scratch{scratch_.data(), m};
    std::size_t first = 0;
    while (first < m) {
        std::size_t last = first;
        while (last + 1 < m && wait_[last + 1] <= kTimeTolerance) ++last;
        double slack = std::numeric_limits<double>::infinity();
        for (std::size_t k = first; k <= last; ++k) {
            slack = std::min(slack, inst.node(stops[k]).window.latest - scratch_[k]);
        }
        if (last + 1 < m) slack = std::min(slack, wait_[last + 1]);
        if (slack > kTimeTolerance) {
            const Assessment stay = assess(stops, scratch, first, last);
            for (std::size_t k = first; k <= last; ++k) scratch_[k] += slack;
            const Assessment moved = assess(stops, scratch, first, last);
            const bool take = moved.valid != stay.valid ? moved.valid : moved.disutility < stay.disutility;
            if (take) {
                if (last + 1 < m) wait_[last + 1] -= slack;
            } else {
                for (std::size_t k = first; k <= last; ++k) scratch_[k] -= slack;
            }
        }
        first = last + 1;
    }
    std::copy_n(scratch_.begin(), m, start_.begin());

    std::optional<Infeasibility> result;
    const Node& end = inst.node(stops[m - 1]);
    const double max_duration = inst.fleet().max_route_duration;
    if (start_[m - 1] > end.window.latest + kTimeTolerance) {
        result = Infeasibility{Violation::time_window, end.id, start_[m - 1], end.window.latest};
    } else if (start_[m - 1] - start_[0] > max_duration + kTimeTolerance) {
        result = Infeasibility{Violation::route_duration, end.id, start_[m - 1] - start_[0], max_duration};
    } else {
        result = check_ride_and_chance(stops);
    }
    clear_positions(stops);
    return result;
}

double sequence_cost(std::span<const int> stops, const Instance& inst) {
    double c = 0.0;
    for (std::size_t k = 1; k < stops.size(); ++k) c += inst.cost(stops[k - 1], stops[k]);
    return c;
}

namespace {

Route make_route(int vehicle, std::span<const int> stops, const RouteScheduler& scheduler) {
    const Instance& inst = scheduler.scenario().instance();
    Route r;
    r.vehicle = vehicle;
    r.stops.assign(stops.begin(), stops.end());
    const auto start = scheduler.start();
    const auto earliest = scheduler.earliest();
    r.start.assign(start.begin(), start.end());
    r.earliest.assign(earliest.begin(), earliest.end());
    r.load.resize(stops.size());
    int load = 0;
    for (std::size_t k = 0; k < stops.size(); ++k) {
        load += inst.node(stops[k]).load;
        r.load[k] = load;
    }
    r.cost = sequence_cost(stops, inst);
    return r;
}

std::optional<Infeasibility> check_structure(std::span<const int> stops, const Instance& inst) {
    const int end = inst.destination_depot();
    if (stops.size() < 2 || stops.front() != inst.origin_depot() || stops.back() != end) {
        return Infeasibility{Violation::structure, stops.empty() ? -1 : stops.front(), 0.0, 0.0};
    }
    std::vector<int> seen(static_cast<std::size_t>(inst.node_count()), 0);
    for (std::size_t k = 1; k + 1 < stops.size(); ++k) {
        const int s = stops[k];
        if (s <= 0 || s >= end || seen[static_cast<std::size_t>(s)]++ > 0) {
            return Infeasibility{Violation::structure, s, 0.0, 0.0};
        }
        if (inst.is_dropoff(s) && !seen[static_cast<std::size_t>(inst.request_of(s))]) {
            return Infeasibility{Violation::structure, s, 0.0, 0.0};
        }
    }
    for (int i = 1; i <= inst.request_count(); ++i) {
        if (seen[static_cast<std::size_t>(i)] != seen[static_cast<std::size_t>(i + inst.request_count())]) {
            return Infeasibility{Violation::structure, i, 0.0, 0.0};
        }
    }
    return std::nullopt;
}

}  // namespace

ScheduleResult build_schedule(int vehicle, std::span<const int> stops, RouteScheduler& scheduler) {
    if (auto bad = check_structure(stops, scheduler.scenario().instance())) return *bad;
    if (auto bad = scheduler.evaluate(stops)) return *bad;
    return make_route(vehicle, stops, scheduler);
}

ScheduleResult build_schedule(int vehicle, std::span<const int> stops, const Scenario& scenario) {
    RouteScheduler scheduler(scenario);
    return build_schedule(vehicle, stops, scheduler);
}

Route idle_route(int vehicle, const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    const int stops[] = {inst.origin_depot(), inst.destination_depot()};
    RouteScheduler scheduler(scenario);
    if (auto bad = scheduler.evaluate(stops)) {
        throw InstanceError("depot windows admit no empty route: " + bad->describe());
    }
    return make_route(vehicle, stops, scheduler);
}

// ---------------------------------------------------------------------------
// Insertion and removal
// ---------------------------------------------------------------------------

std::optional<InsertionResult> try_insert(const Route& route, int request_id, RouteScheduler& scheduler,
                                          double cost_bound, InsertionStats* stats) {
    const Scenario& scenario = scheduler.scenario();
    const Instance& inst = scenario.instance();
    const Request& req = inst.request(request_id);
    if (!scenario.terms(request_id).servable || req.load > inst.fleet().capacity) return std::nullopt;

    const int p = req.pickup;
    const int d = req.dropoff;
    const Node& pick = inst.node(p);
    const Node& drop = inst.node(d);
    const int capacity = inst.fleet().capacity;
    const auto& s = route.stops;
    const int last = static_cast<int>(s.size()) - 2;  // largest position a stop can follow

    struct Candidate {
        double cost;
        int a;
        int b;
    };
    std::vector<Candidate> candidates;
    long enumerated = 0;
    for (int a = 0; a <= last; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        enumerated += last - a + 1;
        const double pick_arrival = route.earliest[ua] + inst.node(s[ua]).service + inst.time(s[ua], p);
        if (pick_arrival > pick.window.latest + kTimeTolerance) continue;
        if (route.load[ua] + req.load > capacity) continue;
        const double pick_start = std::max(pick.window.earliest, pick_arrival);
        const int next_a = s[ua + 1];
        const double detour_p = inst.cost(s[ua], p) + inst.cost(p, next_a) - inst.cost(s[ua], next_a);

        // Dropoff straight after the pickup.
        if (pick_start + pick.service + inst.time(p, d) <= drop.window.latest + kTimeTolerance) {
            const double c = inst.cost(s[ua], p) + inst.cost(p, d) + inst.cost(d, next_a) - inst.cost(s[ua], next_a);
            if (c < cost_bound) candidates.push_back({c, a, a});
        }
        for (int b = a + 1; b <= last; ++b) {
            const auto ub = static_cast<std::size_t>(b);
            if (route.load[ub] + req.load > capacity) break;
            const double drop_arrival = route.earliest[ub] + inst.node(s[ub]).service + inst.time(s[ub], d);
            if (drop_arrival > drop.window.latest + kTimeTolerance) continue;
            const double c =
                detour_p + inst.cost(s[ub], d) + inst.cost(d, s[ub + 1]) - inst.cost(s[ub], s[ub + 1]);
            if (c < cost_bound) candidates.push_back({c, a, b});
        }
    }
    if (stats) stats->candidates += enumerated;

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.cost != y.cost) return x.cost < y.cost;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<int> seq;
    seq.reserve(s.size() + 2);
    for (const Candidate& c : candidates) {
        seq.clear();
        for (int k = 0; k <= last + 1; ++k) {
            seq.push_back(s[static_cast<std::size_t>(k)]);
            if (k == c.a) seq.push_back(p);
            if (k == c.b) seq.push_back(d);
        }
        if (stats) ++stats->evaluated;
        if (!scheduler.evaluate(seq)) {
            return InsertionResult{route.vehicle, c.a, c.b, c.cost, make_route(route.vehicle, seq, scheduler)};
        }
    }
    return std::nullopt;
}

std::optional<InsertionResult> try_insert(const Route& route, int request_id, const Scenario& scenario) {
    RouteScheduler scheduler(scenario);
    return try_insert(route, request_id, scheduler);
}

ScheduleResult remove_request(const Route& route, int request_id, RouteScheduler& scheduler) {
    const Request& req = scheduler.scenario().instance().request(request_id);
    std::vector<int> seq;
    seq.reserve(route.stops.size());
    int removed = 0;
    for (int s : route.stops) {
        if (s == req.pickup || s == req.dropoff) {
            ++removed;
        } else {
            seq.push_back(s);
        }
    }
    if (removed != 2) {
        throw std::invalid_argument(
            fmt::format("request {} is not on the route of vehicle {}", request_id, route.vehicle));
    }
    if (auto bad = scheduler.evaluate(seq)) return *bad;
    return make_route(route.vehicle, seq, scheduler);
}

ScheduleResult remove_request(const Route& route, int request_id, const Scenario& scenario) {
    RouteScheduler scheduler(scenario);
    return remove_request(route, request_id, scheduler);
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

std::vector<int> Solution::served() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        if (accepted[i]) out.push_back(static_cast<int>(i) + 1);
    }
    return out;
}

std::vector<int> Solution::pool() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        if (!accepted[i]) out.push_back(static_cast<int>(i) + 1);
    }
    return out;
}

int Solution::vehicle_of(int request_id, const Instance& inst) const {
    const int pickup = inst.request(request_id).pickup;
    for (const Route& r : routes) {
        if (std::find(r.stops.begin(), r.stops.end(), pickup) != r.stops.end()) return r.vehicle;
    }
    return -1;
}

int Solution::vehicles_used() const {
    return static_cast<int>(std::count_if(routes.begin(), routes.end(), [](const Route& r) { return !r.idle(); }));
}

Solution empty_solution(const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    Solution sol;
    const Route idle = idle_route(0, scenario);
    for (int k = 0; k < inst.fleet().vehicles; ++k) {
        sol.routes.push_back(idle);
        sol.routes.back().vehicle = k;
    }
    sol.accepted.assign(static_cast<std::size_t>(inst.request_count()), 0);
    update_totals(sol, scenario);
    return sol;
}

void update_totals(Solution& sol, const Scenario& scenario) {
    sol.revenue = 0.0;
    for (int id : sol.served()) sol.revenue += scenario.terms(id).revenue;
    sol.routing_cost = 0.0;
    for (const Route& r : sol.routes) sol.routing_cost += r.cost;
    sol.profit = sol.revenue - sol.routing_cost;
}

double objective(const Solution& sol, const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    double revenue = 0.0;
    for (const Request& r : inst.requests()) {
        if (sol.is_accepted(r.id)) revenue += fare_of(r, scenario.model().fares) * r.load;
    }
    double cost = 0.0;
    for (const Route& r : sol.routes) cost += sequence_cost(r.stops, inst);
    return revenue - cost;
}

std::string FeasibilityReport::summary() const {
    if (failures.empty()) return "feasible";
    std::string out = fmt::format("{} violation(s)", failures.size());
    for (const auto& f : failures) out += "\n  " + f;
    return out;
}

RequestOutcome request_outcome(const Route& route, int request_id, const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    const Request& r = inst.request(request_id);
    const int p = route.position_of(r.pickup);
    const int d = route.position_of(r.dropoff);
    if (p < 0 || d < 0) {
        throw std::invalid_argument(fmt::format("request {} is not on the route of vehicle {}", request_id, route.vehicle));
    }
    const double bp = route.start[static_cast<std::size_t>(p)];
    const double bd = route.start[static_cast<std::size_t>(d)];
    RequestOutcome out;
    out.outcome.ride_time = bd - (bp + inst.node(r.pickup).service);
    out.outcome.schedule_delay = r.direction == Direction::inbound
                                     ? std::max(0.0, bp - inst.node(r.pickup).window.earliest)
                                     : std::max(0.0, inst.node(r.dropoff).window.latest - bd);
    out.outcome.fare = fare_of(r, scenario.model().fares);
    const ClassParams& cp = scenario.model().params_for(r.class_id);
    out.utility_gap = private_utility(r, cp, inst) - drt_utility(r, out.outcome, cp);
    return out;
}

FeasibilityReport check_feasible(const Solution& sol, const Scenario& scenario) {
    constexpr double eps = 1e-6;
    const Instance& inst = scenario.instance();
    const FleetSpec& fleet = inst.fleet();
    const int n = inst.request_count();
    FeasibilityReport rep;
    auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };

    if (static_cast<int>(sol.routes.size()) != fleet.vehicles) {
        fail(fmt::format("{} routes for {} vehicles", sol.routes.size(), fleet.vehicles));
    }
    if (static_cast<int>(sol.accepted.size()) != n) {
        fail(fmt::format("accept vector has {} entries for {} requests", sol.accepted.size(), n));
        return rep;
    }

    std::vector<int> owner(static_cast<std::size_t>(inst.node_count()), -1);
    for (std::size_t k = 0; k < sol.routes.size(); ++k) {
        const Route& r = sol.routes[k];
        const std::string tag = fmt::format("vehicle {}", k);
        if (r.vehicle != static_cast<int>(k)) fail(fmt::format("{}: route labelled vehicle {}", tag, r.vehicle));
        const std::size_t m = r.stops.size();
        if (m < 2 || r.stops.front() != inst.origin_depot() || r.stops.back() != inst.destination_depot()) {
            fail(tag + ": route must run from the origin to the destination depot");
            continue;
        }
        if (r.start.size() != m || r.load.size() != m) {
            fail(tag + ": schedule or load length does not match the stops");
            continue;
        }
        bool structure_ok = true;
        for (std::size_t j = 1; j + 1 < m; ++j) {
            const int s = r.stops[j];
            if (s <= 0 || s > 2 * n) {
                fail(fmt::format("{}: stop {} is not a request node", tag, s));
                structure_ok = false;
                continue;
            }
            if (owner[static_cast<std::size_t>(s)] != -1) {
                fail(fmt::format("{}: node {} visited more than once", tag, s));
                structure_ok = false;
            }
            owner[static_cast<std::size_t>(s)] = static_cast<int>(k);
        }
        if (!structure_ok) continue;

        int load = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const Node& node = inst.node(r.stops[j]);
            const double b = r.start[j];
            if (b < node.window.earliest - eps || b > node.window.latest + eps) {
                fail(fmt::format("{}: node {} served at {:.6f} outside [{}, {}]", tag, node.id, b, node.window.earliest,
                                 node.window.latest));
            }
            if (j > 0) {
                const Node& prev = inst.node(r.stops[j - 1]);
                const double ready = r.start[j - 1] + prev.service + inst.time(prev.id, node.id);
                if (b < ready - eps) {
                    fail(fmt::format("{}: node {} served at {:.6f} before arrival {:.6f}", tag, node.id, b, ready));
                }
            }
            load += node.load;
            if (load != r.load[j]) fail(fmt::format("{}: stored load {} at node {} should be {}", tag, r.load[j], node.id, load));
            if (load < 0 || load > fleet.capacity) {
                fail(fmt::format("{}: load {} at node {} outside [0, {}]", tag, load, node.id, fleet.capacity));
            }
        }
        if (r.start.back() - r.start.front() > fleet.max_route_duration + eps) {
            fail(fmt::format("{}: duration {:.6f} exceeds {}", tag, r.start.back() - r.start.front(), fleet.max_route_duration));
        }
    }

    for (const Request& req : inst.requests()) {
        const int vp = owner[static_cast<std::size_t>(req.pickup)];
        const int vd = owner[static_cast<std::size_t>(req.dropoff)];
        const bool accepted = sol.is_accepted(req.id);
        if (!accepted) {
            if (vp != -1 || vd != -1) fail(fmt::format("request {} is rejected but visited", req.id));
            continue;
        }
        if (vp == -1 || vd == -1) {
            fail(fmt::format("request {} is accepted but not fully visited", req.id));
            continue;
        }
        if (vp != vd) {
            fail(fmt::format("request {} is picked up and dropped off by different vehicles", req.id));
            continue;
        }
        const Route& route = sol.routes[static_cast<std::size_t>(vp)];
        if (route.position_of(req.pickup) > route.position_of(req.dropoff)) {
            fail(fmt::format("request {} is dropped off before pickup", req.id));
            continue;
        }
        const RequestOutcome out = request_outcome(route, req.id, scenario);
        const double direct = inst.direct_time(req);
        if (out.outcome.ride_time < direct - eps || out.outcome.ride_time > fleet.max_ride_time + eps) {
            fail(fmt::format("request {}: ride time {:.6f} outside [{:.6f}, {}]", req.id, out.outcome.ride_time, direct,
                             fleet.max_ride_time));
        }
        const ClassParams& cp = scenario.model().params_for(req.class_id);
        if (!chance_feasible(req, out.outcome, cp, inst, scenario.tolerance())) {
            fail(fmt::format("request {}: utility gap {:.6f} exceeds threshold {:.6f}", req.id, out.utility_gap,
                             chance_threshold(cp)));
        }
    }

    const double z = objective(sol, scenario);
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(sol.profit - z) > eps * scale) {
        fail(fmt::format("stored profit {:.9g} differs from recomputed {:.9g}", sol.profit, z));
    }
    if (std::abs(sol.profit - (sol.revenue - sol.routing_cost)) > eps * scale) {
        fail(fmt::format("profit {:.9g} is not revenue {:.9g} minus cost {:.9g}", sol.profit, sol.revenue, sol.routing_cost));
    }
    return rep;
}

}  // namespace ccdarp
