#ifndef CCDARP_SCHEDULE_HPP
#define CCDARP_SCHEDULE_HPP

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ccdarp/scenario.hpp"

namespace ccdarp {

inline constexpr double kTimeTolerance = 1e-7;

// A scheduled vehicle route. stops[0] is the origin depot and stops.back() the destination depot;
// start[k] is the service start B at stops[k] (start[0] is the departure time) and load[k] the
// load after serving stops[k].
struct Route {
    int vehicle = 0;
    std::vector<int> stops;
    std::vector<double> start;
    std::vector<double> earliest;  // forward-pass start times, a lower bound on start
    std::vector<int> load;
    double cost = 0.0;

    bool idle() const { return stops.size() <= 2; }
    double duration() const { return start.back() - start.front(); }
    int position_of(int node) const;
    // Request ids in pickup order.
    std::vector<int> requests(const Instance& inst) const;
};

enum class Violation { structure, time_window, ride_time, capacity, route_duration, chance };

const char* to_string(Violation v);

// First violated constraint found while scheduling a stop sequence.
struct Infeasibility {
    Violation kind = Violation::structure;
    int node = -1;  // offending node, or the pickup node of the offending request
    double value = 0.0;
    double limit = 0.0;

    std::string describe() const;
};

using ScheduleResult = std::variant<Route, Infeasibility>;

// Schedules a fixed stop sequence. Service starts follow a forward earliest-start pass; each
// schedule block (stops served without idling) is then shifted later by either 0 or the largest
// shift its windows and the idle time after it allow, whichever leaves its requests better off.
// The route is feasible when windows, capacity, ride times, duration and the chance constraint of
// every request on board hold.
class RouteScheduler {
public:
    explicit RouteScheduler(const Scenario& scenario);

    // nullopt when the sequence is feasible; the schedule is then readable via start()/earliest().
    std::optional<Infeasibility> evaluate(std::span<const int> stops);

    std::span<const double> start() const { return {start_.data(), size_}; }
    std::span<const double> earliest() const { return {earliest_.data(), size_}; }

    const Scenario& scenario() const { return *scenario_; }

private:
    struct Assessment {
        bool valid = true;
        double disutility = 0.0;  // sum of ride-time and delay disutility over the block's requests
    };

    Assessment assess(std::span<const int> stops, std::span<const double> start, std::size_t first,
                      std::size_t last) const;
    std::optional<Infeasibility> check_ride_and_chance(std::span<const int> stops) const;
    void index_positions(std::span<const int> stops);
    void clear_positions(std::span<const int> stops);

    const Scenario* scenario_;
    std::size_t size_ = 0;
    std::vector<double> start_;
    std::vector<double> earliest_;
    std::vector<double> wait_;
    std::vector<double> scratch_;
    std::vector<int> position_;  // by node id, -1 when not on the sequence
};

// Validates pairing and precedence, then schedules the sequence.
ScheduleResult build_schedule(int vehicle, std::span<const int> stops, const Scenario& scenario);
ScheduleResult build_schedule(int vehicle, std::span<const int> stops, RouteScheduler& scheduler);

double sequence_cost(std::span<const int> stops, const Instance& inst);

Route idle_route(int vehicle, const Scenario& scenario);

// ---------------------------------------------------------------------------
// Insertion and removal
// ---------------------------------------------------------------------------

struct InsertionResult {
    int vehicle = 0;
    int pickup_after = 0;   // position in the original route after which the pickup goes
    int dropoff_after = 0;  // position after which the dropoff goes; equal to pickup_after means adjacent
    double delta_cost = 0.0;
    Route route;            // the scheduled route with the request inserted
};

struct InsertionStats {
    long candidates = 0;  // (pickup, dropoff) position pairs enumerated
    long evaluated = 0;   // schedules built
};

// Cheapest feasible insertion of request_id into route. Ties on added cost go to the lowest pickup
// position, then the lowest dropoff position. Candidates costing cost_bound or more are not
// considered.
std::optional<InsertionResult> try_insert(const Route& route, int request_id, RouteScheduler& scheduler,
                                          double cost_bound = std::numeric_limits<double>::infinity(),
                                          InsertionStats* stats = nullptr);
std::optional<InsertionResult> try_insert(const Route& route, int request_id, const Scenario& scenario);

// Removes both stops of request_id and reschedules. Throws std::invalid_argument if the request is
// not on the route; returns the infeasibility if the remaining requests no longer fit.
ScheduleResult remove_request(const Route& route, int request_id, RouteScheduler& scheduler);
ScheduleResult remove_request(const Route& route, int request_id, const Scenario& scenario);

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

// Accept/reject vector plus one route per vehicle (idle vehicles keep a depot-to-depot route).
struct Solution {
    std::vector<Route> routes;
    std::vector<char> accepted;  // y_i, indexed by request id - 1
    double revenue = 0.0;
    double routing_cost = 0.0;
    double profit = 0.0;

    bool is_accepted(int request_id) const { return accepted[static_cast<std::size_t>(request_id - 1)] != 0; }
    std::vector<int> served() const;
    std::vector<int> pool() const;
    int vehicle_of(int request_id, const Instance& inst) const;
    int vehicles_used() const;
};

Solution empty_solution(const Scenario& scenario);

// Recomputes revenue and routing cost from the routes and sets profit = revenue - routing_cost.
void update_totals(Solution& sol, const Scenario& scenario);

// Fare revenue over accepted requests minus arc costs over all routes.
double objective(const Solution& sol, const Scenario& scenario);

struct FeasibilityReport {
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
    std::string summary() const;
};

// Re-verifies a solution from scratch: route structure, linkage of y with the routes, the stored
// schedule against windows, travel times, loads, ride times and duration, the chance constraint of
// every accepted request, and the profit decomposition.
FeasibilityReport check_feasible(const Solution& sol, const Scenario& scenario);

// Ride time, delay, fare and utility gap of a served request under the stored schedule.
struct RequestOutcome {
    ServiceOutcome outcome;
    double utility_gap = 0.0;
};

RequestOutcome request_outcome(const Route& route, int request_id, const Scenario& scenario);

}  // namespace ccdarp

#endif  // CCDARP_SCHEDULE_HPP
