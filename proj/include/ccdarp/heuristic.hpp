#ifndef CCDARP_HEURISTIC_HPP
#define CCDARP_HEURISTIC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ccdarp/schedule.hpp"

namespace ccdarp {

struct HeuristicParams {
    double omega = 0.1;  // weight of decentralisation in the general index
    double delta = 0.03;  // swap threshold of the ordering pass
    bool shuffle_ties = false;  // break equal earliest-time ties randomly instead of by id
    std::uint64_t rng_seed = 0;
};

// Throws ConfigError unless both weights lie in (0, 1).
void validate(const HeuristicParams& params);

// Share of the travel time from and to request i's two nodes in the instance total. Sums to 1.
std::vector<double> decentralisation_indices(const Instance& inst);
double decentralisation_index(int request_id, const Instance& inst);

// Share of request i's direct travel time in the total direct travel time. Sums to 1.
std::vector<double> travel_time_indices(const Instance& inst);
double travel_time_index(int request_id, const Instance& inst);

// G = omega (1 - D) + (1 - omega) TT.
double general_index(double decentralisation, double travel_time, double omega);
std::vector<double> general_indices(const Instance& inst, double omega);

// Earliest departure used for ordering: e_i for inbound requests, e_{n+i} - t_{i,n+i} for outbound.
double ordering_time(const Request& r, const Instance& inst);

// One backward-carry pass: each request moves ahead of its predecessor while the predecessor's
// score exceeds its own by at least delta. score is indexed by request id - 1.
void adjacent_swap_pass(std::vector<int>& order, const std::vector<double>& score, double delta);

// Requests sorted by ordering time, the |K| lowest-G requests moved to the front as seeds (in G
// order), and the remainder passed through adjacent_swap_pass.
std::vector<int> build_insertion_order(const Instance& inst, const HeuristicParams& params);

// Best insertion of request_id over all vehicles: minimum added cost, ties to the lowest vehicle.
std::optional<InsertionResult> best_insertion(const Solution& sol, int request_id, RouteScheduler& scheduler);

// Applies an insertion or a rescheduled route to sol and refreshes totals.
void apply_route(Solution& sol, Route route, const Scenario& scenario);

struct Construction {
    Solution solution;
    std::vector<int> order;  // insertion order used, seeds first
    int seeded = 0;          // vehicles that received a seed
};

Construction construct_initial(const Scenario& scenario, const HeuristicParams& params = {});

// Moves need to gain more than this to count as an improvement.
inline constexpr double kImprovementEpsilon = 1e-9;

Solution ls_selection(const Solution& start, const Scenario& scenario);
Solution ls_routing(const Solution& start, const Scenario& scenario);

struct TraceEntry {
    int iteration = 0;
    double profit = 0.0;
    int served = 0;
    double routing_cost = 0.0;
    double revenue = 0.0;
    std::map<int, int> served_by_class;
};

struct SolveResult {
    Solution solution;
    double initial_profit = 0.0;
    std::vector<TraceEntry> trace;  // construction first, then one row per accepted outer iteration
    std::vector<int> order;
};

SolveResult solve_lsh(const Scenario& scenario, const HeuristicParams& params = {});

// Header plus one row per trace entry; class columns cover every class in the instance.
std::string trace_csv(const SolveResult& result, const Instance& inst);

}  // namespace ccdarp

#endif  // CCDARP_HEURISTIC_HPP
