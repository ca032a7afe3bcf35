#include "ccdarp/heuristic.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "ccdarp/generator.hpp"

namespace ccdarp {

void validate(const HeuristicParams& params) {
    if (!(params.omega > 0.0 && params.omega < 1.0)) throw ConfigError("heuristic omega must lie in (0, 1)");
    if (!(params.delta > 0.0 && params.delta < 1.0)) throw ConfigError("heuristic delta must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Ordering indices
// ---------------------------------------------------------------------------

std::vector<double> decentralisation_indices(const Instance& inst) {
    const int n = inst.request_count();
    const int nodes = inst.node_count();
    std::vector<double> raw(static_cast<std::size_t>(n), 0.0);
    for (const Request& r : inst.requests()) {
        double sum = 0.0;
        for (int j = 0; j < nodes; ++j) {
            if (j == r.pickup || j == r.dropoff) continue;
            sum += inst.time(r.pickup, j) + inst.time(r.dropoff, j);
        }
        raw[static_cast<std::size_t>(r.id - 1)] = sum;
    }
    const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    for (double& d : raw) d = total > 0.0 ? d / total : 1.0 / n;
    return raw;
}

double decentralisation_index(int request_id, const Instance& inst) {
    return decentralisation_indices(inst)[static_cast<std::size_t>(request_id - 1)];
}

std::vector<double> travel_time_indices(const Instance& inst) {
    const int n = inst.request_count();
    std::vector<double> tt(static_cast<std::size_t>(n), 0.0);
    for (const Request& r : inst.requests()) tt[static_cast<std::size_t>(r.id - 1)] = inst.direct_time(r);
    const double total = std::accumulate(tt.begin(), tt.end(), 0.0);
    for (double& v : tt) v = total > 0.0 ? v / total : 1.0 / n;
    return tt;
}

double travel_time_index(int request_id, const Instance& inst) {
    return travel_time_indices(inst)[static_cast<std::size_t>(request_id - 1)];
}

double general_index(double decentralisation, double travel_time, double omega) {
    return omega * (1.0 - decentralisation) + (1.0 - omega) * travel_time;
}

std::vector<double> general_indices(const Instance& inst, double omega) {
    const auto d = decentralisation_indices(inst);
    const auto tt = travel_time_indices(inst);
    std::vector<double> g(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) g[i] = general_index(d[i], tt[i], omega);
    return g;
}

double ordering_time(const Request& r, const Instance& inst) {
    if (r.direction == Direction::inbound) return inst.node(r.pickup).window.earliest;
    return inst.node(r.dropoff).window.earliest - inst.direct_time(r);
}

void adjacent_swap_pass(std::vector<int>& order, const std::vector<double>& score, double delta) {
    auto g = [&](int id) { return score[static_cast<std::size_t>(id - 1)]; };
    for (std::size_t i = 1; i < order.size(); ++i) {
        for (std::size_t j = i; j > 0 && g(order[j - 1]) - g(order[j]) >= delta; --j) {
            std::swap(order[j - 1], order[j]);
        }
    }
}

std::vector<int> build_insertion_order(const Instance& inst, const HeuristicParams& params) {
    const int n = inst.request_count();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    std::vector<double> key(static_cast<std::size_t>(n));
    for (const Request& r : inst.requests()) key[static_cast<std::size_t>(r.id - 1)] = ordering_time(r, inst);
    std::vector<std::uint64_t> tie(static_cast<std::size_t>(n));
    std::iota(tie.begin(), tie.end(), 0);
    if (params.shuffle_ties) {
        Rng rng(params.rng_seed);
        for (auto& t : tie) t = static_cast<std::uint64_t>(rng.uniform() * 0x1.0p53);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ia = static_cast<std::size_t>(a - 1);
        const auto ib = static_cast<std::size_t>(b - 1);
        if (key[ia] != key[ib]) return key[ia] < key[ib];
        if (tie[ia] != tie[ib]) return tie[ia] < tie[ib];
        return a < b;
    });

    const auto g = general_indices(inst, params.omega);
    const auto seeds = static_cast<std::size_t>(std::min(inst.fleet().vehicles, n));
    // Stable on the time-sorted order, so equal scores keep their earliest-time order.
    std::vector<int> ranked = order;
    std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
        return g[static_cast<std::size_t>(a - 1)] < g[static_cast<std::size_t>(b - 1)];
    });
    std::vector<int> seed_ids(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(seeds));
    std::vector<int> rest;
    rest.reserve(order.size() - seeds);
    for (int id : order) {
        if (std::find(seed_ids.begin(), seed_ids.end(), id) == seed_ids.end()) rest.push_back(id);
    }
    adjacent_swap_pass(rest, g, params.delta);
    seed_ids.insert(seed_ids.end(), rest.begin(), rest.end());
    return seed_ids;
}

// ---------------------------------------------------------------------------
// Search state
// ---------------------------------------------------------------------------

std::optional<InsertionResult> best_insertion(const Solution& sol, int request_id, RouteScheduler& scheduler) {
    std::optional<InsertionResult> best;
    bool idle_seen = false;
    for (const Route& r : sol.routes) {
        if (r.idle()) {
            if (idle_seen) continue;  // idle vehicles are interchangeable
            idle_seen = true;
        }
        auto ins = try_insert(r, request_id, scheduler);
        if (ins && (!best || ins->delta_cost < best->delta_cost)) best = std::move(ins);
    }
    return best;
}

void apply_route(Solution& sol, Route route, const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    Route& slot = sol.routes[static_cast<std::size_t>(route.vehicle)];
    for (int s : slot.stops) {
        if (inst.is_pickup(s)) sol.accepted[static_cast<std::size_t>(s - 1)] = 0;
    }
    slot = std::move(route);
    for (int s : slot.stops) {
        if (inst.is_pickup(s)) sol.accepted[static_cast<std::size_t>(s - 1)] = 1;
    }
    update_totals(sol, scenario);
}

namespace {

// Solution plus per-vehicle versions and caches of insertion and removal results keyed on them.
class Search {
public:
    Search(const Scenario& scenario, Solution sol)
        : scenario_(scenario), sol_(std::move(sol)), scheduler_(scenario) {
        const auto n = static_cast<std::size_t>(scenario.instance().request_count());
        const auto k = sol_.routes.size();
        version_.resize(k);
        for (auto& v : version_) v = next_version_++;
        insert_cache_.assign(n * k, {});
        remove_cache_.assign(n, {});
        owner_.assign(n, -1);
        for (const Route& r : sol_.routes) {
            for (int s : r.stops) {
                if (scenario.instance().is_pickup(s)) owner_[static_cast<std::size_t>(s - 1)] = r.vehicle;
            }
        }
    }

    const Solution& solution() const { return sol_; }
    Solution take() { return std::move(sol_); }
    RouteScheduler& scheduler() { return scheduler_; }
    int owner(int id) const { return owner_[static_cast<std::size_t>(id - 1)]; }
    double revenue(int id) const { return scenario_.terms(id).revenue; }
    const Route& route(int vehicle) const { return sol_.routes[static_cast<std::size_t>(vehicle)]; }

    const std::optional<InsertionResult>& insertion(int id, int vehicle) {
        auto& e = insert_cache_[static_cast<std::size_t>(id - 1) * version_.size() + static_cast<std::size_t>(vehicle)];
        if (e.version != version_[static_cast<std::size_t>(vehicle)]) {
            e.version = version_[static_cast<std::size_t>(vehicle)];
            e.result = try_insert(route(vehicle), id, scheduler_);
        }
        return e.result;
    }

    // Cheapest insertion over all vehicles except `skip`; ties go to the lowest vehicle index.
    const InsertionResult* best_over(int id, int skip) {
        const InsertionResult* best = nullptr;
        bool idle_seen = false;
        for (int k = 0; k < static_cast<int>(version_.size()); ++k) {
            if (k == skip) continue;
            if (route(k).idle()) {
                if (idle_seen) continue;
                idle_seen = true;
            }
            const auto& ins = insertion(id, k);
            if (ins && (!best || ins->delta_cost < best->delta_cost)) best = &*ins;
        }
        return best;
    }

    // Route of the request's vehicle without it, or nullptr when the rest no longer fits.
    const Route* removal(int id) {
        const int k = owner(id);
        auto& e = remove_cache_[static_cast<std::size_t>(id - 1)];
        if (e.version != version_[static_cast<std::size_t>(k)]) {
            e.version = version_[static_cast<std::size_t>(k)];
            auto res = remove_request(route(k), id, scheduler_);
            e.route = std::holds_alternative<Route>(res) ? std::optional<Route>(std::get<Route>(std::move(res)))
                                                         : std::nullopt;
        }
        return e.route ? &*e.route : nullptr;
    }

    void set_route(Route r) {
        const Instance& inst = scenario_.instance();
        const int k = r.vehicle;
        for (int s : route(k).stops) {
            if (inst.is_pickup(s)) owner_[static_cast<std::size_t>(s - 1)] = -1;
        }
        for (int s : r.stops) {
            if (inst.is_pickup(s)) owner_[static_cast<std::size_t>(s - 1)] = k;
        }
        apply_route(sol_, std::move(r), scenario_);
        version_[static_cast<std::size_t>(k)] = next_version_++;
    }

private:
    struct InsertEntry {
        std::uint64_t version = 0;
        std::optional<InsertionResult> result;
    };
    struct RemoveEntry {
        std::uint64_t version = 0;
        std::optional<Route> route;
    };

    const Scenario& scenario_;
    Solution sol_;
    RouteScheduler scheduler_;
    std::uint64_t next_version_ = 1;
    std::vector<std::uint64_t> version_;
    std::vector<InsertEntry> insert_cache_;
    std::vector<RemoveEntry> remove_cache_;
    std::vector<int> owner_;
};

// Step one of the selection search: best ADD or REM until neither improves.
bool add_remove_descent(Search& s) {
    bool improved = false;
    while (true) {
        double best_gain = kImprovementEpsilon;
        std::optional<Route> first;
        std::optional<Route> second;
        const Solution& sol = s.solution();
        for (int id : sol.pool()) {
            const InsertionResult* ins = s.best_over(id, -1);
            if (!ins) continue;
            const double gain = s.revenue(id) - ins->delta_cost;
            if (gain > best_gain) {
                best_gain = gain;
                first = ins->route;
            }
        }
        for (int id : sol.served()) {
            const Route* rem = s.removal(id);
            if (!rem) continue;
            const double gain = s.route(rem->vehicle).cost - rem->cost - s.revenue(id);
            if (gain > best_gain) {
                best_gain = gain;
                first = *rem;
            }
        }
        if (!first) return improved;
        s.set_route(std::move(*first));
        improved = true;
    }
}

// Step two: best SWAP of a served request for a pooled one until none improves.
bool swap_descent(Search& s) {
    bool improved = false;
    while (true) {
        double best_gain = kImprovementEpsilon;
        std::optional<Route> removed;
        std::optional<Route> inserted;
        const Solution& sol = s.solution();
        const auto pool = sol.pool();
        for (int i : sol.served()) {
            const Route* rem = s.removal(i);
            if (!rem) continue;
            const int k = rem->vehicle;
            const double saving = s.route(k).cost - rem->cost;
            for (int j : pool) {
                const double base = s.revenue(j) - s.revenue(i) + saving;
                const InsertionResult* other = s.best_over(j, k);
                auto own = try_insert(*rem, j, s.scheduler(), base - best_gain);
                const InsertionResult* pick = other;
                if (own && (!pick || own->delta_cost < pick->delta_cost ||
                            (own->delta_cost == pick->delta_cost && k < pick->vehicle))) {
                    pick = &*own;
                }
                if (!pick) continue;
                const double gain = base - pick->delta_cost;
                if (gain > best_gain) {
                    best_gain = gain;
                    if (pick->vehicle == k) {
                        removed.reset();
                    } else {
                        removed = *rem;
                    }
                    inserted = pick->route;
                }
            }
        }
        if (!inserted) return improved;
        if (removed) s.set_route(std::move(*removed));
        s.set_route(std::move(*inserted));
        improved = true;
    }
}

}  // namespace

Solution ls_selection(const Solution& start, const Scenario& scenario) {
    Search s(scenario, start);
    while (true) {
        add_remove_descent(s);
        if (!swap_descent(s)) break;
    }
    return s.take();
}

Solution ls_routing(const Solution& start, const Scenario& scenario) {
    Search s(scenario, start);
    while (true) {
        double best_gain = kImprovementEpsilon;
        std::optional<Route> removed;
        std::optional<Route> inserted;
        for (int i : s.solution().served()) {
            const Route* rem = s.removal(i);
            if (!rem) continue;
            const int k = rem->vehicle;
            const double saving = s.route(k).cost - rem->cost;
            if (const InsertionResult* ra = s.best_over(i, k)) {
                const double gain = saving - ra->delta_cost;
                if (gain > best_gain) {
                    best_gain = gain;
                    removed = *rem;
                    inserted = ra->route;
                }
                continue;
            }
            // No other vehicle can take the request: look for a better slot in its own route.
            auto ri = try_insert(*rem, i, s.scheduler(), saving - best_gain);
            if (ri) {
                const double gain = saving - ri->delta_cost;
                if (gain > best_gain) {
                    best_gain = gain;
                    removed.reset();
                    inserted = std::move(ri->route);
                }
            }
        }
        if (!inserted) break;
        if (removed) s.set_route(std::move(*removed));
        s.set_route(std::move(*inserted));
    }
    return s.take();
}

Construction construct_initial(const Scenario& scenario, const HeuristicParams& params) {
    validate(params);
    const Instance& inst = scenario.instance();
    Construction out;
    out.order = build_insertion_order(inst, params);
    Search s(scenario, empty_solution(scenario));

    const auto seeds = static_cast<std::size_t>(std::min(inst.fleet().vehicles, inst.request_count()));
    std::vector<int> remaining;
    int vehicle = 0;
    for (std::size_t i = 0; i < seeds; ++i) {
        const int id = out.order[i];
        const auto& ins = s.insertion(id, vehicle);
        if (ins) {
            s.set_route(ins->route);
            ++vehicle;
        } else {
            remaining.push_back(id);
        }
    }
    out.seeded = vehicle;
    remaining.insert(remaining.end(), out.order.begin() + static_cast<std::ptrdiff_t>(seeds), out.order.end());
    for (int id : remaining) {
        if (const InsertionResult* ins = s.best_over(id, -1)) s.set_route(ins->route);
    }
    out.solution = s.take();
    return out;
}

namespace {

TraceEntry trace_entry(int iteration, const Solution& sol, const Instance& inst) {
    TraceEntry e;
    e.iteration = iteration;
    e.profit = sol.profit;
    e.routing_cost = sol.routing_cost;
    e.revenue = sol.revenue;
    for (const Request& r : inst.requests()) e.served_by_class.try_emplace(r.class_id, 0);
    for (int id : sol.served()) {
        ++e.served;
        ++e.served_by_class[inst.request(id).class_id];
    }
    return e;
}

}  // namespace

SolveResult solve_lsh(const Scenario& scenario, const HeuristicParams& params) {
    const Instance& inst = scenario.instance();
    Construction c = construct_initial(scenario, params);
    SolveResult out;
    out.order = std::move(c.order);
    out.initial_profit = c.solution.profit;
    out.solution = std::move(c.solution);
    out.trace.push_back(trace_entry(0, out.solution, inst));
    for (int iteration = 1;; ++iteration) {
        Solution next = ls_routing(ls_selection(out.solution, scenario), scenario);
        if (!(next.profit > out.solution.profit + kImprovementEpsilon)) break;
        out.solution = std::move(next);
        out.trace.push_back(trace_entry(iteration, out.solution, inst));
    }
    return out;
}

std::string trace_csv(const SolveResult& result, const Instance& inst) {
    std::vector<int> classes;
    for (const Request& r : inst.requests()) classes.push_back(r.class_id);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    std::string out = "iteration,profit,served,routing_cost,revenue";
    for (int c : classes) out += fmt::format(",served_class_{}", c);
    out += '\n';
    for (const TraceEntry& e : result.trace) {
        out += fmt::format("{},{},{},{},{}", e.iteration, e.profit, e.served, e.routing_cost, e.revenue);
        for (int c : classes) {
            const auto it = e.served_by_class.find(c);
            out += fmt::format(",{}", it == e.served_by_class.end() ? 0 : it->second);
        }
        out += '\n';
    }
    return out;
}

}  // namespace ccdarp
