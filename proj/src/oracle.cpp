#include "ccdarp/oracle.hpp"

#include <optional>
#include <vector>

#include <fmt/format.h>

namespace ccdarp {

namespace {

// Cheapest feasible route over all stop orders of the requests in mask.
class SubsetRouter {
public:
    explicit SubsetRouter(const Scenario& scenario) : scenario_(scenario), scheduler_(scenario) {}

    std::optional<Route> best(unsigned mask) {
        const Instance& inst = scenario_.instance();
        best_.reset();
        seq_.assign(1, inst.origin_depot());
        picked_ = 0;
        dropped_ = 0;
        mask_ = mask;
        extend();
        return best_;
    }

private:
    void extend() {
        const Instance& inst = scenario_.instance();
        const int n = inst.request_count();
        if (dropped_ == mask_) {
            seq_.push_back(inst.destination_depot());
            auto res = build_schedule(0, seq_, scheduler_);
            if (auto* route = std::get_if<Route>(&res); route && (!best_ || route->cost < best_->cost)) best_ = *route;
            seq_.pop_back();
            return;
        }
        // Pickups first, then dropoffs, each by request id: lexicographic in node id.
        for (int i = 1; i <= n; ++i) {
            const unsigned bit = 1u << (i - 1);
            if (!(mask_ & bit) || (picked_ & bit)) continue;
            picked_ |= bit;
            seq_.push_back(i);
            extend();
            seq_.pop_back();
            picked_ &= ~bit;
        }
        for (int i = 1; i <= n; ++i) {
            const unsigned bit = 1u << (i - 1);
            if (!(picked_ & bit) || (dropped_ & bit)) continue;
            dropped_ |= bit;
            seq_.push_back(n + i);
            extend();
            seq_.pop_back();
            dropped_ &= ~bit;
        }
    }

    const Scenario& scenario_;
    RouteScheduler scheduler_;
    std::vector<int> seq_;
    unsigned picked_ = 0;
    unsigned dropped_ = 0;
    unsigned mask_ = 0;
    std::optional<Route> best_;
};

}  // namespace

Solution brute_force_exact(const Scenario& scenario, const OracleLimits& limits) {
    const Instance& inst = scenario.instance();
    const int n = inst.request_count();
    const int vehicles = inst.fleet().vehicles;
    if (n > limits.n_max || vehicles > limits.k_max) {
        throw OracleLimitError(fmt::format("instance too large for exhaustive search: n = {} (limit {}), |K| = {} (limit {})",
                                           n, limits.n_max, vehicles, limits.k_max));
    }

    const unsigned subsets = 1u << n;
    SubsetRouter router(scenario);
    std::vector<std::optional<Route>> route(subsets);
    for (unsigned mask = 0; mask < subsets; ++mask) route[mask] = router.best(mask);

    // best[v][mask]: cheapest way to serve exactly mask with v vehicles, as per-vehicle subsets.
    std::vector<std::vector<std::optional<double>>> cost(static_cast<std::size_t>(vehicles) + 1,
                                                          std::vector<std::optional<double>>(subsets));
    std::vector<std::vector<unsigned>> first_part(static_cast<std::size_t>(vehicles) + 1, std::vector<unsigned>(subsets, 0));
    cost[0][0] = 0.0;
    for (int v = 1; v <= vehicles; ++v) {
        for (unsigned mask = 0; mask < subsets; ++mask) {
            // The v-th vehicle takes sub; the remaining v-1 vehicles cover mask \ sub.
            for (unsigned sub = mask;; sub = (sub - 1) & mask) {
                const auto& rest = cost[static_cast<std::size_t>(v - 1)][mask & ~sub];
                if (route[sub] && rest) {
                    const double c = *rest + route[sub]->cost;
                    auto& slot = cost[static_cast<std::size_t>(v)][mask];
                    if (!slot || c < *slot) {
                        slot = c;
                        first_part[static_cast<std::size_t>(v)][mask] = sub;
                    }
                }
                if (sub == 0) break;
            }
        }
    }

    const auto& full = cost[static_cast<std::size_t>(vehicles)];
    std::optional<unsigned> best_mask;
    double best_profit = 0.0;
    for (unsigned mask = 0; mask < subsets; ++mask) {
        if (!full[mask]) continue;
        double revenue = 0.0;
        for (int i = 1; i <= n; ++i) {
            if (mask & (1u << (i - 1))) revenue += scenario.terms(i).revenue;
        }
        const double profit = revenue - *full[mask];
        if (!best_mask || profit > best_profit) {
            best_mask = mask;
            best_profit = profit;
        }
    }

    // The empty plan is always feasible (empty_solution throws otherwise), so best_mask is set.
    Solution sol = empty_solution(scenario);
    unsigned mask = *best_mask;
    for (int v = vehicles; v >= 1; --v) {
        const unsigned sub = first_part[static_cast<std::size_t>(v)][mask];
        Route r = *route[sub];
        r.vehicle = v - 1;
        sol.routes[static_cast<std::size_t>(v - 1)] = std::move(r);
        mask &= ~sub;
    }
    for (int i = 1; i <= n; ++i) sol.accepted[static_cast<std::size_t>(i - 1)] = (*best_mask >> (i - 1)) & 1u;
    update_totals(sol, scenario);
    return sol;
}

}  // namespace ccdarp
