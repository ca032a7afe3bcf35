#include "ccdarp/generator.hpp"

#include <algorithm>
#include <cmath>

namespace ccdarp {

namespace {

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

Instance generate_instance(const GeneratorConfig& config) {
    Rng rng(config.seed);
    const int n = config.requests;
    const auto size = static_cast<std::size_t>(2 * n + 2);

    InstanceData data;
    data.meta = {config.name, "generated"};
    data.fleet = {config.vehicles, config.capacity, config.max_route_duration, config.max_ride_time};
    data.nodes.resize(size);
    for (std::size_t k = 0; k < size; ++k) {
        auto& node = data.nodes[k];
        node.id = static_cast<int>(k);
        node.window = {0.0, config.open_latest};
        if (k != 0 && k + 1 != size) {
            // Three decimals, as in the published files, so text exports parse back identically.
            node.x = round_to(rng.uniform(-config.half_extent, config.half_extent), 0.001);
            node.y = round_to(rng.uniform(-config.half_extent, config.half_extent), 0.001);
            node.service = config.service_time;
        }
    }

    auto zone_of = [&](const Node& node) {
        const double frac = (node.x + config.half_extent) / (2.0 * config.half_extent);
        return 1 + std::clamp(static_cast<int>(frac * config.zones), 0, config.zones - 1);
    };

    for (int i = 1; i <= n; ++i) {
        auto& pick = data.nodes[static_cast<std::size_t>(i)];
        auto& drop = data.nodes[static_cast<std::size_t>(n + i)];
        const int load = rng.integer(1, config.max_load);
        pick.load = load;
        drop.load = -load;

        Request r;
        r.id = i;
        r.pickup = i;
        r.dropoff = n + i;
        r.load = load;
        r.direction = i <= n / 2 ? Direction::outbound : Direction::inbound;
        if (r.direction == Direction::outbound) {
            const double latest = std::floor(rng.uniform(60.0, config.horizon));
            drop.window = {latest - config.window_width, latest};
        } else {
            const double earliest = std::floor(rng.uniform(0.0, config.horizon - 60.0));
            pick.window = {earliest, earliest + config.window_width};
        }
        r.class_id = config.classes > 1 ? rng.integer(1, config.classes) : 1;
        if (config.zones > 0) {
            pick.zone = zone_of(pick);
            drop.zone = zone_of(drop);
            r.pickup_zone = pick.zone;
            r.dropoff_zone = drop.zone;
        }
        data.requests.push_back(r);
    }

    data.travel_time = SquareMatrix(size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            data.travel_time(i, j) = std::hypot(data.nodes[i].x - data.nodes[j].x, data.nodes[i].y - data.nodes[j].y);
        }
    }
    data.travel_cost = data.travel_time;
    data.travel_cost(0, size - 1) = 0.0;
    for (auto& r : data.requests) {
        r.direct_distance = data.travel_time(static_cast<std::size_t>(r.pickup), static_cast<std::size_t>(r.dropoff));
        r.private_cost = config.private_cost(r.direct_distance);
    }
    return Instance(std::move(data));
}

std::vector<GeneratorConfig> benchmark_suite(std::uint64_t seed) {
    const std::pair<int, int> sizes[] = {{2, 16}, {2, 20}, {2, 24}, {3, 18}, {3, 24}, {3, 36}, {4, 16}, {4, 32},
                                         {4, 40}, {4, 48}, {5, 50}, {6, 60}, {6, 72}, {7, 84}, {8, 96}};
    std::vector<GeneratorConfig> suite;
    for (const auto& [vehicles, requests] : sizes) {
        GeneratorConfig c;
        c.name = "a" + std::to_string(vehicles) + "-" + std::to_string(requests);
        c.vehicles = vehicles;
        c.requests = requests;
        c.seed = seed + static_cast<std::uint64_t>(vehicles * 1000 + requests);
        suite.push_back(c);
    }
    return suite;
}

}  // namespace ccdarp
