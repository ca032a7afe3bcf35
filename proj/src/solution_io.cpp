#include "ccdarp/solution_io.hpp"

#include <stdexcept>

namespace ccdarp {

using nlohmann::json;

json solution_to_json(const Solution& sol, const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    json doc;
    doc["profit"] = sol.profit;
    doc["revenue"] = sol.revenue;
    doc["routing_cost"] = sol.routing_cost;
    json routes = json::array();
    for (const Route& r : sol.routes) {
        json stops = json::array();
        for (std::size_t k = 0; k < r.stops.size(); ++k) {
            stops.push_back({{"node", r.stops[k]}, {"B", r.start[k]}, {"load", r.load[k]}});
        }
        routes.push_back({{"vehicle", r.vehicle}, {"cost", r.cost}, {"stops", std::move(stops)}});
    }
    doc["routes"] = std::move(routes);
    json requests = json::array();
    for (const Request& req : inst.requests()) {
        json entry{{"id", req.id}, {"y", sol.is_accepted(req.id) ? 1 : 0}};
        if (sol.is_accepted(req.id)) {
            const int vehicle = sol.vehicle_of(req.id, inst);
            if (vehicle >= 0) {
                const RequestOutcome out = request_outcome(sol.routes[static_cast<std::size_t>(vehicle)], req.id, scenario);
                entry["vehicle"] = vehicle;
                entry["ride_time"] = out.outcome.ride_time;
                entry["schedule_delay"] = out.outcome.schedule_delay;
                entry["fare"] = out.outcome.fare;
                entry["utility_gap"] = out.utility_gap;
            }
        }
        requests.push_back(std::move(entry));
    }
    doc["requests"] = std::move(requests);
    return doc;
}

Solution solution_from_json(const json& doc, const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    try {
        Solution sol = empty_solution(scenario);
        for (const json& r : doc.at("routes")) {
            const int vehicle = r.at("vehicle").get<int>();
            if (vehicle < 0 || vehicle >= static_cast<int>(sol.routes.size())) {
                throw std::runtime_error("route for unknown vehicle " + std::to_string(vehicle));
            }
            Route route;
            route.vehicle = vehicle;
            for (const json& s : r.at("stops")) {
                route.stops.push_back(s.at("node").get<int>());
                route.start.push_back(s.at("B").get<double>());
                route.load.push_back(s.at("load").get<int>());
            }
            for (int node : route.stops) {
                if (node < 0 || node >= inst.node_count()) throw std::runtime_error("stop " + std::to_string(node) + " is not a node");
            }
            route.earliest = route.start;
            route.cost = sequence_cost(route.stops, inst);
            sol.routes[static_cast<std::size_t>(vehicle)] = std::move(route);
        }
        if (doc.contains("requests")) {
            for (const json& r : doc.at("requests")) {
                const int id = r.at("id").get<int>();
                if (id < 1 || id > inst.request_count()) throw std::runtime_error("unknown request " + std::to_string(id));
                sol.accepted[static_cast<std::size_t>(id - 1)] = r.at("y").get<int>() != 0;
            }
        } else {
            for (const Route& r : sol.routes) {
                for (int s : r.stops) {
                    if (inst.is_pickup(s)) sol.accepted[static_cast<std::size_t>(s - 1)] = 1;
                }
            }
        }
        sol.profit = doc.at("profit").get<double>();
        sol.revenue = doc.at("revenue").get<double>();
        sol.routing_cost = doc.at("routing_cost").get<double>();
        return sol;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed solution document: ") + e.what());
    }
}

}  // namespace ccdarp
