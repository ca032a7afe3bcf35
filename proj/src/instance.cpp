#include "ccdarp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ccdarp {

const char* to_string(Direction direction) {
    return direction == Direction::inbound ? "inbound" : "outbound";
}

Instance::Instance(InstanceData data) : data_(std::move(data)) {
    const auto n = data_.requests.size();
    const auto expected_nodes = 2 * n + 2;
    if (data_.nodes.size() != expected_nodes) {
        throw InstanceError("instance has " + std::to_string(data_.nodes.size()) + " nodes, expected 2n+2 = " +
                            std::to_string(expected_nodes));
    }
    if (data_.travel_time.size() != expected_nodes || data_.travel_cost.size() != expected_nodes) {
        throw InstanceError("travel matrices must be " + std::to_string(expected_nodes) + " x " +
                            std::to_string(expected_nodes));
    }
    for (std::size_t i = 0; i < data_.nodes.size(); ++i) {
        if (data_.nodes[i].id != static_cast<int>(i)) {
            throw InstanceError("node at position " + std::to_string(i) + " has id " + std::to_string(data_.nodes[i].id));
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto& r = data_.requests[k];
        const int id = static_cast<int>(k) + 1;
        if (r.id != id || r.pickup != id || r.dropoff != static_cast<int>(n) + id) {
            throw InstanceError("request at position " + std::to_string(k) + " is not numbered " + std::to_string(id));
        }
    }
}

const TimeWindow& Instance::tight_window(const Request& r) const {
    return r.direction == Direction::inbound ? node(r.pickup).window : node(r.dropoff).window;
}

Instance Instance::with_fleet(const FleetSpec& fleet) const {
    InstanceData copy = data_;
    copy.fleet = fleet;
    return Instance(std::move(copy));
}

bool Instance::operator==(const Instance& other) const {
    return data_.meta == other.data_.meta && data_.fleet == other.data_.fleet && data_.nodes == other.data_.nodes &&
           data_.requests == other.data_.requests && data_.travel_time == other.data_.travel_time &&
           data_.travel_cost == other.data_.travel_cost;
}

TimeWindow infer_outbound_pickup_window(const Request& r, const Instance& inst) {
    const auto& drop = inst.node(r.dropoff).window;
    const double horizon = inst.fleet().max_route_duration;
    TimeWindow w;
    w.earliest = std::clamp(drop.earliest - inst.direct_time(r), 0.0, horizon);
    w.latest = std::clamp(drop.latest - inst.fleet().max_ride_time, 0.0, horizon);
    w.degenerate = w.earliest > w.latest;
    return w;
}

// ---------------------------------------------------------------------------

int ValidationReport::count(Severity severity) const {
    return static_cast<int>(
        std::count_if(issues.begin(), issues.end(), [&](const ValidationIssue& i) { return i.severity == severity; }));
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    out << (passed() ? "PASS" : "FAIL") << ": " << count(Severity::error) << " error(s), " << count(Severity::warning)
        << " warning(s)\n";
    for (const auto& issue : issues) {
        const char* tag = issue.severity == Severity::error ? "error" : issue.severity == Severity::warning ? "warning" : "info";
        out << "  [" << tag << "] " << issue.message << '\n';
    }
    return out.str();
}

ValidationReport validate_instance(const Instance& inst) {
    ValidationReport report;
    auto error = [&](std::string msg) { report.issues.push_back({Severity::error, std::move(msg)}); };

    const auto& fleet = inst.fleet();
    report.issues.push_back({Severity::info, "planning horizon T = " + std::to_string(fleet.max_route_duration) +
                                                 " min (route duration bound from the instance)"});

    if (fleet.vehicles < 1) error("fleet must have at least one vehicle");
    if (fleet.capacity < 1) error("vehicle capacity must be at least 1");
    if (!(fleet.max_route_duration > 0.0)) error("maximum route duration must be positive");

    for (const auto& node : inst.nodes()) {
        if (node.window.earliest > node.window.latest) {
            error("node " + std::to_string(node.id) + " has an empty time window");
        }
        if (node.service < 0.0) error("node " + std::to_string(node.id) + " has negative service duration");
    }
    for (int depot : {inst.origin_depot(), inst.destination_depot()}) {
        const auto& node = inst.node(depot);
        if (node.load != 0 || node.service != 0.0) {
            error("depot node " + std::to_string(depot) + " must have zero load and service time");
        }
    }

    double longest_direct = 0.0;
    for (const auto& r : inst.requests()) {
        const auto id = std::to_string(r.id);
        if (inst.node(r.pickup).load != -inst.node(r.dropoff).load) {
            error("request " + id + ": pickup load does not cancel dropoff load");
        }
        if (r.load < 1) error("request " + id + ": load must be at least 1");
        if (inst.node(r.pickup).load != r.load) error("request " + id + ": pickup node load differs from request load");
        if (r.class_id < 1) error("request " + id + ": class id must be positive");
        if (r.pickup_zone.has_value() != r.dropoff_zone.has_value()) {
            error("request " + id + ": zone labels must be given for both endpoints or neither");
        }
        longest_direct = std::max(longest_direct, inst.direct_time(r));
    }
    if (fleet.max_ride_time + 1e-9 < longest_direct) {
        error("maximum ride time " + std::to_string(fleet.max_ride_time) + " is below the longest direct trip " +
              std::to_string(longest_direct));
    }

    const int size = inst.node_count();
    for (int i = 0; i < size; ++i) {
        if (inst.time(i, i) != 0.0) error("travel time t(" + std::to_string(i) + "," + std::to_string(i) + ") must be 0");
        for (int j = 0; j < size; ++j) {
            if (inst.time(i, j) < 0.0) {
                error("negative travel time t(" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }

    long violations = 0;
    std::string first;
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            if (i == j) continue;
            const double direct = inst.time(i, j);
            for (int k = 0; k < size; ++k) {
                if (k == i || k == j) continue;
                if (direct > inst.time(i, k) + inst.time(k, j) + 1e-9 * (1.0 + direct)) {
                    if (violations == 0) {
                        first = "(" + std::to_string(i) + "," + std::to_string(k) + "," + std::to_string(j) + ")";
                    }
                    ++violations;
                }
            }
        }
    }
    if (violations > 0) {
        report.issues.push_back({Severity::warning, "travel times violate the triangle inequality on " +
                                                        std::to_string(violations) + " triple(s), first " + first});
    }
    return report;
}

}  // namespace ccdarp
