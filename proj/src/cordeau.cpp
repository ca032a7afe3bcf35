#include <cmath>
#include <sstream>
#include <vector>

#include "ccdarp/instance.hpp"

namespace ccdarp {

ParseError::ParseError(int line, const std::string& what)
    : InstanceError("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

struct NumberedLine {
    int number;
    std::vector<double> values;
};

std::vector<NumberedLine> tokenize(const std::string& text) {
    std::vector<NumberedLine> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::istringstream fields(raw);
        std::vector<double> values;
        std::string token;
        while (fields >> token) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(token, &used));
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw ParseError(number, "not a number: '" + token + "'");
            }
        }
        if (!values.empty()) lines.push_back({number, std::move(values)});
    }
    return lines;
}

int as_int(double v, int line, const char* what) {
    if (std::floor(v) != v) throw ParseError(line, std::string(what) + " must be an integer");
    return static_cast<int>(v);
}

}  // namespace

Instance parse_cordeau(const std::string& text, const CordeauOptions& options) {
    const auto lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, "empty benchmark file");

    const auto& header = lines.front();
    if (header.values.size() < 5) {
        throw ParseError(header.number, "header needs vehicles, requests, route duration, capacity, ride time");
    }
    InstanceData data;
    data.meta.name = options.name;
    data.meta.source = "cordeau";
    data.fleet.vehicles = as_int(header.values[0], header.number, "vehicle count");
    const int n = as_int(header.values[1], header.number, "request count");
    data.fleet.max_route_duration = header.values[2];
    data.fleet.capacity = as_int(header.values[3], header.number, "capacity");
    data.fleet.max_ride_time = header.values[4];
    if (n < 0) throw ParseError(header.number, "negative request count");

    const std::size_t node_lines = lines.size() - 1;
    const std::size_t expected = 2 * static_cast<std::size_t>(n) + 2;
    if (node_lines != expected) {
        const int at = node_lines > expected ? lines[expected + 1].number : lines.back().number;
        throw ParseError(at, "found " + std::to_string(node_lines) + " node lines, expected 2n+2 = " +
                                 std::to_string(expected));
    }

    for (std::size_t k = 0; k < expected; ++k) {
        const auto& line = lines[k + 1];
        if (line.values.size() != 7) throw ParseError(line.number, "node line needs 7 fields: id x y d q e l");
        Node node;
        node.id = as_int(line.values[0], line.number, "node id");
        if (node.id != static_cast<int>(k)) {
            throw ParseError(line.number, "node id " + std::to_string(node.id) + " out of sequence, expected " +
                                              std::to_string(k));
        }
        node.x = line.values[1];
        node.y = line.values[2];
        node.service = line.values[3];
        node.load = as_int(line.values[4], line.number, "load");
        node.window = {line.values[5], line.values[6]};
        data.nodes.push_back(node);
    }

    const std::size_t size = expected;
    data.travel_time = SquareMatrix(size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            data.travel_time(i, j) = std::hypot(data.nodes[i].x - data.nodes[j].x, data.nodes[i].y - data.nodes[j].y);
        }
    }
    data.travel_cost = data.travel_time;
    // Idle vehicles travel depot to depot for free.
    data.travel_cost(0, size - 1) = 0.0;

    const double horizon = data.fleet.max_route_duration;
    for (int i = 1; i <= n; ++i) {
        const auto& pick = data.nodes[static_cast<std::size_t>(i)];
        const auto& drop = data.nodes[static_cast<std::size_t>(n + i)];
        if (pick.load != -drop.load) {
            throw ParseError(lines[static_cast<std::size_t>(n + i) + 1].number,
                             "load of node " + std::to_string(n + i) + " does not cancel pickup " + std::to_string(i));
        }
        if (pick.load < 1) {
            throw ParseError(lines[static_cast<std::size_t>(i) + 1].number, "pickup load must be at least 1");
        }
        Request r;
        r.id = i;
        r.pickup = i;
        r.dropoff = n + i;
        r.load = pick.load;
        r.class_id = options.class_id;
        r.direct_distance = data.travel_time(static_cast<std::size_t>(i), static_cast<std::size_t>(n + i));
        r.private_cost = options.private_cost(r.direct_distance);
        const bool pickup_tight = pick.window.width() < horizon;
        const bool dropoff_tight = drop.window.width() < horizon;
        r.direction = (dropoff_tight && !pickup_tight) ? Direction::outbound : Direction::inbound;
        data.requests.push_back(r);
    }
    return Instance(std::move(data));
}

}  // namespace ccdarp
