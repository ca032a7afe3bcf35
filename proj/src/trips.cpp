#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccdarp/instance.hpp"

namespace ccdarp {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

// Non-empty lines, each paired with its 1-based line number.
std::vector<std::pair<int, std::string>> csv_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!trim(line).empty()) out.emplace_back(number, line);
    }
    return out;
}

double parse_number(const std::string& field, int line, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("invalid ") + what + " '" + field + "'");
    }
}

std::optional<int> optional_int(const std::vector<std::string>& fields, int column, int line, const char* what) {
    if (column < 0 || static_cast<std::size_t>(column) >= fields.size() || fields[static_cast<std::size_t>(column)].empty()) {
        return std::nullopt;
    }
    return static_cast<int>(parse_number(fields[static_cast<std::size_t>(column)], line, what));
}

}  // namespace

double parse_clock_minutes(const std::string& raw) {
    const std::string field = trim(raw);
    if (field.find(':') == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument("bad time '" + field + "'");
        return v;
    }
    std::vector<double> parts;
    std::istringstream in(field);
    std::string part;
    while (std::getline(in, part, ':')) {
        std::size_t used = 0;
        parts.push_back(std::stod(part, &used));
        if (used != part.size()) throw std::invalid_argument("bad time '" + field + "'");
    }
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("bad time '" + field + "'");
    double minutes = parts[0] * 60.0 + parts[1];
    if (parts.size() == 3) minutes += parts[2] / 60.0;
    return minutes;
}

std::vector<TripRecord> parse_trip_csv(const std::string& text) {
    const auto lines = csv_lines(text);
    if (lines.empty()) throw ParseError(1, "trip file has no header");

    const auto header = split_csv_line(lines.front().second);
    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    const int c_pick = column("pickup_id");
    const int c_drop = column("dropoff_id");
    const int c_pax = column("passengers");
    const int c_tp = column("pickup_time");
    const int c_td = column("dropoff_time");
    for (auto [col, name] : {std::pair{c_pick, "pickup_id"}, {c_drop, "dropoff_id"}, {c_pax, "passengers"},
                             {c_tp, "pickup_time"}, {c_td, "dropoff_time"}}) {
        if (col < 0) throw ParseError(lines.front().first, std::string("missing column ") + name);
    }
    const int c_pz = column("pickup_zone");
    const int c_dz = column("dropoff_zone");
    const int c_class = column("class_id");

    std::vector<TripRecord> records;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [number, line] = lines[k];
        const auto fields = split_csv_line(line);
        const auto required = static_cast<std::size_t>(std::max({c_pick, c_drop, c_pax, c_tp, c_td}));
        if (fields.size() <= required) throw ParseError(number, "too few fields");
        TripRecord rec;
        rec.pickup_id = fields[static_cast<std::size_t>(c_pick)];
        rec.dropoff_id = fields[static_cast<std::size_t>(c_drop)];
        rec.passengers = static_cast<int>(parse_number(fields[static_cast<std::size_t>(c_pax)], number, "passengers"));
        try {
            rec.pickup_time = parse_clock_minutes(fields[static_cast<std::size_t>(c_tp)]);
            rec.dropoff_time = parse_clock_minutes(fields[static_cast<std::size_t>(c_td)]);
        } catch (const std::exception& e) {
            throw ParseError(number, e.what());
        }
        rec.pickup_zone = optional_int(fields, c_pz, number, "pickup_zone");
        rec.dropoff_zone = optional_int(fields, c_dz, number, "dropoff_zone");
        rec.class_id = optional_int(fields, c_class, number, "class_id");
        records.push_back(std::move(rec));
    }
    return records;
}

std::map<std::pair<std::string, std::string>, double> parse_travel_time_csv(const std::string& text) {
    const auto lines = csv_lines(text);
    std::map<std::pair<std::string, std::string>, double> out;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [number, line] = lines[k];
        const auto fields = split_csv_line(line);
        if (fields.size() < 3) throw ParseError(number, "travel time rows need from,to,minutes");
        out[{fields[0], fields[1]}] = parse_number(fields[2], number, "travel time");
    }
    return out;
}

IngestResult ingest_trips(const std::vector<TripRecord>& records, const IngestConfig& config) {
    std::vector<RejectedRow> rejected;
    std::vector<const TripRecord*> kept;
    for (std::size_t k = 0; k < records.size(); ++k) {
        if (records[k].passengers <= 0) {
            rejected.push_back({static_cast<int>(k) + 1, "non-positive passenger count"});
            continue;
        }
        kept.push_back(&records[k]);
    }
    if (kept.empty()) throw InstanceError("no requests");

    const int n = static_cast<int>(kept.size());
    const auto size = static_cast<std::size_t>(2 * n + 2);
    const double end = config.horizon_end - config.horizon_start;

    std::vector<std::string> location(size);
    for (int i = 1; i <= n; ++i) {
        location[static_cast<std::size_t>(i)] = kept[static_cast<std::size_t>(i - 1)]->pickup_id;
        location[static_cast<std::size_t>(n + i)] = kept[static_cast<std::size_t>(i - 1)]->dropoff_id;
    }

    InstanceData data;
    data.meta = {config.name, "trips"};
    data.fleet = config.fleet;
    data.travel_time = SquareMatrix(size);
    data.travel_cost = SquareMatrix(size);
    for (std::size_t i = 1; i + 1 < size; ++i) {
        for (std::size_t j = 1; j + 1 < size; ++j) {
            double t = 0.0;
            if (location[i] != location[j]) {
                const auto it = config.travel_times.find({location[i], location[j]});
                if (it == config.travel_times.end()) {
                    throw InstanceError("missing travel time from '" + location[i] + "' to '" + location[j] + "'");
                }
                t = it->second;
            }
            data.travel_time(i, j) = t;
            data.travel_cost(i, j) = config.cost_per_minute * t;
        }
        // The depot is artificial: zero travel time, a fixed dispatch cost and free return.
        data.travel_cost(0, i) = config.depot_cost;
    }

    auto window_around = [&](double recorded) -> TimeWindow {
        const double at = recorded - config.horizon_start;
        if (config.anchor == WindowAnchor::anchored) return {at, at + config.window_width};
        return {at - config.window_width / 2.0, at + config.window_width / 2.0};
    };
    const TimeWindow open{0.0, end};

    data.nodes.resize(size);
    for (std::size_t k = 0; k < size; ++k) {
        data.nodes[k].id = static_cast<int>(k);
        data.nodes[k].window = open;
    }
    for (int i = 1; i <= n; ++i) {
        const auto& rec = *kept[static_cast<std::size_t>(i - 1)];
        auto& pick = data.nodes[static_cast<std::size_t>(i)];
        auto& drop = data.nodes[static_cast<std::size_t>(n + i)];
        pick.load = rec.passengers;
        drop.load = -rec.passengers;
        pick.service = drop.service = config.service_time;
        pick.zone = rec.pickup_zone;
        drop.zone = rec.dropoff_zone;

        Request r;
        r.id = i;
        r.pickup = i;
        r.dropoff = n + i;
        r.load = rec.passengers;
        r.direction = (i % 2 == 1) ? Direction::inbound : Direction::outbound;
        if (r.direction == Direction::inbound) {
            pick.window = window_around(rec.pickup_time);
        } else {
            drop.window = window_around(rec.dropoff_time);
        }
        switch (config.class_rule) {
            case ClassRule::column: r.class_id = rec.class_id.value_or(1); break;
            case ClassRule::dropoff_zone:
                if (!rec.dropoff_zone) throw InstanceError("request " + std::to_string(i) + " has no dropoff zone for its class");
                r.class_id = *rec.dropoff_zone;
                break;
            case ClassRule::single: r.class_id = 1; break;
        }
        r.pickup_zone = rec.pickup_zone;
        r.dropoff_zone = rec.dropoff_zone;
        const double direct = data.travel_time(static_cast<std::size_t>(i), static_cast<std::size_t>(n + i));
        r.direct_distance = direct;
        r.private_cost = config.private_cost_fixed + config.private_cost_per_minute * direct;
        data.requests.push_back(r);
    }
    return {Instance(std::move(data)), std::move(rejected)};
}

}  // namespace ccdarp
