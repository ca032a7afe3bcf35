#include "ccdarp/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace ccdarp {

using nlohmann::json;

namespace {

json matrix_to_json(const SquareMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        rows.push_back(std::vector<double>(m.row(i), m.row(i) + m.size()));
    }
    return rows;
}

SquareMatrix matrix_from_json(const json& rows, const char* key) {
    if (!rows.is_array()) throw InstanceError(std::string(key) + " must be an array of rows");
    SquareMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != rows.size()) {
            throw InstanceError(std::string(key) + " row " + std::to_string(i) + " has the wrong length");
        }
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

}  // namespace

json instance_to_json(const Instance& inst) {
    json doc;
    doc["meta"] = {{"name", inst.meta().name}, {"source", inst.meta().source}, {"requests", inst.request_count()}};
    const auto& f = inst.fleet();
    doc["fleet"] = {{"vehicles", f.vehicles},
                    {"capacity", f.capacity},
                    {"max_route_duration", f.max_route_duration},
                    {"max_ride_time", f.max_ride_time}};
    json nodes = json::array();
    for (const auto& n : inst.nodes()) {
        json j = {{"id", n.id},           {"x", n.x},
                  {"y", n.y},             {"service", n.service},
                  {"load", n.load},       {"earliest", n.window.earliest},
                  {"latest", n.window.latest}};
        put_optional(j, "zone", n.zone);
        nodes.push_back(std::move(j));
    }
    doc["nodes"] = std::move(nodes);
    json requests = json::array();
    for (const auto& r : inst.requests()) {
        json j = {{"id", r.id},
                  {"direction", to_string(r.direction)},
                  {"load", r.load},
                  {"class_id", r.class_id},
                  {"private_cost", r.private_cost},
                  {"direct_distance", r.direct_distance}};
        put_optional(j, "pickup_zone", r.pickup_zone);
        put_optional(j, "dropoff_zone", r.dropoff_zone);
        requests.push_back(std::move(j));
    }
    doc["requests"] = std::move(requests);
    doc["travel_time"] = matrix_to_json(inst.travel_time());
    doc["travel_cost"] = matrix_to_json(inst.travel_cost());
    return doc;
}

Instance instance_from_json(const json& doc) {
    try {
        InstanceData data;
        const auto& meta = doc.at("meta");
        data.meta.name = meta.value("name", "");
        data.meta.source = meta.value("source", "");
        const auto& f = doc.at("fleet");
        data.fleet = {f.at("vehicles").get<int>(), f.at("capacity").get<int>(), f.at("max_route_duration").get<double>(),
                      f.at("max_ride_time").get<double>()};
        for (const auto& j : doc.at("nodes")) {
            Node n;
            n.id = j.at("id").get<int>();
            n.x = j.value("x", 0.0);
            n.y = j.value("y", 0.0);
            n.service = j.at("service").get<double>();
            n.load = j.at("load").get<int>();
            n.window = {j.at("earliest").get<double>(), j.at("latest").get<double>()};
            n.zone = get_optional<int>(j, "zone");
            data.nodes.push_back(n);
        }
        const int count = static_cast<int>(doc.at("requests").size());
        for (const auto& j : doc.at("requests")) {
            Request r;
            r.id = j.at("id").get<int>();
            r.pickup = r.id;
            r.dropoff = count + r.id;
            const auto dir = j.at("direction").get<std::string>();
            if (dir != "inbound" && dir != "outbound") throw InstanceError("unknown direction '" + dir + "'");
            r.direction = dir == "inbound" ? Direction::inbound : Direction::outbound;
            r.load = j.at("load").get<int>();
            r.class_id = j.value("class_id", 1);
            r.private_cost = j.at("private_cost").get<double>();
            r.direct_distance = j.at("direct_distance").get<double>();
            r.pickup_zone = get_optional<int>(j, "pickup_zone");
            r.dropoff_zone = get_optional<int>(j, "dropoff_zone");
            data.requests.push_back(r);
        }
        data.travel_time = matrix_from_json(doc.at("travel_time"), "travel_time");
        data.travel_cost = matrix_from_json(doc.at("travel_cost"), "travel_cost");
        return Instance(std::move(data));
    } catch (const json::exception& e) {
        throw InstanceError(std::string("malformed instance JSON: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

Instance load_instance(const std::filesystem::path& path, const CordeauOptions& options) {
    const std::string text = read_text_file(path);
    if (path.extension() == ".json") {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw InstanceError(path.string() + ": " + e.what());
        }
        return instance_from_json(doc);
    }
    CordeauOptions named = options;
    if (named.name.empty()) named.name = path.stem().string();
    return parse_cordeau(text, named);
}

std::string to_cordeau_text(const Instance& inst) {
    const auto& f = inst.fleet();
    std::string out = fmt::format("{} {} {} {} {}\n", f.vehicles, inst.request_count(), f.max_route_duration, f.capacity,
                                  f.max_ride_time);
    for (const auto& n : inst.nodes()) {
        out += fmt::format("{} {} {} {} {} {} {}\n", n.id, n.x, n.y, n.service, n.load, n.window.earliest, n.window.latest);
    }
    return out;
}

}  // namespace ccdarp
