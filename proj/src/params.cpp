#include "ccdarp/params.hpp"

#include "ccdarp/instance_io.hpp"

namespace ccdarp {

using nlohmann::json;

ClassParams default_class_params(int class_id) { return ClassParams::from_hourly(class_id, 10.6, 21.2, 10.0, 10.0, 0.95); }

namespace {

double number_or(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

int class_key(const std::string& key) {
    try {
        std::size_t used = 0;
        const int id = std::stoi(key, &used);
        if (used == key.size()) return id;
    } catch (const std::exception&) {
    }
    throw ConfigError("class key '" + key + "' is not an integer");
}

std::map<int, double> per_class(const json& obj, const char* what) {
    if (!obj.is_object()) throw ConfigError(std::string(what) + " must map class ids to numbers");
    std::map<int, double> out;
    for (const auto& [key, value] : obj.items()) {
        if (!value.is_number()) throw ConfigError(std::string(what) + " for class " + key + " must be a number");
        out[class_key(key)] = value.get<double>();
    }
    return out;
}

IngestConfig parse_ingest(const json& doc) {
    IngestConfig c;
    c.cost_per_minute = number_or(doc, "cost_per_minute", c.cost_per_minute);
    c.depot_cost = number_or(doc, "depot_cost", c.depot_cost);
    c.window_width = number_or(doc, "window_width", c.window_width);
    c.service_time = number_or(doc, "service_time", c.service_time);
    c.private_cost_fixed = number_or(doc, "private_cost_fixed", c.private_cost_fixed);
    c.private_cost_per_minute = number_or(doc, "private_cost_per_minute", c.private_cost_per_minute);
    for (const char* key : {"horizon_start", "horizon_end"}) {
        if (!doc.contains(key)) continue;
        const json& v = doc.at(key);
        const double minutes = v.is_string() ? parse_clock_minutes(v.get<std::string>()) : number_or(doc, key, 0.0);
        (std::string(key) == "horizon_start" ? c.horizon_start : c.horizon_end) = minutes;
    }
    if (doc.contains("anchor")) {
        const auto a = doc.at("anchor").get<std::string>();
        if (a == "centered") {
            c.anchor = WindowAnchor::centered;
        } else if (a == "anchored") {
            c.anchor = WindowAnchor::anchored;
        } else {
            throw ConfigError("ingest anchor must be 'centered' or 'anchored'");
        }
    }
    if (doc.contains("class_rule")) {
        const auto r = doc.at("class_rule").get<std::string>();
        if (r == "column") {
            c.class_rule = ClassRule::column;
        } else if (r == "dropoff_zone") {
            c.class_rule = ClassRule::dropoff_zone;
        } else if (r == "single") {
            c.class_rule = ClassRule::single;
        } else {
            throw ConfigError("ingest class_rule must be 'column', 'dropoff_zone' or 'single'");
        }
    }
    if (doc.contains("fleet")) {
        const json& f = doc.at("fleet");
        c.fleet.vehicles = static_cast<int>(number_or(f, "vehicles", c.fleet.vehicles));
        c.fleet.capacity = static_cast<int>(number_or(f, "capacity", c.fleet.capacity));
        c.fleet.max_route_duration = number_or(f, "max_route_duration", c.fleet.max_route_duration);
        c.fleet.max_ride_time = number_or(f, "max_ride_time", c.fleet.max_ride_time);
    }
    if (doc.contains("name")) c.name = doc.at("name").get<std::string>();
    return c;
}

}  // namespace

ParamFile parse_params(const json& doc) {
    if (!doc.is_object()) throw ConfigError("parameter file must be a JSON object");
    ParamFile p;
    try {
        if (doc.contains("classes")) {
            for (const json& c : doc.at("classes")) {
                const int id = c.at("class_id").get<int>();
                const ClassParams d = default_class_params(id);
                ClassParams cp = ClassParams::from_hourly(
                    id, number_or(c, "beta_T_per_hour", d.beta_T_per_hour()), number_or(c, "beta_S_per_hour", d.beta_S_per_hour()),
                    number_or(c, "beta_F", d.beta_F), number_or(c, "s", d.scale), number_or(c, "p", d.confidence));
                validate(cp);
                if (!p.classes.emplace(id, cp).second) throw ConfigError("class " + std::to_string(id) + " listed twice");
            }
        }
        if (doc.contains("fares")) {
            const json& f = doc.at("fares");
            if (f.contains("flat")) p.flat_fare = number_or(f.at("flat"), "f", p.flat_fare);
            if (f.contains("distance")) p.distance = DistanceFare{per_class(f.at("distance").at("alpha"), "distance alpha")};
            if (f.contains("zone")) {
                const json& z = f.at("zone");
                ZoneFare zf;
                zf.base = per_class(z.at("base"), "zone base fare");
                if (z.contains("theta")) {
                    for (const json& t : z.at("theta")) {
                        zf.weight[{t.at("from").get<int>(), t.at("to").get<int>()}] = t.at("weight").get<double>();
                    }
                }
                p.zone = std::move(zf);
            }
        }
        if (doc.contains("fare_type")) p.fare_type = doc.at("fare_type").get<std::string>();
        if (doc.contains("tolerance")) p.chance_tolerance = number_or(doc.at("tolerance"), "chance", p.chance_tolerance);
        if (doc.contains("heuristic")) {
            const json& h = doc.at("heuristic");
            p.heuristic.omega = number_or(h, "omega", p.heuristic.omega);
            p.heuristic.delta = number_or(h, "delta", p.heuristic.delta);
            if (h.contains("seed")) {
                p.heuristic.shuffle_ties = true;
                p.heuristic.rng_seed = h.at("seed").get<std::uint64_t>();
            }
        }
        if (doc.contains("private_cost")) {
            const json& c = doc.at("private_cost");
            p.private_cost.fixed = number_or(c, "fixed", p.private_cost.fixed);
            p.private_cost.per_unit = number_or(c, "per_unit", p.private_cost.per_unit);
        }
        if (doc.contains("ingest")) p.ingest = parse_ingest(doc.at("ingest"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("parameter file: ") + e.what());
    }
    if (p.fare_type != "flat" && p.fare_type != "distance" && p.fare_type != "zone") {
        throw ConfigError("unknown fare type '" + p.fare_type + "'");
    }
    if (!(p.chance_tolerance >= 0.0)) throw ConfigError("chance tolerance must be non-negative");
    validate(p.heuristic);
    return p;
}

ParamFile load_params(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
    return parse_params(doc);
}

ChanceModel chance_model(const ParamFile& params, const Instance& inst, const std::optional<std::string>& fare_override) {
    ChanceModel m;
    m.tolerance = params.chance_tolerance;
    for (const Request& r : inst.requests()) {
        const auto it = params.classes.find(r.class_id);
        m.classes.emplace(r.class_id, it != params.classes.end() ? it->second : default_class_params(r.class_id));
    }
    const std::string kind = fare_override.value_or(params.fare_type);
    if (kind == "flat") {
        m.fares = FlatFare{params.flat_fare};
    } else if (kind == "distance") {
        if (!params.distance) throw ConfigError("distance fares requested but the parameter file has no fares.distance block");
        m.fares = *params.distance;
    } else if (kind == "zone") {
        if (!params.zone) throw ConfigError("zone fares requested but the parameter file has no fares.zone block");
        m.fares = *params.zone;
    } else {
        throw ConfigError("unknown fare type '" + kind + "'");
    }
    m.check_covers(inst);
    return m;
}

}  // namespace ccdarp
