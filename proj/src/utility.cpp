#include "ccdarp/utility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ccdarp {

ClassParams ClassParams::from_hourly(int class_id, double beta_T_per_hour, double beta_S_per_hour, double beta_F,
                                     double scale, double confidence) {
    return {class_id, beta_T_per_hour / 60.0, beta_S_per_hour / 60.0, beta_F, scale, confidence};
}

void validate(const ClassParams& cp) {
    const std::string tag = "class " + std::to_string(cp.class_id) + ": ";
    if (!(cp.beta_T > 0.0)) throw ConfigError(tag + "beta_T must be positive");
    if (!(cp.beta_S > 0.0)) throw ConfigError(tag + "beta_S must be positive");
    if (!(cp.beta_F > 0.0)) throw ConfigError(tag + "beta_F must be positive");
    if (!(cp.scale > 0.0)) throw ConfigError(tag + "scale s must be positive");
    if (!(cp.confidence > 0.0 && cp.confidence < 1.0)) throw ConfigError(tag + "confidence p must lie in (0, 1)");
}

double ZoneFare::theta(int from, int to) const {
    const auto it = weight.find({from, to});
    return it == weight.end() ? 1.0 : it->second;
}

const char* fare_kind(const FareStructure& fs) {
    switch (fs.index()) {
        case 0: return "flat";
        case 1: return "distance";
        default: return "zone";
    }
}

namespace {

template <typename... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double lookup_class(const std::map<int, double>& table, int class_id, const char* what) {
    const auto it = table.find(class_id);
    if (it == table.end()) throw ConfigError(std::string(what) + " has no value for class " + std::to_string(class_id));
    return it->second;
}

}  // namespace

double fare_of(const Request& r, const FareStructure& fs) {
    return std::visit(
        overloaded{
            [](const FlatFare& f) { return f.fare; },
            [&](const DistanceFare& f) { return lookup_class(f.rate, r.class_id, "distance fare") * r.direct_distance; },
            [&](const ZoneFare& f) {
                if (!r.pickup_zone || !r.dropoff_zone) {
                    throw ConfigError("zone fare needs zone labels on request " + std::to_string(r.id));
                }
                return f.theta(*r.pickup_zone, *r.dropoff_zone) * lookup_class(f.base, r.class_id, "zone fare");
            },
        },
        fs);
}

double private_utility(const Request& r, const ClassParams& cp, const Instance& inst) {
    return -cp.beta_T * inst.direct_time(r) - cp.beta_F * r.private_cost;
}

double drt_utility(const Request& r, const ServiceOutcome& o, const ClassParams& cp) {
    if (o.schedule_delay < 0.0) {
        throw std::invalid_argument("negative schedule delay for request " + std::to_string(r.id));
    }
    return -cp.beta_F * o.fare - cp.beta_T * o.ride_time - cp.beta_S * o.schedule_delay;
}

double chance_threshold(double confidence, double scale) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::domain_error("confidence level must lie in (0, 1)");
    }
    return -scale * std::log(confidence / (1.0 - confidence));
}

double chance_threshold(const ClassParams& cp) { return chance_threshold(cp.confidence, cp.scale); }

bool chance_feasible(const Request& r, const ServiceOutcome& o, const ClassParams& cp, const Instance& inst,
                     double tolerance) {
    const double gap = private_utility(r, cp, inst) - drt_utility(r, o, cp);
    return gap <= chance_threshold(cp) + tolerance;
}

UtilityBounds utility_bounds(const Request& r, const FareStructure& fs, const ClassParams& cp, const Instance& inst) {
    const double fare = fare_of(r, fs);
    const double direct = inst.direct_time(r);
    const double max_delay = inst.tight_window(r).width();
    UtilityBounds b;
    b.upper = drt_utility(r, {direct, 0.0, fare}, cp);
    b.lower = drt_utility(r, {inst.fleet().max_ride_time, std::max(0.0, max_delay), fare}, cp);
    return b;
}

BigM big_m(const Request& r, const FareStructure& fs, const ClassParams& cp, const Instance& inst) {
    const double raw = private_utility(r, cp, inst) - utility_bounds(r, fs, cp, inst).lower +
                       cp.scale * std::log(cp.confidence / (1.0 - cp.confidence));
    return raw < 0.0 ? BigM{0.0, true} : BigM{raw, false};
}

const ClassParams& ChanceModel::params_for(int class_id) const {
    const auto it = classes.find(class_id);
    if (it == classes.end()) throw ConfigError("no behavioural parameters for class " + std::to_string(class_id));
    return it->second;
}

void ChanceModel::check_covers(const Instance& inst) const {
    for (const auto& [id, cp] : classes) validate(cp);
    for (const auto& r : inst.requests()) {
        params_for(r.class_id);
        fare_of(r, fares);
    }
}

}  // namespace ccdarp
