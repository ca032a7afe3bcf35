#ifndef CCDARP_PARAMS_HPP
#define CCDARP_PARAMS_HPP

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "ccdarp/heuristic.hpp"

namespace ccdarp {

// Behavioural defaults used for every class the parameter file does not list.
ClassParams default_class_params(int class_id);

// Parsed parameter file. Keys:
//   classes        [{class_id, beta_T_per_hour, beta_S_per_hour, beta_F, s, p}]
//   fare_type      "flat" | "distance" | "zone"
//   fares          {flat: {f}, distance: {alpha: {"<class>": rate}},
//                   zone: {base: {"<class>": fare}, theta: [{from, to, weight}]}}
//   tolerance      {chance}
//   heuristic      {omega, delta, seed}
//   private_cost   {fixed, per_unit}       benchmark text instances
//   ingest         {...}                   trip CSV instances, see IngestConfig
struct ParamFile {
    std::map<int, ClassParams> classes;
    std::string fare_type = "flat";
    double flat_fare = 20.0;
    std::optional<DistanceFare> distance;
    std::optional<ZoneFare> zone;
    double chance_tolerance = kChanceTolerance;
    HeuristicParams heuristic;
    PrivateCostRule private_cost;
    IngestConfig ingest;
};

// Throws ConfigError on unknown fare types, malformed values or out-of-range parameters.
ParamFile parse_params(const nlohmann::json& doc);
ParamFile load_params(const std::string& path);

// Class parameters for every class in inst (listed ones first, defaults otherwise) and the fare
// structure named by fare_type, or by the override when given.
ChanceModel chance_model(const ParamFile& params, const Instance& inst,
                         const std::optional<std::string>& fare_override = std::nullopt);

}  // namespace ccdarp

#endif  // CCDARP_PARAMS_HPP
