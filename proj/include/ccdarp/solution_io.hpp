#ifndef CCDARP_SOLUTION_IO_HPP
#define CCDARP_SOLUTION_IO_HPP

#include <json.hpp>

#include "ccdarp/schedule.hpp"

namespace ccdarp {

// {"profit", "revenue", "routing_cost",
//  "routes": [{"vehicle", "cost", "stops": [{"node", "B", "load"}]}],
//  "requests": [{"id", "y", "vehicle", "ride_time", "schedule_delay", "fare", "utility_gap"}]}
// Rejected requests carry only id and y.
nlohmann::json solution_to_json(const Solution& sol, const Scenario& scenario);

// Rebuilds routes, schedule, loads and y from the document. The profit block is taken as stored so
// that check_feasible can audit it. Throws std::runtime_error on a malformed document.
Solution solution_from_json(const nlohmann::json& doc, const Scenario& scenario);

}  // namespace ccdarp

#endif  // CCDARP_SOLUTION_IO_HPP
