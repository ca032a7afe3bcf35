#ifndef CCDARP_ORACLE_HPP
#define CCDARP_ORACLE_HPP

#include <stdexcept>

#include "ccdarp/schedule.hpp"

namespace ccdarp {

struct OracleLimits {
    int n_max = 4;
    int k_max = 2;
};

class OracleLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact optimum under the route scheduling rule: every accepted subset, every split of it over the
// vehicles and every precedence-valid stop order per vehicle. Ties keep the first solution found
// (subsets in increasing bitmask order, stop orders lexicographic).
Solution brute_force_exact(const Scenario& scenario, const OracleLimits& limits = {});

}  // namespace ccdarp

#endif  // CCDARP_ORACLE_HPP
