#ifndef CCDARP_SCENARIO_HPP
#define CCDARP_SCENARIO_HPP

#include <vector>

#include "ccdarp/instance.hpp"
#include "ccdarp/utility.hpp"

namespace ccdarp {

// Per-request constants of the chance constraint, folded so that the utility gap of a schedule is
//   gap = base_gap + beta_T * ride_time + beta_S * schedule_delay.
struct RequestTerms {
    double fare = 0.0;
    double revenue = 0.0;  // fare times passengers
    double base_gap = 0.0;
    double beta_T = 0.0;
    double beta_S = 0.0;
    double threshold = 0.0;
    Direction direction = Direction::inbound;
    double delay_anchor = 0.0;  // e_i for inbound requests, l_{n+i} for outbound ones
    bool servable = true;       // false when even a direct, on-time ride misses the threshold
};

// An instance together with the behavioural model and fares it is solved under.
class Scenario {
public:
    Scenario(Instance instance, ChanceModel model);

    const Instance& instance() const { return instance_; }
    const ChanceModel& model() const { return model_; }
    const RequestTerms& terms(int request_id) const { return terms_[static_cast<std::size_t>(request_id - 1)]; }
    double tolerance() const { return model_.tolerance; }

private:
    Instance instance_;
    ChanceModel model_;
    std::vector<RequestTerms> terms_;
};

}  // namespace ccdarp

#endif  // CCDARP_SCENARIO_HPP
