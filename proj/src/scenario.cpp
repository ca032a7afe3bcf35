#include "ccdarp/scenario.hpp"

namespace ccdarp {

Scenario::Scenario(Instance instance, ChanceModel model) : instance_(std::move(instance)), model_(std::move(model)) {
    model_.check_covers(instance_);
    terms_.reserve(static_cast<std::size_t>(instance_.request_count()));
    for (const auto& r : instance_.requests()) {
        const auto& cp = model_.params_for(r.class_id);
        RequestTerms t;
        t.fare = fare_of(r, model_.fares);
        t.revenue = t.fare * r.load;
        t.base_gap = private_utility(r, cp, instance_) + cp.beta_F * t.fare;
        t.beta_T = cp.beta_T;
        t.beta_S = cp.beta_S;
        t.threshold = chance_threshold(cp);
        t.direction = r.direction;
        t.delay_anchor = r.direction == Direction::inbound ? instance_.node(r.pickup).window.earliest
                                                           : instance_.node(r.dropoff).window.latest;
        t.servable = t.base_gap + t.beta_T * instance_.direct_time(r) <= t.threshold + model_.tolerance;
        terms_.push_back(t);
    }
}

}  // namespace ccdarp
