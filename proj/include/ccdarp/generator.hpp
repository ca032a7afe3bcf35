#ifndef CCDARP_GENERATOR_HPP
#define CCDARP_GENERATOR_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ccdarp/instance.hpp"

namespace ccdarp {

// Portable uniform draws on top of mt19937_64 (whose output sequence is fixed by the standard,
// unlike the <random> distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Integer in [lo, hi].
    int integer(int lo, int hi) {
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

// Random Euclidean instance in the layout of the classic 'a' benchmark family: points uniform in a
// square, half the requests outbound (tight dropoff window) and half inbound (tight pickup window).
struct GeneratorConfig {
    std::string name = "synthetic";
    int requests = 16;
    int vehicles = 2;
    int capacity = 3;
    double max_route_duration = 480.0;
    double max_ride_time = 30.0;
    double service_time = 3.0;
    double window_width = 15.0;
    double horizon = 480.0;       // tight windows fall inside [0, horizon]
    double open_latest = 1440.0;  // latest time of untight windows
    double half_extent = 10.0;    // coordinates in [-half_extent, half_extent]^2
    int max_load = 1;
    int classes = 1;
    int zones = 0;  // zero: no zone labels; otherwise vertical strips by x coordinate
    PrivateCostRule private_cost;
    std::uint64_t seed = 1;
};

Instance generate_instance(const GeneratorConfig& config);

// Sizes of the fifteen 'a' instances used in the benchmark tables (a2-16 ... a8-96).
std::vector<GeneratorConfig> benchmark_suite(std::uint64_t seed = 2006);

}  // namespace ccdarp

#endif  // CCDARP_GENERATOR_HPP
