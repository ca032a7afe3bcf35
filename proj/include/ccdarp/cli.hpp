#ifndef CCDARP_CLI_HPP
#define CCDARP_CLI_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ccdarp/params.hpp"

namespace ccdarp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Sweep axis "name[:class]" with name one of p, s, f, alpha, zone_base, capacity. Without a class
// the per-class axes apply to every class of the instance.
struct SweepAxis {
    std::string name;
    std::optional<int> class_id;
};

SweepAxis parse_axis(const std::string& text);

// "v1,v2,..." or "start:stop:step" (stop included). Must be non-empty and strictly increasing.
std::vector<double> parse_grid(const std::string& text);

// Scenario for one grid point: the base parameters with the axis value applied.
Scenario sweep_scenario(const Instance& inst, const ParamFile& params, const std::optional<std::string>& fare_override,
                        const SweepAxis& axis, double value);

struct SweepRow {
    double value = 0.0;
    bool failed = false;
    std::string error;
    double profit = 0.0;
    double revenue = 0.0;
    double routing_cost = 0.0;
    int served = 0;
    std::map<int, int> served_by_class;
    int vehicles_used = 0;
    double seconds = 0.0;  // wall time, kept out of the CSV
};

// Rows in grid order. threads caps the number of concurrent solves.
std::vector<SweepRow> run_sweep(const Instance& inst, const ParamFile& params,
                                const std::optional<std::string>& fare_override, const SweepAxis& axis,
                                const std::vector<double>& grid, int threads);

std::string sweep_csv(const std::vector<SweepRow>& rows, const SweepAxis& axis, const Instance& inst);

// Worker count from CCDARP_THREADS, else the hardware concurrency.
int sweep_threads();

// Entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccdarp::cli

#endif  // CCDARP_CLI_HPP
