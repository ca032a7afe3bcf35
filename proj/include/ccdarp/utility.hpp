#ifndef CCDARP_UTILITY_HPP
#define CCDARP_UTILITY_HPP

#include <map>
#include <stdexcept>
#include <utility>
#include <variant>

#include "ccdarp/instance.hpp"

namespace ccdarp {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Behavioural parameters of one user class. Time rates are stored per minute.
struct ClassParams {
    int class_id = 1;
    double beta_T = 0.0;  // currency per minute of ride time
    double beta_S = 0.0;  // currency per minute of schedule delay
    double beta_F = 0.0;  // utility per currency unit
    double scale = 1.0;   // logistic scale s_m
    double confidence = 0.5;

    static ClassParams from_hourly(int class_id, double beta_T_per_hour, double beta_S_per_hour, double beta_F,
                                   double scale, double confidence);
    double beta_T_per_hour() const { return beta_T * 60.0; }
    double beta_S_per_hour() const { return beta_S * 60.0; }
};

// Throws ConfigError naming the violated bound.
void validate(const ClassParams& cp);

struct FlatFare {
    double fare = 0.0;
};

struct DistanceFare {
    std::map<int, double> rate;  // alpha_m per class, currency per length unit
};

struct ZoneFare {
    std::map<int, double> base;                    // f_m per class
    std::map<std::pair<int, int>, double> weight;  // theta by (pickup zone, dropoff zone); missing pairs weigh 1

    double theta(int from, int to) const;
};

using FareStructure = std::variant<FlatFare, DistanceFare, ZoneFare>;

const char* fare_kind(const FareStructure& fs);

// Per-person fare charged to request r.
double fare_of(const Request& r, const FareStructure& fs);

struct ServiceOutcome {
    double ride_time = 0.0;
    double schedule_delay = 0.0;
    double fare = 0.0;
};

// Deterministic utility of the private alternative.
double private_utility(const Request& r, const ClassParams& cp, const Instance& inst);

// Deterministic utility of the ride-sharing service for a realised outcome.
double drt_utility(const Request& r, const ServiceOutcome& o, const ClassParams& cp);

// Largest admissible deterministic utility gap: -s ln(p / (1 - p)).
double chance_threshold(const ClassParams& cp);
double chance_threshold(double confidence, double scale);

inline constexpr double kChanceTolerance = 1e-6;

bool chance_feasible(const Request& r, const ServiceOutcome& o, const ClassParams& cp, const Instance& inst,
                     double tolerance = kChanceTolerance);

struct UtilityBounds {
    double lower = 0.0;
    double upper = 0.0;
};

UtilityBounds utility_bounds(const Request& r, const FareStructure& fs, const ClassParams& cp, const Instance& inst);

struct BigM {
    double value = 0.0;
    bool clamped = false;  // raw value was negative
};

// Constant that deactivates the chance constraint of a rejected request.
BigM big_m(const Request& r, const FareStructure& fs, const ClassParams& cp, const Instance& inst);

// Class parameters plus the fare structure in force.
struct ChanceModel {
    std::map<int, ClassParams> classes;
    FareStructure fares = FlatFare{20.0};
    double tolerance = kChanceTolerance;

    const ClassParams& params_for(int class_id) const;
    // Every request class has parameters and every fare the structure needs is defined.
    void check_covers(const Instance& inst) const;
};

}  // namespace ccdarp

#endif  // CCDARP_UTILITY_HPP
