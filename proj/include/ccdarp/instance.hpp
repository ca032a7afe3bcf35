#ifndef CCDARP_INSTANCE_HPP
#define CCDARP_INSTANCE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccdarp {

// Row-major square matrix of doubles, used for travel times and costs.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t size, double fill = 0.0) : size_(size), data_(size * size, fill) {}

    std::size_t size() const { return size_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }

    const double* row(std::size_t i) const { return data_.data() + i * size_; }

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t size_ = 0;
    std::vector<double> data_;
};

struct TimeWindow {
    double earliest = 0.0;
    double latest = 0.0;
    // Set when the window came out empty and was kept only for reporting.
    bool degenerate = false;

    double width() const { return latest - earliest; }
    bool operator==(const TimeWindow&) const = default;
};

enum class Direction { inbound, outbound };

const char* to_string(Direction direction);

struct Node {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    double service = 0.0;  // d_i, minutes
    int load = 0;          // q_i, signed passenger count
    TimeWindow window;
    std::optional<int> zone;

    bool operator==(const Node&) const = default;
};

// A request i is served by visiting pickup node i and dropoff node n + i.
struct Request {
    int id = 0;  // 1..n, equal to the pickup node id
    int pickup = 0;
    int dropoff = 0;
    Direction direction = Direction::inbound;
    int load = 1;
    int class_id = 1;
    double private_cost = 0.0;     // cost of the private alternative, currency
    double direct_distance = 0.0;  // length units, drives distance-based fares
    std::optional<int> pickup_zone;
    std::optional<int> dropoff_zone;

    bool operator==(const Request&) const = default;
};

struct FleetSpec {
    int vehicles = 1;
    int capacity = 1;
    double max_route_duration = 0.0;  // T, minutes
    double max_ride_time = 0.0;       // L, minutes

    bool operator==(const FleetSpec&) const = default;
};

struct InstanceMeta {
    std::string name;
    std::string source;

    bool operator==(const InstanceMeta&) const = default;
};

// Raw instance content. Instance checks dimensions on construction.
struct InstanceData {
    InstanceMeta meta;
    FleetSpec fleet;
    std::vector<Node> nodes;
    std::vector<Request> requests;
    SquareMatrix travel_time;
    SquareMatrix travel_cost;
};

class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problem data on the complete directed graph over 2n + 2 nodes: node 0 is the origin depot,
// 1..n are pickups, n+1..2n dropoffs and 2n+1 the destination depot. Immutable once built.
class Instance {
public:
    explicit Instance(InstanceData data);

    const InstanceMeta& meta() const { return data_.meta; }
    const FleetSpec& fleet() const { return data_.fleet; }
    const std::vector<Node>& nodes() const { return data_.nodes; }
    const std::vector<Request>& requests() const { return data_.requests; }
    const SquareMatrix& travel_time() const { return data_.travel_time; }
    const SquareMatrix& travel_cost() const { return data_.travel_cost; }

    int request_count() const { return static_cast<int>(data_.requests.size()); }
    int node_count() const { return static_cast<int>(data_.nodes.size()); }
    int origin_depot() const { return 0; }
    int destination_depot() const { return 2 * request_count() + 1; }
    bool is_pickup(int node) const { return node >= 1 && node <= request_count(); }
    bool is_dropoff(int node) const { return node > request_count() && node <= 2 * request_count(); }

    const Node& node(int id) const { return data_.nodes[static_cast<std::size_t>(id)]; }
    const Request& request(int id) const { return data_.requests[static_cast<std::size_t>(id - 1)]; }
    // Request owning a pickup or dropoff node.
    int request_of(int node) const { return node > request_count() ? node - request_count() : node; }

    double time(int i, int j) const { return data_.travel_time(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
    double cost(int i, int j) const { return data_.travel_cost(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
    double direct_time(const Request& r) const { return time(r.pickup, r.dropoff); }

    // Window carrying the service promise: pickup for inbound, dropoff for outbound.
    const TimeWindow& tight_window(const Request& r) const;

    const InstanceData& data() const { return data_; }
    Instance with_fleet(const FleetSpec& fleet) const;

    bool operator==(const Instance& other) const;

private:
    InstanceData data_;
};

// ---------------------------------------------------------------------------
// Construction from external sources
// ---------------------------------------------------------------------------

// Private alternative cost: fixed + per_unit * direct distance.
struct PrivateCostRule {
    double fixed = 0.0;
    double per_unit = 2.0;

    double operator()(double direct_distance) const { return fixed + per_unit * direct_distance; }
};

struct CordeauOptions {
    std::string name;
    PrivateCostRule private_cost;
    int class_id = 1;
};

class ParseError : public InstanceError {
public:
    ParseError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

// Whitespace-delimited benchmark text: header "K n T Q L", then 2n+2 node lines
// "id x y d q e l". Travel time and cost are Euclidean distances.
Instance parse_cordeau(const std::string& text, const CordeauOptions& options = {});

enum class WindowAnchor { centered, anchored };
enum class ClassRule { column, dropoff_zone, single };

struct TripRecord {
    std::string pickup_id;
    std::string dropoff_id;
    int passengers = 0;
    double pickup_time = 0.0;   // minutes from midnight
    double dropoff_time = 0.0;  // minutes from midnight
    std::optional<int> pickup_zone;
    std::optional<int> dropoff_zone;
    std::optional<int> class_id;
};

struct IngestConfig {
    // Travel times between location identifiers, minutes. Same-location pairs default to 0.
    std::map<std::pair<std::string, std::string>, double> travel_times;
    double cost_per_minute = 0.1;
    double depot_cost = 2.5;
    double window_width = 15.0;
    WindowAnchor anchor = WindowAnchor::centered;
    ClassRule class_rule = ClassRule::column;
    double horizon_start = 0.0;  // clock minutes mapped to time 0
    double horizon_end = 1440.0;
    double service_time = 0.0;
    // Private alternative: fixed + per_minute * direct travel time.
    double private_cost_fixed = 0.0;
    double private_cost_per_minute = 1.0;
    FleetSpec fleet{10, 6, 1440.0, 60.0};
    std::string name = "trips";
};

struct RejectedRow {
    int row = 0;  // 1-based data row
    std::string reason;
};

struct IngestResult {
    Instance instance;
    std::vector<RejectedRow> rejected;
};

// Builds an instance from trip records. Odd-indexed requests are inbound.
IngestResult ingest_trips(const std::vector<TripRecord>& records, const IngestConfig& config);

// CSV with header row; columns pickup_id, dropoff_id, passengers, pickup_time, dropoff_time and
// optional pickup_zone, dropoff_zone, class_id. Times are HH:MM[:SS] or minutes from midnight.
std::vector<TripRecord> parse_trip_csv(const std::string& text);

// Long-format CSV "from,to,minutes" with a header row.
std::map<std::pair<std::string, std::string>, double> parse_travel_time_csv(const std::string& text);

double parse_clock_minutes(const std::string& field);

// Pickup window implied by the dropoff promise of an outbound request:
// [e_{n+i} - t_{i,n+i}, l_{n+i} - L], clamped to [0, T].
TimeWindow infer_outbound_pickup_window(const Request& r, const Instance& inst);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class Severity { info, warning, error };

struct ValidationIssue {
    Severity severity = Severity::info;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    int count(Severity severity) const;
    bool passed() const { return count(Severity::error) == 0; }
    std::string summary() const;
};

ValidationReport validate_instance(const Instance& inst);

}  // namespace ccdarp

#endif  // CCDARP_INSTANCE_HPP
