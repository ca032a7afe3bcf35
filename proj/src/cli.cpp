#include "ccdarp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ccdarp/generator.hpp"
#include "ccdarp/instance_io.hpp"
#include "ccdarp/milp.hpp"
#include "ccdarp/oracle.hpp"
#include "ccdarp/solution_io.hpp"

namespace ccdarp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

SweepAxis parse_axis(const std::string& text) {
    SweepAxis axis;
    const auto colon = text.find(':');
    axis.name = text.substr(0, colon);
    static const char* const names[] = {"p", "s", "f", "alpha", "zone_base", "capacity"};
    if (std::find(std::begin(names), std::end(names), axis.name) == std::end(names)) {
        throw ConfigError("unknown sweep axis '" + axis.name + "' (expected p, s, f, alpha, zone_base or capacity)");
    }
    if (colon != std::string::npos) {
        if (axis.name == "f" || axis.name == "capacity") throw ConfigError("axis '" + axis.name + "' takes no class");
        try {
            std::size_t used = 0;
            const std::string cls = text.substr(colon + 1);
            axis.class_id = std::stoi(cls, &used);
            if (used != cls.size()) throw std::invalid_argument(cls);
        } catch (const std::exception&) {
            throw ConfigError("bad class in sweep axis '" + text + "'");
        }
    }
    return axis;
}

namespace {

double grid_number(const std::string& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used == tok.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("bad grid value '" + tok + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto at = text.find(sep, start);
        out.push_back(text.substr(start, at - start));
        if (at == std::string::npos) return out;
        start = at + 1;
    }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw ConfigError("range grid must be start:stop:step");
        const double start = grid_number(parts[0]);
        const double stop = grid_number(parts[1]);
        const double step = grid_number(parts[2]);
        if (!(step > 0.0)) throw ConfigError("grid step must be positive");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 100000) throw ConfigError("grid has too many points");
        for (long k = 0; k < count; ++k) {
            // Trim representation noise such as 0.30000000000000004.
            grid.push_back(std::stod(fmt::format("{:.12g}", start + static_cast<double>(k) * step)));
        }
    } else {
        for (const auto& tok : split(text, ',')) grid.push_back(grid_number(tok));
    }
    if (grid.empty()) throw ConfigError("grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw ConfigError("grid values must be strictly increasing");
    }
    return grid;
}

Scenario sweep_scenario(const Instance& inst, const ParamFile& params, const std::optional<std::string>& fare_override,
                        const SweepAxis& axis, double value) {
    std::optional<std::string> fare = fare_override;
    ParamFile p = params;
    auto classes_of = [&]() {
        std::vector<int> ids;
        if (axis.class_id) {
            ids.push_back(*axis.class_id);
        } else {
            for (const Request& r : inst.requests()) ids.push_back(r.class_id);
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        }
        return ids;
    };
    if (axis.name == "f") {
        fare = "flat";
        p.flat_fare = value;
    } else if (axis.name == "alpha") {
        fare = "distance";
        if (!p.distance) p.distance = DistanceFare{};
        for (int c : classes_of()) p.distance->rate[c] = value;
    } else if (axis.name == "zone_base") {
        fare = "zone";
        if (!p.zone) p.zone = ZoneFare{};
        for (int c : classes_of()) p.zone->base[c] = value;
    }

    Instance target = inst;
    if (axis.name == "capacity") {
        if (value < 1.0 || value != std::floor(value)) throw ConfigError("capacity grid values must be positive integers");
        FleetSpec fleet = inst.fleet();
        fleet.capacity = static_cast<int>(value);
        target = inst.with_fleet(fleet);
    }
    ChanceModel model = chance_model(p, target, fare);
    if (axis.name == "p" || axis.name == "s") {
        for (int c : classes_of()) {
            auto it = model.classes.find(c);
            if (it == model.classes.end()) throw ConfigError("sweep class " + std::to_string(c) + " does not occur in the instance");
            (axis.name == "p" ? it->second.confidence : it->second.scale) = value;
            validate(it->second);
        }
    }
    return Scenario(std::move(target), std::move(model));
}

namespace {

std::vector<int> instance_classes(const Instance& inst) {
    std::vector<int> ids;
    for (const Request& r : inst.requests()) ids.push_back(r.class_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::map<int, int> served_by_class(const Solution& sol, const Instance& inst) {
    std::map<int, int> out;
    for (int c : instance_classes(inst)) out[c] = 0;
    for (int id : sol.served()) ++out[inst.request(id).class_id];
    return out;
}

}  // namespace

std::vector<SweepRow> run_sweep(const Instance& inst, const ParamFile& params,
                                const std::optional<std::string>& fare_override, const SweepAxis& axis,
                                const std::vector<double>& grid, int threads) {
    std::vector<SweepRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            SweepRow& row = rows[i];
            row.value = grid[i];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const Scenario scenario = sweep_scenario(inst, params, fare_override, axis, grid[i]);
                const SolveResult res = solve_lsh(scenario, params.heuristic);
                const FeasibilityReport rep = check_feasible(res.solution, scenario);
                if (!rep.passed()) throw std::runtime_error("solution failed re-verification: " + rep.summary());
                row.profit = res.solution.profit;
                row.revenue = res.solution.revenue;
                row.routing_cost = res.solution.routing_cost;
                row.served = static_cast<int>(res.solution.served().size());
                row.served_by_class = served_by_class(res.solution, scenario.instance());
                row.vehicles_used = res.solution.vehicles_used();
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    const int workers = std::max(1, std::min(threads, static_cast<int>(grid.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const SweepAxis& axis, const Instance& inst) {
    const auto classes = instance_classes(inst);
    std::string out = axis.class_id ? fmt::format("{}_{}", axis.name, *axis.class_id) : axis.name;
    out += ",status,profit,revenue,routing_cost,accepted";
    for (int c : classes) out += fmt::format(",accepted_class_{}", c);
    out += ",vehicles_used\n";
    for (const SweepRow& r : rows) {
        if (r.failed) {
            out += fmt::format("{},failed,,,,", r.value);
            for (std::size_t i = 0; i < classes.size(); ++i) out += ',';
            out += ",\n";
            continue;
        }
        out += fmt::format("{},ok,{},{},{},{}", r.value, r.profit, r.revenue, r.routing_cost, r.served);
        for (int c : classes) {
            const auto it = r.served_by_class.find(c);
            out += fmt::format(",{}", it == r.served_by_class.end() ? 0 : it->second);
        }
        out += fmt::format(",{}\n", r.vehicles_used);
    }
    return out;
}

int sweep_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("CCDARP_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) return std::min(cap, hw);
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("CCDARP_THREADS must be a positive integer, got '") + env + "'");
    }
    return hw;
}

namespace {

struct Common {
    std::string instance;
    std::string params;
    std::string fare;
    std::string travel_times;
    std::string out;
};

std::optional<std::string> fare_override(const Common& c) {
    if (c.fare.empty()) return std::nullopt;
    return c.fare;
}

ParamFile params_of(const Common& c) { return c.params.empty() ? parse_params(json::object()) : load_params(c.params); }

Instance load_any(const Common& c, const ParamFile& params, std::ostream& err) {
    const fs::path path(c.instance);
    if (path.extension() == ".csv") {
        if (c.travel_times.empty()) throw ConfigError("trip CSV instances need --travel-times");
        IngestConfig config = params.ingest;
        config.travel_times = parse_travel_time_csv(read_text_file(c.travel_times));
        if (config.name == IngestConfig{}.name) config.name = path.stem().string();
        IngestResult res = ingest_trips(parse_trip_csv(read_text_file(path)), config);
        for (const RejectedRow& r : res.rejected) err << fmt::format("note: trip row {} skipped: {}\n", r.row, r.reason);
        return std::move(res.instance);
    }
    CordeauOptions options;
    options.name = path.stem().string();
    options.private_cost = params.private_cost;
    return load_instance(path, options);
}

void print_solution(const Solution& sol, const Instance& inst, std::ostream& out) {
    out << fmt::format("profit        {:.4f}\n", sol.profit);
    out << fmt::format("revenue       {:.4f}\n", sol.revenue);
    out << fmt::format("routing cost  {:.4f}\n", sol.routing_cost);
    out << fmt::format("accepted {}/{}\n", sol.served().size(), inst.request_count());
    for (const auto& [c, count] : served_by_class(sol, inst)) out << fmt::format("  class {}: {}\n", c, count);
    out << fmt::format("fleet used {}/{}\n", sol.vehicles_used(), inst.fleet().vehicles);
}

int cmd_solve(const Common& c, const std::string& trace_path, bool oracle, std::optional<std::uint64_t> seed,
              std::ostream& out, std::ostream& err) {
    ParamFile params = params_of(c);
    if (seed) {
        params.heuristic.shuffle_ties = true;
        params.heuristic.rng_seed = *seed;
    }
    Instance inst = load_any(c, params, err);
    ChanceModel model = chance_model(params, inst, fare_override(c));
    const Scenario scenario(std::move(inst), std::move(model));

    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult res = solve_lsh(scenario, params.heuristic);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    print_solution(res.solution, scenario.instance(), out);
    out << fmt::format("wall time {:.3f} s\n", seconds);

    const FeasibilityReport rep = check_feasible(res.solution, scenario);
    if (!c.out.empty()) {
        json doc = solution_to_json(res.solution, scenario);
        doc["insertion_order"] = res.order;
        write_text_file(c.out, doc.dump(2) + "\n");
    }
    if (!trace_path.empty()) write_text_file(trace_path, trace_csv(res, scenario.instance()));
    if (oracle) {
        const Solution best = brute_force_exact(scenario);
        const double gap = best.profit - res.solution.profit;
        out << fmt::format("oracle profit {:.4f}, LS-H gap {:.4f}", best.profit, gap);
        if (std::abs(best.profit) > 1e-12) out << fmt::format(" ({:.2f}%)", 100.0 * gap / std::abs(best.profit));
        out << '\n';
    }
    if (!rep.passed()) {
        err << "solution failed re-verification:\n" << rep.summary() << '\n';
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_sweep(const Common& c, const std::string& axis_text, const std::string& grid_text, std::ostream& out,
              std::ostream& err) {
    const ParamFile params = params_of(c);
    const SweepAxis axis = parse_axis(axis_text);
    const std::vector<double> grid = parse_grid(grid_text);
    const Instance inst = load_any(c, params, err);
    // Fail on configuration errors before any solve starts.
    sweep_scenario(inst, params, fare_override(c), axis, grid.front());
    const int threads = sweep_threads();

    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_sweep(inst, params, fare_override(c), axis, grid, threads);
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string csv = sweep_csv(rows, axis, inst);
    std::string log = fmt::format("threads {}\n", threads);
    int failed = 0;
    for (const SweepRow& r : rows) {
        log += fmt::format("{} {} {:.3f}s{}\n", axis_text, r.value, r.seconds, r.failed ? " failed: " + r.error : "");
        if (r.failed) {
            ++failed;
            err << fmt::format("grid point {} failed: {}\n", r.value, r.error);
        }
    }
    log += fmt::format("total {:.3f}s\n", total);
    if (c.out.empty()) {
        out << csv;
    } else {
        write_text_file(c.out, csv);
        write_text_file(c.out + ".log", log);
        out << fmt::format("wrote {} rows to {}\n", rows.size(), c.out);
    }
    return failed > 0 ? kExitCheckFailed : kExitOk;
}

int cmd_export_lp(const Common& c, std::ostream& out, std::ostream& err) {
    const ParamFile params = params_of(c);
    Instance inst = load_any(c, params, err);
    ChanceModel model = chance_model(params, inst, fare_override(c));
    const Scenario scenario(std::move(inst), std::move(model));
    const MilpModel m = build_model(scenario);
    const std::string text = export_lp(m);
    if (c.out.empty()) {
        out << text;
        return kExitOk;
    }
    write_text_file(c.out, text);
    out << fmt::format("variables {} ({} binary, {} continuous), constraints {}\n", m.variables.size(),
                       m.count(VarKind::binary), m.count(VarKind::continuous), m.constraints.size());
    return kExitOk;
}

int cmd_validate(const Common& c, const std::string& solution_path, std::ostream& out, std::ostream& err) {
    const ParamFile params = params_of(c);
    Instance inst = load_any(c, params, err);
    const ValidationReport report = validate_instance(inst);
    out << report.summary() << '\n';
    bool ok = report.passed();
    if (!solution_path.empty()) {
        ChanceModel model = chance_model(params, inst, fare_override(c));
        const Scenario scenario(std::move(inst), std::move(model));
        const Solution sol = solution_from_json(json::parse(read_text_file(solution_path)), scenario);
        const FeasibilityReport rep = check_feasible(sol, scenario);
        out << "solution: " << rep.summary() << '\n';
        ok = ok && rep.passed();
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_convert(const Common& c, std::ostream& out, std::ostream& err) {
    if (c.out.empty()) throw ConfigError("convert needs --out");
    const ParamFile params = params_of(c);
    const Instance inst = load_any(c, params, err);
    write_text_file(c.out, instance_to_json(inst).dump(1) + "\n");
    out << fmt::format("wrote {} ({} requests, {} vehicles)\n", c.out, inst.request_count(), inst.fleet().vehicles);
    return kExitOk;
}

void write_instance(const Instance& inst, const fs::path& path) {
    if (path.extension() == ".json") {
        write_text_file(path, instance_to_json(inst).dump(1) + "\n");
    } else {
        write_text_file(path, to_cordeau_text(inst));
    }
}

int cmd_generate(GeneratorConfig config, const std::string& suite_dir, const std::string& out_path, std::ostream& out) {
    if (!suite_dir.empty()) {
        fs::create_directories(suite_dir);
        for (const GeneratorConfig& g : benchmark_suite(config.seed)) {
            const fs::path path = fs::path(suite_dir) / (g.name + ".txt");
            write_instance(generate_instance(g), path);
            out << "wrote " << path.string() << '\n';
        }
        return kExitOk;
    }
    if (out_path.empty()) throw ConfigError("generate needs --out or --suite");
    if ((config.classes > 1 || config.zones > 0) && fs::path(out_path).extension() != ".json") {
        throw ConfigError("classes and zones only survive in .json output");
    }
    config.name = fs::path(out_path).stem().string();
    write_instance(generate_instance(config), out_path);
    out << "wrote " << out_path << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Profit-maximising dial-a-ride solver with chance-constrained request acceptance", "ccdarp"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub, bool needs_params) {
        sub->add_option("--instance", common.instance, "Instance: benchmark text, canonical .json or trip .csv")
            ->required();
        auto* p = sub->add_option("--params", common.params, "Parameter file (JSON)");
        if (needs_params) p->required();
        sub->add_option("--fare", common.fare, "Fare structure override")->check(CLI::IsMember({"flat", "distance", "zone"}));
        sub->add_option("--travel-times", common.travel_times, "Travel-time CSV for trip instances");
        sub->add_option("--out", common.out, "Output path");
    };

    auto* solve = app.add_subcommand("solve", "Run the local-search heuristic on one instance");
    add_common(solve, true);
    std::string trace_path;
    bool oracle = false;
    std::optional<std::uint64_t> seed;
    solve->add_option("--trace", trace_path, "Write the improvement trace CSV here");
    solve->add_flag("--oracle", oracle, "Also run the exhaustive search and report the gap (tiny instances)");
    solve->add_option("--seed", seed, "Shuffle equal earliest-time ties with this seed");

    auto* sweep = app.add_subcommand("sweep", "Solve over a parameter grid and write a CSV");
    add_common(sweep, true);
    std::string axis_text;
    std::string grid_text;
    sweep->add_option("--axis", axis_text, "p[:class], s[:class], f, alpha[:class], zone_base[:class] or capacity")->required();
    sweep->add_option("--grid", grid_text, "v1,v2,... or start:stop:step")->required();

    auto* export_cmd = app.add_subcommand("export-lp", "Write the MILP model in LP format");
    add_common(export_cmd, false);

    auto* validate_cmd = app.add_subcommand("validate", "Check an instance and optionally a solution");
    add_common(validate_cmd, false);
    std::string solution_path;
    validate_cmd->add_option("--solution", solution_path, "Solution JSON to re-verify");

    auto* convert = app.add_subcommand("convert", "Convert an instance to canonical JSON");
    add_common(convert, false);

    auto* generate = app.add_subcommand("generate", "Write random Euclidean instances");
    GeneratorConfig gen;
    std::string suite_dir;
    std::string gen_out;
    generate->add_option("--requests", gen.requests, "Number of requests")->check(CLI::PositiveNumber);
    generate->add_option("--vehicles", gen.vehicles, "Number of vehicles")->check(CLI::PositiveNumber);
    generate->add_option("--capacity", gen.capacity, "Vehicle capacity")->check(CLI::PositiveNumber);
    generate->add_option("--classes", gen.classes, "User classes (JSON output only)")->check(CLI::PositiveNumber);
    generate->add_option("--zones", gen.zones, "Fare zones (JSON output only)")->check(CLI::NonNegativeNumber);
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("--out", gen_out, "Output path (.json for canonical JSON, else benchmark text)");
    generate->add_option("--suite", suite_dir, "Write the fifteen benchmark-sized instances into this directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve) return cmd_solve(common, trace_path, oracle, seed, out, err);
        if (*sweep) return cmd_sweep(common, axis_text, grid_text, out, err);
        if (*export_cmd) return cmd_export_lp(common, out, err);
        if (*validate_cmd) return cmd_validate(common, solution_path, out, err);
        if (*convert) return cmd_convert(common, out, err);
        if (*generate) return cmd_generate(gen, suite_dir, gen_out, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace ccdarp::cli
