#include "ccdarp/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ccdarp {

int MilpModel::add_variable(Variable v) {
    const int id = static_cast<int>(variables.size());
    if (!index_.emplace(v.name, id).second) throw std::logic_error("duplicate variable " + v.name);
    variables.push_back(std::move(v));
    return id;
}

int MilpModel::find(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
}

int MilpModel::count(VarKind kind) const {
    return static_cast<int>(
        std::count_if(variables.begin(), variables.end(), [&](const Variable& v) { return v.kind == kind; }));
}

int MilpModel::count_family(std::string_view family) const {
    return static_cast<int>(
        std::count_if(constraints.begin(), constraints.end(), [&](const Constraint& c) { return c.family == family; }));
}

namespace {

bool allowed_arc(int i, int j, int n) {
    const int end = 2 * n + 1;
    if (i == j || i == end || j == 0) return false;
    if (i == 0) return j <= n || j == end;
    if (i <= n) return j != end;
    return j != i - n;
}

void add_term(std::vector<Term>& terms, int var, double coef) {
    if (coef != 0.0) terms.push_back({var, coef});
}

}  // namespace

MilpModel build_model(const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    const int n = inst.request_count();
    const int vehicles = inst.fleet().vehicles;
    const int nodes = 2 * n + 2;
    const int end = 2 * n + 1;
    const double capacity = inst.fleet().capacity;
    MilpModel m;

    for (int k = 0; k < vehicles; ++k) {
        for (int i = 0; i < nodes; ++i) {
            for (int j = 0; j < nodes; ++j) {
                m.add_variable({fmt::format("x_{}_{}_{}", k, i, j), VarKind::binary, 0.0,
                                allowed_arc(i, j, n) ? 1.0 : 0.0, "x^k_ij"});
            }
        }
    }
    auto x = [&](int k, int i, int j) { return (k * nodes + i) * nodes + j; };
    const int y0 = m.add_variable({"y_1", VarKind::binary, 0.0, 1.0, "y_i"});
    for (int i = 2; i <= n; ++i) m.add_variable({fmt::format("y_{}", i), VarKind::binary, 0.0, 1.0, "y_i"});
    auto y = [&](int i) { return y0 + i - 1; };

    const int b0 = static_cast<int>(m.variables.size());
    for (int i = 1; i <= 2 * n; ++i) {
        const TimeWindow& w = inst.node(i).window;
        m.add_variable({fmt::format("B_{}", i), VarKind::continuous, w.earliest, w.latest, "B_i"});
    }
    const int q0 = static_cast<int>(m.variables.size());
    for (int i = 1; i <= 2 * n; ++i) {
        const double q = inst.node(i).load;
        m.add_variable({fmt::format("Q_{}", i), VarKind::continuous, std::max(0.0, q), std::min(capacity, capacity + q), "Q_i"});
    }
    const int dep0 = static_cast<int>(m.variables.size());
    for (int k = 0; k < vehicles; ++k) {
        const TimeWindow& ws = inst.node(0).window;
        const TimeWindow& we = inst.node(end).window;
        m.add_variable({fmt::format("Bdep0_{}", k), VarKind::continuous, ws.earliest, ws.latest, "B^k_0"});
        m.add_variable({fmt::format("Bdep1_{}", k), VarKind::continuous, we.earliest, we.latest, "B^k_2n+1"});
        m.add_variable({fmt::format("Qdep0_{}", k), VarKind::continuous, 0.0, 0.0, "Q^k_0"});
        m.add_variable({fmt::format("Qdep1_{}", k), VarKind::continuous, 0.0, capacity, "Q^k_2n+1"});
    }
    // Time and load variable of a node as seen by vehicle k.
    auto bvar = [&](int k, int node) {
        if (node == 0) return dep0 + 4 * k;
        if (node == end) return dep0 + 4 * k + 1;
        return b0 + node - 1;
    };
    auto qvar = [&](int k, int node) {
        if (node == 0) return dep0 + 4 * k + 2;
        if (node == end) return dep0 + 4 * k + 3;
        return q0 + node - 1;
    };
    const int l0 = static_cast<int>(m.variables.size());
    for (const Request& r : inst.requests()) {
        m.add_variable({fmt::format("L_{}", r.id), VarKind::continuous, inst.direct_time(r), inst.fleet().max_ride_time, "L_i"});
    }
    const int v0 = static_cast<int>(m.variables.size());
    for (const Request& r : inst.requests()) {
        const ClassParams& cp = scenario.model().params_for(r.class_id);
        const UtilityBounds ub = utility_bounds(r, scenario.model().fares, cp, inst);
        m.add_variable({fmt::format("V_{}", r.id), VarKind::continuous, ub.lower, ub.upper, "V_i"});
    }

    for (const Request& r : inst.requests()) add_term(m.objective, y(r.id), scenario.terms(r.id).revenue);
    for (int k = 0; k < vehicles; ++k) {
        for (int i = 0; i < nodes; ++i) {
            for (int j = 0; j < nodes; ++j) {
                if (allowed_arc(i, j, n)) add_term(m.objective, x(k, i, j), -inst.cost(i, j));
            }
        }
    }

    auto add = [&](std::string name, std::vector<Term> terms, Sense sense, double rhs, const char* family) {
        m.constraints.push_back({std::move(name), std::move(terms), sense, rhs, family});
    };
    auto out_arcs = [&](std::vector<Term>& terms, int k, int i, double coef) {
        for (int j = 0; j < nodes; ++j) {
            if (allowed_arc(i, j, n)) terms.push_back({x(k, i, j), coef});
        }
    };
    auto in_arcs = [&](std::vector<Term>& terms, int k, int j, double coef) {
        for (int i = 0; i < nodes; ++i) {
            if (allowed_arc(i, j, n)) terms.push_back({x(k, i, j), coef});
        }
    };

    for (int k = 0; k < vehicles; ++k) {
        for (int i = 1; i <= n; ++i) {
            std::vector<Term> t;
            out_arcs(t, k, i, 1.0);
            out_arcs(t, k, n + i, -1.0);
            add(fmt::format("pair_{}_{}", k, i), std::move(t), Sense::eq, 0.0, "pairing");
        }
    }
    for (int k = 0; k < vehicles; ++k) {
        std::vector<Term> t;
        out_arcs(t, k, 0, 1.0);
        add(fmt::format("start_{}", k), std::move(t), Sense::eq, 1.0, "depot_start");
        std::vector<Term> u;
        in_arcs(u, k, end, 1.0);
        add(fmt::format("end_{}", k), std::move(u), Sense::eq, 1.0, "depot_end");
    }
    for (int k = 0; k < vehicles; ++k) {
        for (int i = 1; i <= 2 * n; ++i) {
            std::vector<Term> t;
            in_arcs(t, k, i, 1.0);
            out_arcs(t, k, i, -1.0);
            add(fmt::format("flow_{}_{}", k, i), std::move(t), Sense::eq, 0.0, "flow");
        }
    }

    // Propagation along arc (i, j): var_j - var_i - M * sum_k x_kij >= step - M.
    auto time_m = [&](int i, int j) {
        return std::max(0.0, inst.node(i).window.latest + inst.node(i).service + inst.time(i, j) - inst.node(j).window.earliest);
    };
    auto load_m = [&](int i) { return std::min(capacity, capacity + inst.node(i).load); };
    auto propagate = [&](const std::string& name, int from_var, int to_var, const std::vector<int>& arcs, double big,
                         double step, const char* family) {
        std::vector<Term> t{{to_var, 1.0}, {from_var, -1.0}};
        for (int a : arcs) add_term(t, a, -big);
        add(name, std::move(t), Sense::ge, step - big, family);
    };
    for (int pass = 0; pass < 2; ++pass) {
        const bool time = pass == 0;
        const char* tag = time ? "time" : "load";
        auto var = [&](int k, int node) { return time ? bvar(k, node) : qvar(k, node); };
        auto big = [&](int i, int j) { return time ? time_m(i, j) : load_m(i); };
        auto step = [&](int i, int j) {
            return time ? inst.node(i).service + inst.time(i, j) : static_cast<double>(inst.node(j).load);
        };
        for (int k = 0; k < vehicles; ++k) {
            for (int j = 1; j <= n; ++j) {
                propagate(fmt::format("{}_{}_0_{}", tag, k, j), var(k, 0), var(k, j), {x(k, 0, j)}, big(0, j), step(0, j),
                          time ? "time_depot" : "load_depot");
            }
        }
        for (int i = 1; i <= 2 * n; ++i) {
            for (int j = 1; j <= 2 * n; ++j) {
                if (!allowed_arc(i, j, n)) continue;
                std::vector<int> arcs;
                for (int k = 0; k < vehicles; ++k) arcs.push_back(x(k, i, j));
                propagate(fmt::format("{}_{}_{}", tag, i, j), var(0, i), var(0, j), arcs, big(i, j), step(i, j),
                          time ? "time_inner" : "load_inner");
            }
        }
        for (int k = 0; k < vehicles; ++k) {
            for (int i = 0; i <= 2 * n; ++i) {
                if (!allowed_arc(i, end, n)) continue;
                propagate(fmt::format("{}_{}_{}_{}", tag, k, i, end), var(k, i), var(k, end), {x(k, i, end)}, big(i, end),
                          step(i, end), time ? "time_end" : "load_end");
            }
        }
    }

    for (const Request& r : inst.requests()) {
        add(fmt::format("ride_{}", r.id), {{l0 + r.id - 1, 1.0}, {b0 + r.dropoff - 1, -1.0}, {b0 + r.pickup - 1, 1.0}}, Sense::eq,
            -inst.node(r.pickup).service, "ride_time");
    }
    for (int k = 0; k < vehicles; ++k) {
        add(fmt::format("duration_{}", k), {{bvar(k, end), 1.0}, {bvar(k, 0), -1.0}}, Sense::le, inst.fleet().max_route_duration,
            "duration");
    }
    for (const Request& r : inst.requests()) {
        const ClassParams& cp = scenario.model().params_for(r.class_id);
        const double fare = scenario.terms(r.id).fare;
        const int v = v0 + r.id - 1;
        const int l = l0 + r.id - 1;
        if (r.direction == Direction::inbound) {
            add(fmt::format("utility_{}", r.id), {{v, 1.0}, {l, cp.beta_T}, {b0 + r.pickup - 1, cp.beta_S}}, Sense::eq,
                -cp.beta_F * fare + cp.beta_S * inst.node(r.pickup).window.earliest, "utility");
        } else {
            add(fmt::format("utility_{}", r.id), {{v, 1.0}, {l, cp.beta_T}, {b0 + r.dropoff - 1, -cp.beta_S}}, Sense::eq,
                -cp.beta_F * fare - cp.beta_S * inst.node(r.dropoff).window.latest, "utility");
        }
    }
    for (const Request& r : inst.requests()) {
        const ClassParams& cp = scenario.model().params_for(r.class_id);
        const double w = big_m(r, scenario.model().fares, cp, inst).value;
        std::vector<Term> t{{v0 + r.id - 1, -1.0}};
        add_term(t, y(r.id), w);
        add(fmt::format("chance_{}", r.id), std::move(t), Sense::le, w - private_utility(r, cp, inst) + chance_threshold(cp),
            "chance");
    }
    for (const Request& r : inst.requests()) {
        std::vector<Term> t;
        for (int k = 0; k < vehicles; ++k) out_arcs(t, k, r.pickup, 1.0);
        t.push_back({y(r.id), -1.0});
        add(fmt::format("link_{}", r.id), std::move(t), Sense::eq, 0.0, "link");
    }
    return m;
}

// ---------------------------------------------------------------------------
// LP text
// ---------------------------------------------------------------------------

namespace {

std::string number(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    return fmt::format("{:.15g}", v + 0.0);
}

class LineWriter {
public:
    explicit LineWriter(std::string& out) : out_(out) {}

    void start(const std::string& head) {
        out_ += head;
        width_ = head.size();
    }
    void token(const std::string& tok) {
        if (width_ + tok.size() + 1 > kWidth) {
            out_ += "\n  ";
            width_ = 2;
        } else {
            out_ += ' ';
            ++width_;
        }
        out_ += tok;
        width_ += tok.size();
    }
    void finish() { out_ += '\n'; }

private:
    static constexpr std::size_t kWidth = 200;
    std::string& out_;
    std::size_t width_ = 0;
};

void write_terms(LineWriter& w, const MilpModel& m, const std::vector<Term>& terms) {
    bool first = true;
    for (const Term& t : terms) {
        const std::string& name = m.variables[static_cast<std::size_t>(t.var)].name;
        if (first) {
            w.token(t.coef < 0 ? fmt::format("-{} {}", number(-t.coef), name) : fmt::format("{} {}", number(t.coef), name));
        } else {
            w.token(fmt::format("{} {} {}", t.coef < 0 ? '-' : '+', number(std::abs(t.coef)), name));
        }
        first = false;
    }
}

const char* sense_text(Sense s) {
    switch (s) {
        case Sense::le: return "<=";
        case Sense::ge: return ">=";
        case Sense::eq: return "=";
    }
    return "=";
}

}  // namespace

std::string export_lp(const MilpModel& m) {
    std::string out;
    out += fmt::format("\\ {} variables ({} binary), {} constraints\n", m.variables.size(), m.count(VarKind::binary),
                       m.constraints.size());
    LineWriter w(out);
    out += "Maximize\n";
    w.start(" obj:");
    write_terms(w, m, m.objective);
    w.finish();
    out += "Subject To\n";
    for (const Constraint& c : m.constraints) {
        w.start(fmt::format(" {}:", c.name));
        write_terms(w, m, c.terms);
        w.token(fmt::format("{} {}", sense_text(c.sense), number(c.rhs)));
        w.finish();
    }
    out += "Bounds\n";
    for (const Variable& v : m.variables) {
        if (v.kind == VarKind::binary) {
            if (v.lower == 0.0 && v.upper == 1.0) continue;
        }
        if (v.lower == v.upper) {
            out += fmt::format(" {} = {}\n", v.name, number(v.lower));
        } else {
            out += fmt::format(" {} <= {} <= {}\n", number(v.lower), v.name, number(v.upper));
        }
    }
    out += "Binaries\n";
    w.start("");
    bool any = false;
    for (const Variable& v : m.variables) {
        if (v.kind != VarKind::binary) continue;
        w.token(v.name);
        any = true;
    }
    if (any) w.finish();
    out += "End\n";
    return out;
}

namespace {

bool parse_number(const std::string& tok, double& value) {
    if (tok == "+inf" || tok == "inf" || tok == "+infinity" || tok == "infinity") {
        value = std::numeric_limits<double>::infinity();
        return true;
    }
    if (tok == "-inf" || tok == "-infinity") {
        value = -std::numeric_limits<double>::infinity();
        return true;
    }
    if (tok.empty()) return false;
    char* end = nullptr;
    value = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

double need_number(const std::string& tok) {
    double v = 0.0;
    if (!parse_number(tok, v)) throw std::runtime_error("LP: expected a number, got '" + tok + "'");
    return v;
}

bool is_sense(const std::string& tok) { return tok == "<=" || tok == ">=" || tok == "=" || tok == "=<" || tok == "=>"; }

Sense to_sense(const std::string& tok) {
    if (tok == "<=" || tok == "=<") return Sense::le;
    if (tok == ">=" || tok == "=>") return Sense::ge;
    return Sense::eq;
}

}  // namespace

MilpModel read_lp(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto comment = line.find('\\');
        if (comment != std::string::npos) line.erase(comment);
        std::istringstream words(line);
        std::string tok;
        while (words >> tok) tokens.push_back(tok);
    }

    MilpModel m;
    std::vector<char> bounded;
    auto var = [&](const std::string& name) {
        int id = m.find(name);
        if (id < 0) {
            id = m.add_variable({name, VarKind::continuous, 0.0, std::numeric_limits<double>::infinity(), ""});
            bounded.push_back(0);
        }
        return id;
    };

    std::size_t pos = 0;
    auto at = [&](std::size_t i) -> const std::string& {
        if (i >= tokens.size()) throw std::runtime_error("LP: unexpected end of file");
        return tokens[i];
    };
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    auto is_section = [&](std::size_t i) {
        if (i >= tokens.size()) return true;
        const std::string s = lower(tokens[i]);
        return s == "subject" || s == "bounds" || s == "binaries" || s == "binary" || s == "end" || s == "general" ||
               s == "generals";
    };
    // Terms up to a sense token or a section keyword.
    auto read_terms = [&](std::vector<Term>& terms) {
        while (pos < tokens.size() && !is_sense(tokens[pos]) && !is_section(pos)) {
            double sign = 1.0;
            if (tokens[pos] == "+" || tokens[pos] == "-") {
                sign = tokens[pos] == "-" ? -1.0 : 1.0;
                ++pos;
            }
            double coef = 1.0;
            double parsed = 0.0;
            if (parse_number(at(pos), parsed)) {
                coef = parsed;
                ++pos;
            }
            terms.push_back({var(at(pos)), sign * coef});
            ++pos;
        }
    };

    enum class Section { none, objective, rows, bounds, binaries } section = Section::none;
    while (pos < tokens.size()) {
        const std::string low = lower(tokens[pos]);
        if (low == "maximize" || low == "maximise" || low == "max") {
            section = Section::objective;
            ++pos;
            if (pos < tokens.size() && tokens[pos].back() == ':') ++pos;
            read_terms(m.objective);
            continue;
        }
        if (low == "subject") {
            section = Section::rows;
            pos += 2;
            continue;
        }
        if (low == "bounds") {
            section = Section::bounds;
            ++pos;
            continue;
        }
        if (low == "binaries" || low == "binary") {
            section = Section::binaries;
            ++pos;
            continue;
        }
        if (low == "end") break;
        switch (section) {
            case Section::rows: {
                Constraint c;
                if (tokens[pos].back() == ':') {
                    c.name = tokens[pos].substr(0, tokens[pos].size() - 1);
                    ++pos;
                } else {
                    c.name = fmt::format("c{}", m.constraints.size() + 1);
                }
                read_terms(c.terms);
                c.sense = to_sense(at(pos));
                c.rhs = need_number(at(pos + 1));
                pos += 2;
                m.constraints.push_back(std::move(c));
                break;
            }
            case Section::bounds: {
                const std::string& a = at(pos);
                const std::string& op = at(pos + 1);
                double value = 0.0;
                if (op == "=") {
                    auto& v = m.variables[static_cast<std::size_t>(var(a))];
                    v.lower = v.upper = need_number(at(pos + 2));
                    bounded[static_cast<std::size_t>(m.find(a))] = 1;
                    pos += 3;
                } else if (parse_number(a, value) && is_sense(op)) {
                    const int id = var(at(pos + 2));
                    auto& v = m.variables[static_cast<std::size_t>(id)];
                    (to_sense(op) == Sense::le ? v.lower : v.upper) = value;
                    pos += 3;
                    if (pos + 1 < tokens.size() && is_sense(tokens[pos])) {
                        (to_sense(tokens[pos]) == Sense::le ? v.upper : v.lower) = need_number(at(pos + 1));
                        pos += 2;
                    }
                    bounded[static_cast<std::size_t>(id)] = 1;
                } else if (is_sense(op)) {
                    const int id = var(a);
                    auto& v = m.variables[static_cast<std::size_t>(id)];
                    (to_sense(op) == Sense::le ? v.upper : v.lower) = need_number(at(pos + 2));
                    bounded[static_cast<std::size_t>(id)] = 1;
                    pos += 3;
                } else {
                    throw std::runtime_error("LP: malformed bound near '" + a + "'");
                }
                break;
            }
            case Section::binaries: {
                const int id = var(tokens[pos]);
                auto& v = m.variables[static_cast<std::size_t>(id)];
                v.kind = VarKind::binary;
                if (!bounded[static_cast<std::size_t>(id)]) {
                    v.lower = 0.0;
                    v.upper = 1.0;
                }
                ++pos;
                break;
            }
            default: throw std::runtime_error("LP: content outside any section: '" + tokens[pos] + "'");
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

std::vector<ModelViolation> evaluate(const MilpModel& m, const std::vector<double>& values, double tol) {
    if (values.size() != m.variables.size()) {
        throw std::invalid_argument(fmt::format("{} values for {} variables", values.size(), m.variables.size()));
    }
    std::vector<ModelViolation> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Variable& v = m.variables[i];
        const double x = values[i];
        if (x < v.lower - tol) out.push_back({v.name, x, v.lower});
        if (x > v.upper + tol) out.push_back({v.name, x, v.upper});
        if (v.kind == VarKind::binary && std::abs(x - std::round(x)) > tol) out.push_back({v.name, x, std::round(x)});
    }
    for (const Constraint& c : m.constraints) {
        double lhs = 0.0;
        for (const Term& t : c.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
        const double slack = tol * std::max(1.0, std::abs(c.rhs));
        const bool bad = (c.sense == Sense::le && lhs > c.rhs + slack) || (c.sense == Sense::ge && lhs < c.rhs - slack) ||
                         (c.sense == Sense::eq && std::abs(lhs - c.rhs) > slack);
        if (bad) out.push_back({c.name, lhs, c.rhs});
    }
    return out;
}

double objective_value(const MilpModel& m, const std::vector<double>& values) {
    double z = 0.0;
    for (const Term& t : m.objective) z += t.coef * values[static_cast<std::size_t>(t.var)];
    return z;
}

std::vector<double> assignment_from_solution(const MilpModel& m, const Solution& sol, const Scenario& scenario) {
    const Instance& inst = scenario.instance();
    const int end = inst.destination_depot();
    std::vector<double> x(m.variables.size(), 0.0);
    auto set = [&](const std::string& name, double value) {
        const int id = m.find(name);
        if (id < 0) throw std::invalid_argument("model has no variable " + name);
        x[static_cast<std::size_t>(id)] = value;
    };

    for (const Route& r : sol.routes) {
        for (std::size_t s = 0; s + 1 < r.stops.size(); ++s) {
            set(fmt::format("x_{}_{}_{}", r.vehicle, r.stops[s], r.stops[s + 1]), 1.0);
        }
        for (std::size_t s = 0; s < r.stops.size(); ++s) {
            const int node = r.stops[s];
            if (node == 0) {
                set(fmt::format("Bdep0_{}", r.vehicle), r.start[s]);
                set(fmt::format("Qdep0_{}", r.vehicle), r.load[s]);
            } else if (node == end) {
                set(fmt::format("Bdep1_{}", r.vehicle), r.start[s]);
                set(fmt::format("Qdep1_{}", r.vehicle), r.load[s]);
            } else {
                set(fmt::format("B_{}", node), r.start[s]);
                set(fmt::format("Q_{}", node), r.load[s]);
            }
        }
    }

    const double max_ride = inst.fleet().max_ride_time;
    for (const Request& req : inst.requests()) {
        const Node& pick = inst.node(req.pickup);
        const Node& drop = inst.node(req.dropoff);
        double bp = 0.0;
        double bd = 0.0;
        if (sol.is_accepted(req.id)) {
            set(fmt::format("y_{}", req.id), 1.0);
            const Route& r = sol.routes[static_cast<std::size_t>(sol.vehicle_of(req.id, inst))];
            bp = r.start[static_cast<std::size_t>(r.position_of(req.pickup))];
            bd = r.start[static_cast<std::size_t>(r.position_of(req.dropoff))];
        } else {
            // Earliest pickup whose dropoff can land in its window within the ride-time bounds.
            const double direct = inst.direct_time(req);
            bp = std::max(pick.window.earliest, drop.window.earliest - pick.service - max_ride);
            bp = std::min(bp, pick.window.latest);
            bd = std::clamp(bp + pick.service + direct, drop.window.earliest, drop.window.latest);
            set(fmt::format("B_{}", req.pickup), bp);
            set(fmt::format("B_{}", req.dropoff), bd);
            set(fmt::format("Q_{}", req.pickup), std::max(0, pick.load));
            set(fmt::format("Q_{}", req.dropoff), std::max(0, drop.load));
        }
        const ClassParams& cp = scenario.model().params_for(req.class_id);
        const double ride = bd - bp - pick.service;
        const double delay = req.direction == Direction::inbound ? bp - pick.window.earliest : drop.window.latest - bd;
        set(fmt::format("L_{}", req.id), ride);
        set(fmt::format("V_{}", req.id), -cp.beta_F * scenario.terms(req.id).fare - cp.beta_T * ride - cp.beta_S * delay);
    }
    return x;
}

}  // namespace ccdarp
