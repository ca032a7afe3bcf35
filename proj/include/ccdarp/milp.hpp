#ifndef CCDARP_MILP_HPP
#define CCDARP_MILP_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccdarp/schedule.hpp"

namespace ccdarp {

enum class VarKind { binary, continuous };
enum class Sense { le, ge, eq };

struct Variable {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = 0.0;
    std::string symbol;  // model symbol the variable stands for, e.g. "x^k_ij"
};

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
    std::string family;
};

// Solver-agnostic linear model with a maximisation objective.
//
// Variable names: x_k_i_j (vehicle k from 0, arc i -> j over nodes 0..2n+1), y_i, B_i and Q_i for
// request nodes, Bdep0_k / Bdep1_k and Qdep0_k / Qdep1_k for the depots of vehicle k, L_i and V_i
// per request. Arcs outside the routing graph are kept with upper bound 0.
struct MilpModel {
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::vector<Term> objective;

    int add_variable(Variable v);
    // -1 when absent.
    int find(std::string_view name) const;
    int count(VarKind kind) const;
    int count_family(std::string_view family) const;

private:
    std::unordered_map<std::string, int> index_;
};

MilpModel build_model(const Scenario& scenario);

// LP text with sections Maximize, Subject To, Bounds, Binaries and End.
std::string export_lp(const MilpModel& model);

// Reads the subset of LP text written by export_lp. Variables are declared in order of first
// appearance; symbols and families are not recovered. Throws std::runtime_error on malformed input.
MilpModel read_lp(const std::string& text);

struct ModelViolation {
    std::string name;  // constraint or variable
    double value = 0.0;
    double limit = 0.0;
};

// Bounds, integrality and every constraint checked at tolerance tol (scaled by |rhs| for rows).
std::vector<ModelViolation> evaluate(const MilpModel& model, const std::vector<double>& values, double tol = 1e-6);

double objective_value(const MilpModel& model, const std::vector<double>& values);

// MILP point encoding a solution. Rejected requests get a pickup/dropoff timing inside their
// windows and ride-time bounds, unvisited nodes get the smallest admissible load.
std::vector<double> assignment_from_solution(const MilpModel& model, const Solution& sol, const Scenario& scenario);

}  // namespace ccdarp

#endif  // CCDARP_MILP_HPP
