#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace acmdp {

enum class Relation { GreaterEqual, LessEqual, Equal };

struct Constraint {
    std::vector<double> coefficients;  // dense, one per variable
    Relation relation = Relation::GreaterEqual;
    double rhs = 0.0;
};

/// minimize objective . x subject to the constraints; every variable is free.
struct LinearProgram {
    std::size_t num_variables = 0;
    std::vector<double> objective;
    std::vector<Constraint> constraints;

    /// Appends a constraint and returns a reference to it; coefficients are zero-filled.
    Constraint& add_constraint(Relation relation, double rhs);
};

/// Throws std::invalid_argument if a coefficient vector has the wrong length or a value is not finite.
void validate_lp(const LinearProgram& lp);

/// Writes one line per constraint: `c0 c1 ... >= rhs`, preceded by the objective line.
void dump_lp(const LinearProgram& lp, std::ostream& out);

enum class LpStatus { Optimal, Unbounded, Infeasible, IterationLimit };

std::string_view to_string(LpStatus s);

enum class PivotRule {
    Bland,    // smallest eligible index; never cycles
    Dantzig,  // most negative reduced cost, falls back to Bland on stalls
};

struct SimplexOptions {
    double pivot_tolerance = 1e-10;
    double feasibility_tolerance = 1e-9;
    std::size_t max_iterations = 0;  // 0 means 100 * (rows + columns)
    PivotRule rule = PivotRule::Bland;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> values;
    double objective = 0.0;
    std::size_t pivots = 0;
};

/// Dense two-phase primal simplex. Free variables are split as x = x+ - x-.
[[nodiscard]] LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options = {});

/// Largest amount by which `x` violates any constraint of `lp`.
[[nodiscard]] double max_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace acmdp
