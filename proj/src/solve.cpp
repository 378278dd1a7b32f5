#include "acmdp/solve.hpp"

namespace acmdp {

std::string_view to_string(SolverKind k) { return k == SolverKind::Lp ? "lp" : "vi"; }

std::optional<SolverKind> parse_solver(std::string_view token) {
    if (token == "lp") return SolverKind::Lp;
    if (token == "vi") return SolverKind::Vi;
    return std::nullopt;
}

SolveResult solve(const Scenario& sc, const TransitionModel& m, const SolveOptions& options) {
    SolveResult out;
    out.solver = options.solver;
    if (options.solver == SolverKind::Lp) {
        SimplexOptions simplex;
        if (options.tolerance) simplex.feasibility_tolerance = *options.tolerance;
        auto lp = solve_bellman_lp(sc, m, simplex);
        out.ok = lp.lp.status == LpStatus::Optimal;
        out.status = std::string(to_string(lp.lp.status));
        out.values = std::move(lp.lp.values);
        out.iterations = lp.lp.pivots;
        out.residual = lp.max_violation;
    } else {
        ViOptions vi;
        if (options.tolerance) vi.tolerance = *options.tolerance;
        auto result = value_iterate(sc, m, vi);
        out.ok = result.converged;
        out.status = result.converged ? "converged" : "iteration-limit";
        out.values = std::move(result.values);
        out.iterations = result.iterations;
        out.residual = result.last_delta;
    }
    return out;
}

}  // namespace acmdp
