#include "acmdp/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace acmdp {

LinearProgram build_bellman_lp(const Scenario& sc, const TransitionModel& m) {
    if (!(sc.beta >= 0.0 && sc.beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
    const std::size_t n = m.num_states();
    const auto q = immediate_rewards(sc, m);

    LinearProgram lp;
    lp.num_variables = n;
    lp.objective.assign(n, 1.0);
    lp.constraints.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (Action act : kActions) {
            Constraint& con = lp.add_constraint(Relation::GreaterEqual, q[i][to_index(act)]);
            con.coefficients[i] = 1.0;
            for (const Edge& e : m.edges(i, act)) con.coefficients[e.target] -= sc.beta * e.probability;
        }
    }
    return lp;
}

LpValueResult solve_bellman_lp(const Scenario& sc, const TransitionModel& m, const SimplexOptions& options) {
    const LinearProgram lp = build_bellman_lp(sc, m);
    LpValueResult out;
    out.lp = simplex_solve(lp, options);
    if (out.lp.status == LpStatus::Optimal) out.max_violation = max_violation(lp, out.lp.values);
    return out;
}

bool VerificationReport::all_tight(double tol) const { return tight_count(tol) == min_slack.size(); }

std::size_t VerificationReport::tight_count(double tol) const {
    return static_cast<std::size_t>(
        std::count_if(min_slack.begin(), min_slack.end(), [tol](double s) { return std::abs(s) <= tol; }));
}

VerificationReport verify_solution(const Scenario& sc, const TransitionModel& m, const std::vector<double>& values,
                                   double tol) {
    const std::size_t n = m.num_states();
    if (values.size() != n) throw std::invalid_argument("value vector length does not match the state count");
    const auto q = immediate_rewards(sc, m);

    VerificationReport report;
    report.min_slack.assign(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (Action act : kActions) {
            double backup = q[i][to_index(act)];
            for (const Edge& e : m.edges(i, act)) backup += sc.beta * e.probability * values[e.target];
            const double slack = values[i] - backup;
            report.min_slack[i] = std::min(report.min_slack[i], slack);
            report.max_violation = std::max(report.max_violation, -slack);
            if (-slack > tol) report.violations.push_back({i, act, -slack});
        }
    }
    return report;
}

}  // namespace acmdp
