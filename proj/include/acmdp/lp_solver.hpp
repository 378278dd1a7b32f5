#pragma once

#include <cstddef>
#include <vector>

#include "acmdp/dynamics.hpp"
#include "acmdp/rewards.hpp"
#include "acmdp/simplex.hpp"

namespace acmdp {

/// Bellman LP: min sum_i V_i  s.t.  V_i - beta * sum_j p^a_ij V_j >= q^a_i  for every state i and action a.
///
/// Constraints are emitted state-major, Deny before Allow, so constraint
/// 2 * i + action belongs to state i.
[[nodiscard]] LinearProgram build_bellman_lp(const Scenario& sc, const TransitionModel& m);

struct LpValueResult {
    LpSolution lp;
    double max_violation = 0.0;
};

/// Builds and solves the Bellman LP for `sc`.
[[nodiscard]] LpValueResult solve_bellman_lp(const Scenario& sc, const TransitionModel& m,
                                             const SimplexOptions& options = {});

struct BellmanViolation {
    std::size_t state = 0;
    Action action = Action::Deny;
    double amount = 0.0;  // q + beta * E[V'] - V, positive when violated
};

struct VerificationReport {
    double max_violation = 0.0;       // max over constraints of (rhs - lhs), clamped at 0
    std::vector<double> min_slack;    // per state, min over actions of V_i - (q + beta * E[V'])
    std::vector<BellmanViolation> violations;

    /// Every state has a constraint whose slack is within `tol` of zero.
    [[nodiscard]] bool all_tight(double tol) const;
    [[nodiscard]] std::size_t tight_count(double tol) const;
};

/// Checks `values` against every Bellman constraint. Violations larger than `tol` are listed.
[[nodiscard]] VerificationReport verify_solution(const Scenario& sc, const TransitionModel& m,
                                                 const std::vector<double>& values, double tol = 1e-9);

}  // namespace acmdp
