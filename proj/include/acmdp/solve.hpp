#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "acmdp/lp_solver.hpp"
#include "acmdp/vi_oracle.hpp"

namespace acmdp {

enum class SolverKind { Lp, Vi };

std::string_view to_string(SolverKind k);
std::optional<SolverKind> parse_solver(std::string_view token);

struct SolveOptions {
    SolverKind solver = SolverKind::Lp;
    std::optional<double> tolerance;  // LP feasibility or VI stopping tolerance; solver default when unset
};

struct SolveResult {
    SolverKind solver = SolverKind::Lp;
    bool ok = false;
    std::string status;      // "optimal"/"converged" or the failure reason
    ValueVector values;
    std::size_t iterations = 0;  // simplex pivots or VI sweeps
    double residual = 0.0;       // LP max constraint violation or final VI update norm
};

/// Solves for the optimal value function with the chosen solver.
[[nodiscard]] SolveResult solve(const Scenario& sc, const TransitionModel& m, const SolveOptions& options = {});

}  // namespace acmdp
