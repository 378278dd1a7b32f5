#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "acmdp/dynamics.hpp"
#include "acmdp/rewards.hpp"

namespace acmdp {

using ValueVector = std::vector<double>;

/// One synchronous Bellman backup: V'_i = max_a (q^a_i + beta * sum_j p^a_ij V_j).
[[nodiscard]] ValueVector bellman_backup(const Scenario& sc, const TransitionModel& m, const ValueVector& v);

struct ViOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 100000;
};

struct ViResult {
    ValueVector values;
    std::size_t iterations = 0;
    double last_delta = 0.0;  // sup-norm of the final update
    bool converged = false;
};

/// Value iteration from V = 0 until successive iterates differ by less than the tolerance.
[[nodiscard]] ViResult value_iterate(const Scenario& sc, const TransitionModel& m, const ViOptions& options = {});

/// Sup-norm distance between two value vectors of equal length.
[[nodiscard]] double sup_distance(const ValueVector& a, const ValueVector& b);

}  // namespace acmdp
