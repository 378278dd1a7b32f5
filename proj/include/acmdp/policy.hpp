#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "acmdp/dynamics.hpp"
#include "acmdp/rewards.hpp"
#include "acmdp/vi_oracle.hpp"

namespace acmdp {

/// Absolute tolerance under which two decision values count as tied.
inline constexpr double kTieTolerance = 1e-9;

/// DV(state, action) = q^a_i + beta * sum_j p^a_ij V(j), indexed [state][action].
struct DecisionValueTable {
    std::vector<std::array<double, 2>> values;

    [[nodiscard]] double at(std::size_t state, Action act) const { return values.at(state)[to_index(act)]; }
    [[nodiscard]] std::size_t size() const { return values.size(); }
};

struct PolicyMap {
    std::vector<Action> actions;
    std::vector<double> gaps;  // |DV(allow) - DV(deny)|

    [[nodiscard]] std::size_t size() const { return actions.size(); }
};

[[nodiscard]] double decision_value(const Scenario& sc, const TransitionModel& m, const ValueVector& v,
                                    std::size_t state, Action act);

[[nodiscard]] DecisionValueTable decision_values(const Scenario& sc, const TransitionModel& m, const ValueVector& v);

/// Argmax over decision values; Deny wins ties within `tie_tolerance`.
[[nodiscard]] PolicyMap extract_policy(const DecisionValueTable& dv, double tie_tolerance = kTieTolerance);
[[nodiscard]] PolicyMap extract_policy(const Scenario& sc, const TransitionModel& m, const ValueVector& v,
                                       double tie_tolerance = kTieTolerance);

[[nodiscard]] Action choose_action(double dv_deny, double dv_allow, double tie_tolerance = kTieTolerance);

}  // namespace acmdp
