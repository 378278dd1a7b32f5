#pragma once

#include <array>
#include <string>
#include <vector>

#include "acmdp/dynamics.hpp"
#include "acmdp/state_space.hpp"

namespace acmdp {

struct RewardTables {
    std::vector<double> access;    // indexed by access_bit_index
    std::vector<double> resource;  // indexed by resource

    friend bool operator==(const RewardTables&, const RewardTables&) = default;
};

/// How transitions out of an empty-request state are rewarded.
///  - EpsZero: the whole transition reward is zero.
///  - EpsAccrues: the emergency penalty of the reached state still applies.
enum class RewardVariant { EpsZero, EpsAccrues };

std::string_view to_string(RewardVariant v);
std::optional<RewardVariant> parse_variant(std::string_view token);

/// Full parameterization of an access control MDP.
struct Scenario {
    ModelDims dims;
    std::vector<std::string> user_names;
    std::vector<std::string> resource_names;
    RewardTables rewards;
    EmergencyMatrix emergency;
    RequestBehavior behavior = RequestBehavior::Unique;
    RewardVariant variant = RewardVariant::EpsZero;
    double beta = 0.0;

    [[nodiscard]] double access_reward(const Access& a) const {
        return rewards.access[static_cast<std::size_t>(access_bit_index(a, dims))];
    }

    [[nodiscard]] TransitionModel transition_model() const { return TransitionModel(dims, emergency, behavior); }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Returns human-readable violations of the scenario invariants; empty when valid.
[[nodiscard]] std::vector<std::string> scenario_violations(const Scenario& sc);

/// Throws std::invalid_argument listing every violation.
void validate_scenario(const Scenario& sc);

/// Penalty of an alert state: sum of reward_resource over resources no user accesses.
[[nodiscard]] double reward_emresource(const Scenario& sc, Emergency e, AccessSetIndex k);

[[nodiscard]] double reward_transition(const Scenario& sc, const State& from, Action act, const State& to);

/// q = sum_j p_ij * w_ij over the successors of (state, act).
[[nodiscard]] double immediate_reward(const Scenario& sc, const TransitionModel& m, std::size_t state, Action act);

/// q for every state and action, indexed [state][action].
[[nodiscard]] std::vector<std::array<double, 2>> immediate_rewards(const Scenario& sc, const TransitionModel& m);

}  // namespace acmdp
