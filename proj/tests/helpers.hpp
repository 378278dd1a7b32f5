#pragma once

#include <random>
#include <string>

#include "acmdp/policy.hpp"
#include "acmdp/rewards.hpp"
#include "acmdp/scenario_config.hpp"
#include "acmdp/solve.hpp"

namespace testing_helpers {

inline const char* kExampleScenarioText = R"(# two users, two resources
[model]
users = alice bob
resources = high low
beta = 0.9
behavior = once            # unique | once | all
reward_variant = eps_zero  # eps_zero | eps_accrues

[emergency]
calm_to_alert = 0.1
alert_to_alert = 1.0
# calm_to_calm and alert_to_calm are the row complements

[reward_access]            # one line per (user, resource), total
alice high = 10
alice low = 6
bob high = -10
bob low = 4

[reward_resource]          # one line per resource, total
high = -20
low = 0
)";

inline acmdp::Access alice_high() { return {0, 0}; }
inline acmdp::Access alice_low() { return {0, 1}; }
inline acmdp::Access bob_high() { return {1, 0}; }
inline acmdp::Access bob_low() { return {1, 1}; }

inline acmdp::State empty_set_state(acmdp::Emergency e, acmdp::Access a) {
    return acmdp::State{e, acmdp::AccessSetIndex{}, acmdp::Request{a}};
}

/// Random valid scenario with small dimensions; rewards are short decimals.
inline acmdp::Scenario random_scenario(std::mt19937& rng, int max_users = 2, int max_resources = 2) {
    std::uniform_int_distribution<int> users(1, max_users);
    std::uniform_int_distribution<int> resources(1, max_resources);
    std::uniform_int_distribution<int> reward(-20, 20);
    std::uniform_int_distribution<int> pct(0, 100);
    std::uniform_int_distribution<int> pick3(0, 2);
    acmdp::Scenario sc;
    sc.dims = acmdp::ModelDims{users(rng), resources(rng)};
    for (int u = 0; u < sc.dims.num_users; ++u) sc.user_names.push_back("u" + std::to_string(u));
    for (int r = 0; r < sc.dims.num_resources; ++r) sc.resource_names.push_back("r" + std::to_string(r));
    for (int i = 0; i < sc.dims.num_accesses(); ++i) sc.rewards.access.push_back(reward(rng));
    for (int r = 0; r < sc.dims.num_resources; ++r) sc.rewards.resource.push_back(-std::abs(reward(rng)));
    sc.emergency = acmdp::EmergencyMatrix::from_rates(pct(rng) / 100.0, pct(rng) / 100.0);
    sc.behavior = static_cast<acmdp::RequestBehavior>(pick3(rng));
    sc.variant = pct(rng) % 2 ? acmdp::RewardVariant::EpsZero : acmdp::RewardVariant::EpsAccrues;
    sc.beta = std::uniform_int_distribution<int>(0, 95)(rng) / 100.0;
    return sc;
}

inline acmdp::ValueVector solve_values(const acmdp::Scenario& sc, acmdp::SolverKind kind) {
    const auto m = sc.transition_model();
    return acmdp::solve(sc, m, acmdp::SolveOptions{kind, std::nullopt}).values;
}

}  // namespace testing_helpers
