#include "acmdp/rewards.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace acmdp {

std::string_view to_string(RewardVariant v) { return v == RewardVariant::EpsZero ? "eps_zero" : "eps_accrues"; }

std::optional<RewardVariant> parse_variant(std::string_view token) {
    if (token == "eps_zero") return RewardVariant::EpsZero;
    if (token == "eps_accrues") return RewardVariant::EpsAccrues;
    return std::nullopt;
}

std::vector<std::string> scenario_violations(const Scenario& sc) {
    std::vector<std::string> out;
    try {
        validate_dims(sc.dims);
    } catch (const std::exception& e) {
        out.emplace_back(e.what());
        return out;
    }
    const auto nu = static_cast<std::size_t>(sc.dims.num_users);
    const auto nr = static_cast<std::size_t>(sc.dims.num_resources);
    if (sc.user_names.size() != nu) out.emplace_back("user label count does not match num_users");
    if (sc.resource_names.size() != nr) out.emplace_back("resource label count does not match num_resources");
    if (std::set<std::string>(sc.user_names.begin(), sc.user_names.end()).size() != sc.user_names.size()) {
        out.emplace_back("user labels are not unique");
    }
    if (std::set<std::string>(sc.resource_names.begin(), sc.resource_names.end()).size() != sc.resource_names.size()) {
        out.emplace_back("resource labels are not unique");
    }
    if (sc.rewards.access.size() != nu * nr) out.emplace_back("reward_access table is not total");
    if (sc.rewards.resource.size() != nr) out.emplace_back("reward_resource table is not total");
    for (double v : sc.rewards.access) {
        if (!std::isfinite(v)) out.emplace_back("reward_access contains a non-finite value");
    }
    for (double v : sc.rewards.resource) {
        if (!std::isfinite(v)) out.emplace_back("reward_resource contains a non-finite value");
    }
    if (!sc.emergency.is_stochastic()) out.emplace_back("emergency matrix is not stochastic");
    if (!(sc.beta >= 0.0 && sc.beta < 1.0)) out.emplace_back("beta must lie in [0, 1)");
    return out;
}

void validate_scenario(const Scenario& sc) {
    const auto problems = scenario_violations(sc);
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "invalid scenario:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw std::invalid_argument(msg.str());
}

double reward_emresource(const Scenario& sc, Emergency e, AccessSetIndex k) {
    if (e == Emergency::Calm) return 0.0;
    double total = 0.0;
    for (int r = 0; r < sc.dims.num_resources; ++r) {
        bool accessed = false;
        for (int u = 0; u < sc.dims.num_users && !accessed; ++u) accessed = set_contains(k, Access{u, r}, sc.dims);
        if (!accessed) total += sc.rewards.resource[static_cast<std::size_t>(r)];
    }
    return total;
}

double reward_transition(const Scenario& sc, const State& from, Action act, const State& to) {
    if (from.request.is_empty() && sc.variant == RewardVariant::EpsZero) return 0.0;
    const double access = (act == Action::Allow && !from.request.is_empty()) ? sc.access_reward(from.request.access()) : 0.0;
    return access + reward_emresource(sc, to.emergency, to.granted);
}

double immediate_reward(const Scenario& sc, const TransitionModel& m, std::size_t state, Action act) {
    const State from = m.space().state_at(state);
    double q = 0.0;
    for (const Edge& e : m.edges(state, act)) {
        q += e.probability * reward_transition(sc, from, act, m.space().state_at(e.target));
    }
    return q;
}

std::vector<std::array<double, 2>> immediate_rewards(const Scenario& sc, const TransitionModel& m) {
    std::vector<std::array<double, 2>> q(m.num_states());
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (Action act : kActions) q[i][to_index(act)] = immediate_reward(sc, m, i, act);
    }
    return q;
}

}  // namespace acmdp
