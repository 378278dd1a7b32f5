#include "acmdp/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace acmdp {

double decision_value(const Scenario& sc, const TransitionModel& m, const ValueVector& v, std::size_t state,
                      Action act) {
    if (v.size() != m.num_states()) throw std::invalid_argument("value vector length does not match the state count");
    double dv = immediate_reward(sc, m, state, act);
    for (const Edge& e : m.edges(state, act)) dv += sc.beta * e.probability * v[e.target];
    return dv;
}

DecisionValueTable decision_values(const Scenario& sc, const TransitionModel& m, const ValueVector& v) {
    if (v.size() != m.num_states()) throw std::invalid_argument("value vector length does not match the state count");
    const auto q = immediate_rewards(sc, m);
    DecisionValueTable table;
    table.values.resize(m.num_states());
    for (std::size_t i = 0; i < m.num_states(); ++i) {
        for (Action act : kActions) {
            double dv = q[i][to_index(act)];
            for (const Edge& e : m.edges(i, act)) dv += sc.beta * e.probability * v[e.target];
            table.values[i][to_index(act)] = dv;
        }
    }
    return table;
}

Action choose_action(double dv_deny, double dv_allow, double tie_tolerance) {
    return dv_allow > dv_deny + tie_tolerance ? Action::Allow : Action::Deny;
}

PolicyMap extract_policy(const DecisionValueTable& dv, double tie_tolerance) {
    PolicyMap policy;
    policy.actions.reserve(dv.size());
    policy.gaps.reserve(dv.size());
    for (const auto& row : dv.values) {
        const double deny = row[to_index(Action::Deny)];
        const double allow = row[to_index(Action::Allow)];
        policy.actions.push_back(choose_action(deny, allow, tie_tolerance));
        policy.gaps.push_back(std::abs(allow - deny));
    }
    return policy;
}

PolicyMap extract_policy(const Scenario& sc, const TransitionModel& m, const ValueVector& v, double tie_tolerance) {
    return extract_policy(decision_values(sc, m, v), tie_tolerance);
}

}  // namespace acmdp
