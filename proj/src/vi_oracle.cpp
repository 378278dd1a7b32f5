#include "acmdp/vi_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acmdp {

namespace {

// Jacobi sweep: reads only `v`, writes only `out`.
void backup_into(const Scenario& sc, const TransitionModel& m, const std::vector<std::array<double, 2>>& q,
                 const ValueVector& v, ValueVector& out) {
    for (std::size_t i = 0; i < m.num_states(); ++i) {
        double best = 0.0;
        for (Action act : kActions) {
            double dv = q[i][to_index(act)];
            for (const Edge& e : m.edges(i, act)) dv += sc.beta * e.probability * v[e.target];
            best = act == Action::Deny ? dv : std::max(best, dv);
        }
        out[i] = best;
    }
}

}  // namespace

ValueVector bellman_backup(const Scenario& sc, const TransitionModel& m, const ValueVector& v) {
    if (v.size() != m.num_states()) throw std::invalid_argument("value vector length does not match the state count");
    ValueVector out(v.size());
    backup_into(sc, m, immediate_rewards(sc, m), v, out);
    return out;
}

ViResult value_iterate(const Scenario& sc, const TransitionModel& m, const ViOptions& options) {
    if (!(sc.beta >= 0.0 && sc.beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
    const auto q = immediate_rewards(sc, m);
    ViResult result;
    ValueVector current(m.num_states(), 0.0);
    ValueVector next(m.num_states(), 0.0);
    while (result.iterations < options.max_iterations) {
        backup_into(sc, m, q, current, next);
        ++result.iterations;
        result.last_delta = sup_distance(current, next);
        current.swap(next);
        // With no discount one backup is exact.
        if (result.last_delta < options.tolerance || sc.beta == 0.0) {
            result.converged = true;
            break;
        }
    }
    result.values = std::move(current);
    return result;
}

double sup_distance(const ValueVector& a, const ValueVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("value vectors differ in length");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace acmdp
