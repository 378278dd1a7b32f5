#include "acmdp/dynamics.hpp"

#include <cmath>

namespace acmdp {

EmergencyMatrix EmergencyMatrix::from_rates(double calm_to_alert, double alert_to_alert) {
    EmergencyMatrix m;
    m.p[0] = {1.0 - calm_to_alert, calm_to_alert};
    m.p[1] = {1.0 - alert_to_alert, alert_to_alert};
    return m;
}

bool EmergencyMatrix::is_stochastic(double tol) const {
    for (const auto& row : p) {
        for (double v : row) {
            if (!(v >= 0.0 && v <= 1.0)) return false;
        }
        if (std::abs(row[0] + row[1] - 1.0) > tol) return false;
    }
    return true;
}

std::string_view to_string(RequestBehavior b) {
    switch (b) {
        case RequestBehavior::Unique: return "unique";
        case RequestBehavior::Once: return "once";
        case RequestBehavior::All: return "all";
    }
    return "unknown";
}

std::optional<RequestBehavior> parse_behavior(std::string_view token) {
    if (token == "unique") return RequestBehavior::Unique;
    if (token == "once") return RequestBehavior::Once;
    if (token == "all") return RequestBehavior::All;
    return std::nullopt;
}

AccessSetIndex next_access_set(AccessSetIndex k, const Request& req, Action act, const ModelDims& dims) {
    if (act == Action::Deny || req.is_empty()) return k;
    return set_insert(k, req.access(), dims);
}

std::vector<RequestOutcome> request_distribution(RequestBehavior b, const Request& current,
                                                 AccessSetIndex k_next, const ModelDims& dims) {
    const int n = dims.num_accesses();
    std::vector<RequestOutcome> out;
    switch (b) {
        case RequestBehavior::Unique:
            out.push_back({Request::empty(), 1.0});
            break;
        case RequestBehavior::All: {
            const double p = 1.0 / n;
            for (int bit = 0; bit < n; ++bit) out.push_back({Request{access_from_bit(bit, dims)}, p});
            break;
        }
        case RequestBehavior::Once: {
            if (current.is_empty()) {
                out.push_back({Request::empty(), 1.0});
                break;
            }
            for (int bit = 0; bit < n; ++bit) {
                if (((k_next.bits >> bit) & 1U) == 0U) out.push_back({Request{access_from_bit(bit, dims)}, 0.0});
            }
            out.push_back({Request::empty(), 0.0});
            const double p = 1.0 / static_cast<double>(out.size());
            for (auto& o : out) o.probability = p;
            break;
        }
    }
    return out;
}

TransitionModel::TransitionModel(ModelDims dims, EmergencyMatrix emergency, RequestBehavior behavior, int cap)
    : space_(dims, cap), emergency_(emergency), behavior_(behavior) {
    const std::size_t n = space_.size();
    offsets_.reserve(2 * n + 1);
    offsets_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        const State s = space_.state_at(i);
        for (Action act : kActions) {
            const AccessSetIndex k_next = next_access_set(s.granted, s.request, act, dims);
            const auto requests = request_distribution(behavior_, s.request, k_next, dims);
            for (Emergency e2 : kEmergencies) {
                const double pe = emergency_(s.emergency, e2);
                if (pe <= 0.0) continue;
                for (const auto& r : requests) {
                    const double p = pe * r.probability;
                    if (p <= 0.0) continue;
                    edges_.push_back({space_.index_of(State{e2, k_next, r.request}), p});
                }
            }
            offsets_.push_back(edges_.size());
        }
    }
}

std::span<const Edge> TransitionModel::edges(std::size_t state, Action act) const {
    const std::size_t row = 2 * state + to_index(act);
    return std::span<const Edge>(edges_).subspan(offsets_.at(row), offsets_[row + 1] - offsets_[row]);
}

std::vector<Successor> TransitionModel::successors(const State& s, Action act) const {
    std::vector<Successor> out;
    for (const Edge& e : edges(space_.index_of(s), act)) out.push_back({space_.state_at(e.target), e.probability});
    return out;
}

std::vector<StochasticViolation> validate_stochastic(const TransitionModel& m, double tol) {
    std::vector<StochasticViolation> out;
    for (std::size_t i = 0; i < m.num_states(); ++i) {
        for (Action act : kActions) {
            double total = 0.0;
            bool in_range = true;
            for (const Edge& e : m.edges(i, act)) {
                total += e.probability;
                if (!(e.probability > 0.0 && e.probability <= 1.0)) in_range = false;
            }
            if (!in_range || std::abs(total - 1.0) > tol) out.push_back({i, act, total});
        }
    }
    return out;
}

}  // namespace acmdp
