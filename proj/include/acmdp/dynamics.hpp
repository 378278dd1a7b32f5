#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "acmdp/state_space.hpp"

namespace acmdp {

/// Tolerance for row sums of stochastic matrices and successor distributions.
inline constexpr double kStochasticTolerance = 1e-9;

/// 2x2 emergency status transition table, rows = source status, columns = target.
struct EmergencyMatrix {
    std::array<std::array<double, 2>, 2> p{{{1.0, 0.0}, {0.0, 1.0}}};

    /// Builds the matrix from the two free rates; the other entries are the row complements.
    static EmergencyMatrix from_rates(double calm_to_alert, double alert_to_alert);

    [[nodiscard]] double operator()(Emergency from, Emergency to) const { return p[to_index(from)][to_index(to)]; }
    [[nodiscard]] bool is_stochastic(double tol = kStochasticTolerance) const;

    friend bool operator==(const EmergencyMatrix&, const EmergencyMatrix&) = default;
};

enum class RequestBehavior { Unique, Once, All };

std::string_view to_string(RequestBehavior b);
std::optional<RequestBehavior> parse_behavior(std::string_view token);

struct RequestOutcome {
    Request request;
    double probability = 0.0;
};

/// Deterministic access-set factor: an allowed concrete request is added, anything else keeps the set.
[[nodiscard]] AccessSetIndex next_access_set(AccessSetIndex k, const Request& req, Action act, const ModelDims& dims);

/// Distribution of the next request to control.
///
/// `current` is the request being decided and `k_next` the post-decision set.
///  - Unique: always the empty request.
///  - All: uniform over every concrete access.
///  - Once: an empty request stays empty; otherwise uniform over the accesses
///    not in `k_next` together with the empty request (which ends the trace).
[[nodiscard]] std::vector<RequestOutcome> request_distribution(RequestBehavior b, const Request& current,
                                                               AccessSetIndex k_next, const ModelDims& dims);

struct Successor {
    State state;
    double probability = 0.0;
};

struct Edge {
    std::size_t target = 0;
    double probability = 0.0;
};

/// Realizes P as the product of the emergency, access-set and request factors.
///
/// All successor lists are generated once at construction and stored in a
/// compressed row layout keyed by (state index, action).
class TransitionModel {
public:
    TransitionModel(ModelDims dims, EmergencyMatrix emergency, RequestBehavior behavior,
                    int cap = kDefaultStateSpaceCap);

    [[nodiscard]] const StateSpace& space() const { return space_; }
    [[nodiscard]] const ModelDims& dims() const { return space_.dims(); }
    [[nodiscard]] const EmergencyMatrix& emergency() const { return emergency_; }
    [[nodiscard]] RequestBehavior behavior() const { return behavior_; }
    [[nodiscard]] std::size_t num_states() const { return space_.size(); }

    [[nodiscard]] std::span<const Edge> edges(std::size_t state, Action act) const;
    [[nodiscard]] std::vector<Successor> successors(const State& s, Action act) const;

private:
    StateSpace space_;
    EmergencyMatrix emergency_;
    RequestBehavior behavior_;
    std::vector<std::size_t> offsets_;  // (2 * num_states + 1) row starts into edges_
    std::vector<Edge> edges_;
};

struct StochasticViolation {
    std::size_t state = 0;
    Action action = Action::Deny;
    double total_mass = 0.0;
};

/// Checks every successor list sums to 1 within `tol` and every probability lies in (0, 1].
[[nodiscard]] std::vector<StochasticViolation> validate_stochastic(const TransitionModel& m,
                                                                   double tol = kStochasticTolerance);

}  // namespace acmdp
