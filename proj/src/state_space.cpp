#include "acmdp/state_space.hpp"

#include <string>

namespace acmdp {

void validate_dims(const ModelDims& dims, int cap) {
    if (dims.num_users < 1 || dims.num_resources < 1) {
        throw std::invalid_argument("model needs at least one user and one resource");
    }
    if (cap < 1 || cap > 30) {
        throw std::invalid_argument("state space cap must lie in [1, 30]");
    }
    // Guard the multiplication itself before comparing against the cap.
    if (dims.num_users > cap || dims.num_resources > cap || dims.num_accesses() > cap) {
        throw CapacityError("model has " + std::to_string(dims.num_users) + " users x " +
                            std::to_string(dims.num_resources) + " resources; at most " +
                            std::to_string(cap) + " accesses are supported");
    }
}

std::string_view to_string(Emergency e) { return e == Emergency::Calm ? "calm" : "alert"; }

std::string_view to_string(Action a) { return a == Action::Deny ? "deny" : "allow"; }

std::optional<Emergency> parse_emergency(std::string_view token) {
    if (token == "calm") return Emergency::Calm;
    if (token == "alert") return Emergency::Alert;
    return std::nullopt;
}

std::optional<Action> parse_action(std::string_view token) {
    if (token == "deny") return Action::Deny;
    if (token == "allow") return Action::Allow;
    return std::nullopt;
}

bool is_valid(const Access& a, const ModelDims& dims) {
    return a.user >= 0 && a.user < dims.num_users && a.resource >= 0 && a.resource < dims.num_resources;
}

bool is_valid(const State& s, const ModelDims& dims) {
    if (s.emergency != Emergency::Calm && s.emergency != Emergency::Alert) return false;
    if (s.granted.bits >= dims.num_sets()) return false;
    return s.request.is_empty() || is_valid(s.request.access(), dims);
}

StateSpace::StateSpace(ModelDims dims, int cap) : dims_(dims) {
    validate_dims(dims_, cap);
    size_ = 2 * static_cast<std::size_t>(dims_.num_sets()) * request_slots();
}

std::size_t StateSpace::index_of(const State& s) const {
    if (!is_valid(s, dims_)) {
        throw std::out_of_range("state is not a member of this state space");
    }
    const std::size_t slot = s.request.is_empty()
                                 ? request_slots() - 1
                                 : static_cast<std::size_t>(access_bit_index(s.request.access(), dims_));
    return (to_index(s.emergency) * dims_.num_sets() + s.granted.bits) * request_slots() + slot;
}

State StateSpace::state_at(std::size_t index) const {
    if (index >= size_) {
        throw std::out_of_range("state index " + std::to_string(index) + " out of range");
    }
    const std::size_t slot = index % request_slots();
    const std::size_t block = index / request_slots();
    State s;
    s.emergency = block >= dims_.num_sets() ? Emergency::Alert : Emergency::Calm;
    s.granted = AccessSetIndex{static_cast<std::uint32_t>(block % dims_.num_sets())};
    if (slot + 1 < request_slots()) {
        s.request = Request{access_from_bit(static_cast<int>(slot), dims_)};
    }
    return s;
}

std::vector<State> StateSpace::states() const {
    std::vector<State> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back(state_at(i));
    return out;
}

}  // namespace acmdp
