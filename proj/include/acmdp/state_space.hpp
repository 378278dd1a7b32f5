#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace acmdp {

/// Largest supported number of accesses (NU * NR); the powerset has 2^cap members.
inline constexpr int kDefaultStateSpaceCap = 12;

class CapacityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ModelDims {
    int num_users = 0;
    int num_resources = 0;

    [[nodiscard]] constexpr int num_accesses() const { return num_users * num_resources; }
    [[nodiscard]] constexpr std::uint32_t num_sets() const { return std::uint32_t{1} << num_accesses(); }

    friend constexpr bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Throws std::invalid_argument for non-positive dimensions and CapacityError
/// when NU * NR exceeds `cap`.
void validate_dims(const ModelDims& dims, int cap = kDefaultStateSpaceCap);

struct Access {
    int user = 0;
    int resource = 0;

    friend constexpr auto operator<=>(const Access&, const Access&) = default;
};

/// The request under control: either a concrete access or the empty (eps) request.
class Request {
public:
    constexpr Request() = default;
    constexpr explicit Request(Access a) : access_(a) {}

    static constexpr Request empty() { return Request{}; }

    [[nodiscard]] constexpr bool is_empty() const { return !access_.has_value(); }
    [[nodiscard]] constexpr const Access& access() const { return *access_; }

    friend constexpr bool operator==(const Request&, const Request&) = default;

private:
    std::optional<Access> access_;
};

/// Index into the powerset of accesses: bit i set iff the access with bit index i is granted.
struct AccessSetIndex {
    std::uint32_t bits = 0;

    friend constexpr auto operator<=>(const AccessSetIndex&, const AccessSetIndex&) = default;
};

enum class Emergency : std::uint8_t { Calm = 0, Alert = 1 };

/// Deny sorts before Allow; ties in decision values resolve to the smaller action.
enum class Action : std::uint8_t { Deny = 0, Allow = 1 };

inline constexpr std::array<Emergency, 2> kEmergencies{Emergency::Calm, Emergency::Alert};
inline constexpr std::array<Action, 2> kActions{Action::Deny, Action::Allow};

constexpr std::size_t to_index(Emergency e) { return static_cast<std::size_t>(e); }
constexpr std::size_t to_index(Action a) { return static_cast<std::size_t>(a); }

std::string_view to_string(Emergency e);
std::string_view to_string(Action a);
std::optional<Emergency> parse_emergency(std::string_view token);
std::optional<Action> parse_action(std::string_view token);

struct State {
    Emergency emergency = Emergency::Calm;
    AccessSetIndex granted;
    Request request;

    friend constexpr bool operator==(const State&, const State&) = default;
};

[[nodiscard]] bool is_valid(const Access& a, const ModelDims& dims);
[[nodiscard]] bool is_valid(const State& s, const ModelDims& dims);

/// Exponent of the access in the powerset encoding: u * NR + r.
[[nodiscard]] constexpr int access_bit_index(const Access& a, const ModelDims& dims) {
    return a.user * dims.num_resources + a.resource;
}

[[nodiscard]] constexpr Access access_from_bit(int bit, const ModelDims& dims) {
    return Access{bit / dims.num_resources, bit % dims.num_resources};
}

[[nodiscard]] constexpr bool set_contains(AccessSetIndex k, const Access& a, const ModelDims& dims) {
    return ((k.bits >> access_bit_index(a, dims)) & 1U) == 1U;
}

[[nodiscard]] constexpr AccessSetIndex set_insert(AccessSetIndex k, const Access& a, const ModelDims& dims) {
    return AccessSetIndex{k.bits | (std::uint32_t{1} << access_bit_index(a, dims))};
}

/// Enumerates Σ = EMERGENCY × powerset(ACCESS) × FACCESS.
///
/// Ordering is emergency-major, then set index, then request by access bit
/// index with the empty request last. Indices are computed arithmetically, so
/// the space is never materialized unless `states()` is called.
class StateSpace {
public:
    explicit StateSpace(ModelDims dims, int cap = kDefaultStateSpaceCap);

    [[nodiscard]] const ModelDims& dims() const { return dims_; }
    [[nodiscard]] std::size_t size() const { return size_; }

    /// Number of request slots per (emergency, set) block: NU * NR + 1.
    [[nodiscard]] std::size_t request_slots() const { return static_cast<std::size_t>(dims_.num_accesses()) + 1; }

    [[nodiscard]] std::size_t index_of(const State& s) const;
    [[nodiscard]] State state_at(std::size_t index) const;

    [[nodiscard]] std::vector<State> states() const;

private:
    ModelDims dims_;
    std::size_t size_ = 0;
};

}  // namespace acmdp
