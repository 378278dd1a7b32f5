#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acmdp/rewards.hpp"
#include "acmdp/solve.hpp"

namespace acmdp {

/// A decision query: the request `access` arriving in (emergency, granted).
struct SweepQuery {
    Emergency emergency = Emergency::Calm;
    AccessSetIndex granted;
    Access access;
};

/// Grid over the calm -> alert probability; the alert row stays absorbing.
struct SweepSpec {
    Scenario base;
    double start = 0.0;
    double stop = 1.0;
    double step = 0.01;
    std::vector<SweepQuery> queries;
};

/// Throws std::invalid_argument unless 0 <= start <= stop <= 1 and step > 0.
void validate_sweep(const SweepSpec& spec);

/// Calm, empty granted set, one query per access in declaration order.
[[nodiscard]] std::vector<SweepQuery> default_queries(const Scenario& sc);

[[nodiscard]] std::vector<double> sweep_grid(const SweepSpec& spec);

/// `base` with calm -> alert set to `probability` and alert -> alert = 1.
[[nodiscard]] Scenario with_emergency_probability(const Scenario& base, double probability);

struct SweepPoint {
    double probability = 0.0;
    std::vector<std::array<double, 2>> dv;  // per query, [deny, allow]
};

[[nodiscard]] SweepPoint evaluate_point(const SweepSpec& spec, double probability, const SolveOptions& options);

/// One solve per grid point; points may be solved on `threads` workers but
/// are returned in grid order.
[[nodiscard]] std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const SolveOptions& options,
                                                unsigned threads = 1);

struct CrossoverResult {
    SweepQuery query;
    std::optional<double> root;
    double lo = 0.0;  // bracketing interval of the final bisection step
    double hi = 0.0;
    double width = 0.0;
};

/// Bisection on a bracket [lo, hi] where f(lo) and f(hi) differ in sign (or
/// one is zero). Stops once the bracket is narrower than `width`.
template <typename F>
std::pair<double, double> bisect(F&& f, double lo, double hi, double width) {
    double flo = f(lo);
    if (flo == 0.0) return {lo, lo};
    if (f(hi) == 0.0) return {hi, hi};
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return {mid, mid};
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

/// For each query, finds the first grid interval where DV(allow) - DV(deny)
/// changes sign and refines it by bisection to `width`.
[[nodiscard]] std::vector<CrossoverResult> find_crossovers(const SweepSpec& spec, const std::vector<SweepPoint>& points,
                                                           const SolveOptions& options, double width = 1e-4);

/// `dv_<user>_<resource>_<action>` for each query, with a status prefix for non-calm or non-empty queries.
[[nodiscard]] std::vector<std::string> sweep_columns(const SweepSpec& spec);

void write_sweep_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points, std::ostream& out);

}  // namespace acmdp
