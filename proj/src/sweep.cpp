#include "acmdp/sweep.hpp"

#include <atomic>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "acmdp/policy.hpp"
#include "acmdp/value_io.hpp"

namespace acmdp {

namespace {

// Differences this small are treated as an exact crossing at the grid point.
constexpr double kZeroDifference = 1e-12;

double difference(const std::array<double, 2>& dv) { return dv[to_index(Action::Allow)] - dv[to_index(Action::Deny)]; }

}  // namespace

void validate_sweep(const SweepSpec& spec) {
    if (!(spec.start >= 0.0 && spec.start <= spec.stop && spec.stop <= 1.0)) {
        throw std::invalid_argument("sweep grid must satisfy 0 <= start <= stop <= 1");
    }
    if (!(spec.step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    validate_scenario(spec.base);
    for (const auto& q : spec.queries) {
        if (!is_valid(State{q.emergency, q.granted, Request{q.access}}, spec.base.dims)) {
            throw std::invalid_argument("sweep query names an invalid state");
        }
    }
}

std::vector<SweepQuery> default_queries(const Scenario& sc) {
    std::vector<SweepQuery> out;
    for (int u = 0; u < sc.dims.num_users; ++u) {
        for (int r = 0; r < sc.dims.num_resources; ++r) out.push_back({Emergency::Calm, AccessSetIndex{}, Access{u, r}});
    }
    return out;
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    // Index-based so the grid does not accumulate rounding drift.
    const auto count = static_cast<std::size_t>(std::floor((spec.stop - spec.start) / spec.step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) grid.push_back(std::min(spec.stop, spec.start + static_cast<double>(i) * spec.step));
    return grid;
}

Scenario with_emergency_probability(const Scenario& base, double probability) {
    Scenario sc = base;
    sc.emergency = EmergencyMatrix::from_rates(probability, 1.0);
    return sc;
}

SweepPoint evaluate_point(const SweepSpec& spec, double probability, const SolveOptions& options) {
    const Scenario sc = with_emergency_probability(spec.base, probability);
    const TransitionModel m = sc.transition_model();
    const SolveResult solved = solve(sc, m, options);
    if (!solved.ok) {
        throw std::runtime_error("solve failed at probability " + format_real(probability) + ": " + solved.status);
    }
    SweepPoint point;
    point.probability = probability;
    for (const auto& q : spec.queries) {
        const std::size_t i = m.space().index_of(State{q.emergency, q.granted, Request{q.access}});
        point.dv.push_back({decision_value(sc, m, solved.values, i, Action::Deny),
                            decision_value(sc, m, solved.values, i, Action::Allow)});
    }
    return point;
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const SolveOptions& options, unsigned threads) {
    validate_sweep(spec);
    const auto grid = sweep_grid(spec);
    std::vector<SweepPoint> points(grid.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size() && !failed; i = next++) {
            try {
                points[i] = evaluate_point(spec, grid[i], options);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return points;
}

std::vector<CrossoverResult> find_crossovers(const SweepSpec& spec, const std::vector<SweepPoint>& points,
                                             const SolveOptions& options, double width) {
    std::vector<CrossoverResult> out;
    for (std::size_t qi = 0; qi < spec.queries.size(); ++qi) {
        CrossoverResult res;
        res.query = spec.queries[qi];
        for (std::size_t i = 0; i < points.size() && !res.root; ++i) {
            const double d0 = difference(points[i].dv[qi]);
            if (std::abs(d0) <= kZeroDifference) {
                res.root = res.lo = res.hi = points[i].probability;
                break;
            }
            if (i + 1 == points.size()) break;
            const double d1 = difference(points[i + 1].dv[qi]);
            if (std::abs(d1) <= kZeroDifference || std::signbit(d0) == std::signbit(d1)) continue;

            SweepSpec single = spec;
            single.queries = {spec.queries[qi]};
            auto f = [&](double p) {
                const double d = difference(evaluate_point(single, p, options).dv[0]);
                return std::abs(d) <= kZeroDifference ? 0.0 : d;
            };
            const auto [lo, hi] = bisect(f, points[i].probability, points[i + 1].probability, width);
            res.lo = lo;
            res.hi = hi;
            res.root = 0.5 * (lo + hi);
        }
        res.width = res.hi - res.lo;
        out.push_back(res);
    }
    return out;
}

std::vector<std::string> sweep_columns(const SweepSpec& spec) {
    std::vector<std::string> cols;
    for (const auto& q : spec.queries) {
        std::string prefix = "dv_";
        if (q.emergency != Emergency::Calm || q.granted.bits != 0) {
            prefix += std::string(to_string(q.emergency)) + "_" + std::to_string(q.granted.bits) + "_";
        }
        prefix += spec.base.user_names[static_cast<std::size_t>(q.access.user)] + "_" +
                  spec.base.resource_names[static_cast<std::size_t>(q.access.resource)] + "_";
        for (Action act : kActions) cols.push_back(prefix + std::string(to_string(act)));
    }
    return cols;
}

void write_sweep_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points, std::ostream& out) {
    out << "probability";
    for (const auto& c : sweep_columns(spec)) out << ',' << c;
    out << '\n';
    for (const auto& p : points) {
        out << format_real(p.probability);
        for (const auto& dv : p.dv) {
            for (Action act : kActions) out << ',' << format_real(dv[to_index(act)]);
        }
        out << '\n';
    }
}

}  // namespace acmdp
