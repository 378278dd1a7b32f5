#include <doctest.h>

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "acmdp/simplex.hpp"

using namespace acmdp;

namespace {

LinearProgram make_lp(std::size_t n, std::vector<double> objective) {
    LinearProgram lp;
    lp.num_variables = n;
    lp.objective = std::move(objective);
    return lp;
}

void add(LinearProgram& lp, std::vector<double> coeffs, Relation rel, double rhs) {
    lp.add_constraint(rel, rhs).coefficients = std::move(coeffs);
}

// Solves the square system A x = b by Gaussian elimination with partial pivoting.
std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (std::abs(a[piv][c]) < 1e-9) return std::nullopt;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// Minimum over all feasible vertices; nullopt when no vertex is feasible.
// Only valid for bounded feasible regions.
std::optional<double> brute_force_min(const LinearProgram& lp) {
    const std::size_t n = lp.num_variables;
    const std::size_t m = lp.constraints.size();
    std::optional<double> best;
    std::vector<std::size_t> pick(n);
    // Enumerate n-subsets of the constraints.
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
    do {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (std::size_t i = 0; i < m; ++i) {
            if (!mask[i]) continue;
            a.push_back(lp.constraints[i].coefficients);
            b.push_back(lp.constraints[i].rhs);
        }
        const auto x = solve_square(a, b);
        if (x && max_violation(lp, *x) < 1e-7) {
            double obj = 0.0;
            for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * (*x)[j];
            if (!best || obj < *best) best = obj;
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return best;
}

double objective_at(const LinearProgram& lp, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t j = 0; j < lp.num_variables; ++j) s += lp.objective[j] * x[j];
    return s;
}

}  // namespace

TEST_CASE("single variable bounded below") {
    auto lp = make_lp(1, {1.0});
    add(lp, {1.0}, Relation::GreaterEqual, 3.0);
    const auto sol = simplex_solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.values[0] == doctest::Approx(3.0));
    CHECK(sol.objective == doctest::Approx(3.0));
}

TEST_CASE("negative optimum for a free variable") {
    auto lp = make_lp(1, {1.0});
    add(lp, {1.0}, Relation::GreaterEqual, -4.5);
    const auto sol = simplex_solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.values[0] == doctest::Approx(-4.5));
}

TEST_CASE("two variables with mixed signs") {
    // min x + y  s.t. x >= 2, y >= -2, x + y >= -1
    auto lp = make_lp(2, {1.0, 1.0});
    add(lp, {1.0, 0.0}, Relation::GreaterEqual, 2.0);
    add(lp, {0.0, 1.0}, Relation::GreaterEqual, -2.0);
    add(lp, {1.0, 1.0}, Relation::GreaterEqual, -1.0);
    const auto sol = simplex_solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.values[0] == doctest::Approx(2.0));
    CHECK(sol.values[1] == doctest::Approx(-2.0));
    CHECK(sol.objective == doctest::Approx(0.0));
    CHECK(max_violation(lp, sol.values) <= 1e-9);
}

TEST_CASE("equality and less-equal rows") {
    // min -x - 2y  s.t. x + y = 4, y <= 3, x >= 0
    auto lp = make_lp(2, {-1.0, -2.0});
    add(lp, {1.0, 1.0}, Relation::Equal, 4.0);
    add(lp, {0.0, 1.0}, Relation::LessEqual, 3.0);
    add(lp, {1.0, 0.0}, Relation::GreaterEqual, 0.0);
    const auto sol = simplex_solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.values[0] == doctest::Approx(1.0));
    CHECK(sol.values[1] == doctest::Approx(3.0));
    CHECK(sol.objective == doctest::Approx(-7.0));
}

TEST_CASE("infeasible") {
    auto lp = make_lp(1, {1.0});
    add(lp, {1.0}, Relation::GreaterEqual, 2.0);
    add(lp, {1.0}, Relation::LessEqual, 1.0);
    CHECK(simplex_solve(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded") {
    auto lp = make_lp(2, {1.0, 0.0});
    add(lp, {0.0, 1.0}, Relation::GreaterEqual, 1.0);
    CHECK(simplex_solve(lp).status == LpStatus::Unbounded);
}

TEST_CASE("no constraints and zero objective") {
    auto lp = make_lp(3, {0.0, 0.0, 0.0});
    const auto sol = simplex_solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.values.size() == 3);
    CHECK(sol.objective == 0.0);
}

TEST_CASE("iteration limit is reported") {
    auto lp = make_lp(2, {1.0, 1.0});
    add(lp, {1.0, 0.0}, Relation::GreaterEqual, 2.0);
    add(lp, {0.0, 1.0}, Relation::GreaterEqual, 3.0);
    SimplexOptions opts;
    opts.max_iterations = 1;
    CHECK(simplex_solve(lp, opts).status == LpStatus::IterationLimit);
}

TEST_CASE("degenerate vertex does not cycle") {
    // Several constraints through the origin.
    auto lp = make_lp(2, {1.0, 1.0});
    add(lp, {1.0, 0.0}, Relation::GreaterEqual, 0.0);
    add(lp, {0.0, 1.0}, Relation::GreaterEqual, 0.0);
    add(lp, {1.0, 1.0}, Relation::GreaterEqual, 0.0);
    add(lp, {2.0, 1.0}, Relation::GreaterEqual, 0.0);
    add(lp, {1.0, 2.0}, Relation::GreaterEqual, 0.0);
    for (PivotRule rule : {PivotRule::Bland, PivotRule::Dantzig}) {
        SimplexOptions opts;
        opts.rule = rule;
        const auto sol = simplex_solve(lp, opts);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(0.0));
    }
}

TEST_CASE("malformed programs are rejected") {
    auto lp = make_lp(2, {1.0});
    CHECK_THROWS_AS(validate_lp(lp), std::invalid_argument);
    lp.objective = {1.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(validate_lp(lp), std::invalid_argument);
}

TEST_CASE("dump format") {
    auto lp = make_lp(2, {1.0, 1.0});
    add(lp, {1.0, -0.5}, Relation::GreaterEqual, 2.0);
    std::ostringstream out;
    dump_lp(lp, out);
    const std::string s = out.str();
    CHECK(s.find(">=") != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') == 2);
}

TEST_CASE("random bounded programs agree with vertex enumeration") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> nvars(1, 3);
    std::uniform_int_distribution<int> extra(0, 4);
    std::uniform_int_distribution<int> rel(0, 2);
    int optimal = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(nvars(rng));
        LinearProgram lp;
        lp.num_variables = n;
        for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(coef(rng));
        // Box keeps the region bounded.
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> e(n, 0.0);
            e[j] = 1.0;
            add(lp, e, Relation::LessEqual, 10.0);
            add(lp, e, Relation::GreaterEqual, -10.0);
        }
        const int k = extra(rng);
        for (int c = 0; c < k; ++c) {
            std::vector<double> a(n);
            for (auto& v : a) v = coef(rng);
            const int r = rel(rng);
            const Relation relation = r == 0 ? Relation::GreaterEqual : r == 1 ? Relation::LessEqual : Relation::Equal;
            add(lp, a, relation, coef(rng));
        }
        const auto expected = brute_force_min(lp);
        for (PivotRule rule : {PivotRule::Bland, PivotRule::Dantzig}) {
            SimplexOptions opts;
            opts.rule = rule;
            const auto sol = simplex_solve(lp, opts);
            if (!expected) {
                CHECK(sol.status == LpStatus::Infeasible);
                continue;
            }
            REQUIRE(sol.status == LpStatus::Optimal);
            CHECK(sol.objective == doctest::Approx(*expected).epsilon(1e-9).scale(1.0));
            CHECK(objective_at(lp, sol.values) == doctest::Approx(*expected).epsilon(1e-9).scale(1.0));
            CHECK(max_violation(lp, sol.values) <= 1e-7);
        }
        (expected ? optimal : infeasible)++;
    }
    CHECK(optimal > 100);
    CHECK(infeasible > 0);
}
