// Acceptance suite: one PASS/FAIL line per criterion, details indented below failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "acmdp/dynamics.hpp"
#include "acmdp/lp_solver.hpp"
#include "acmdp/policy.hpp"
#include "acmdp/scenario_config.hpp"
#include "acmdp/solve.hpp"
#include "acmdp/sweep.hpp"
#include "acmdp/value_io.hpp"

using namespace acmdp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Report {
    bool ok = true;
    std::vector<std::string> notes;

    void fail(std::string msg) {
        ok = false;
        notes.push_back(std::move(msg));
    }
    void expect(bool cond, const std::string& msg) {
        if (!cond) fail(msg);
    }
    void note(std::string msg) { notes.push_back(std::move(msg)); }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Published tables list accesses in the order (alice, low), (alice, high), (bob, low), (bob, high).
const std::array<Access, 4> kColumns{Access{0, 1}, Access{0, 0}, Access{1, 1}, Access{1, 0}};
const char* kColumnNames[4] = {"(alice, low)", "(alice, high)", "(bob, low)", "(bob, high)"};

// rows: calm deny, calm allow, alert deny, alert allow
using Table = std::array<std::array<double, 4>, 4>;

Table decision_table(const Scenario& sc, const TransitionModel& m, const ValueVector& v) {
    Table t{};
    for (int e = 0; e < 2; ++e) {
        for (int c = 0; c < 4; ++c) {
            const State s{kEmergencies[static_cast<std::size_t>(e)], AccessSetIndex{}, Request{kColumns[static_cast<std::size_t>(c)]}};
            const auto i = m.space().index_of(s);
            t[static_cast<std::size_t>(2 * e)][static_cast<std::size_t>(c)] = decision_value(sc, m, v, i, Action::Deny);
            t[static_cast<std::size_t>(2 * e + 1)][static_cast<std::size_t>(c)] = decision_value(sc, m, v, i, Action::Allow);
        }
    }
    return t;
}

Table solve_table(const std::string& name, SolverKind kind = SolverKind::Lp) {
    const Scenario sc = builtin_scenario(name);
    const auto m = sc.transition_model();
    const auto res = solve(sc, m, SolveOptions{kind, std::nullopt});
    return decision_table(sc, m, res.values);
}

void compare_table(Report& r, const std::string& label, const Table& got, const Table& want, double tol) {
    const char* rows[4] = {"calm deny", "calm allow", "alert deny", "alert allow"};
    bool all = true;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) all = all && std::abs(got[i][j] - want[i][j]) <= tol;
    }
    if (all) return;
    r.fail(label + ": computed vs published (tolerance " + fmt("%g", tol) + ")");
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double d = got[i][j] - want[i][j];
            std::ostringstream line;
            line << "  " << rows[i] << " " << kColumnNames[j] << ": " << fmt("%.4f", got[i][j]) << " vs "
                 << fmt("%.2f", want[i][j]) << (std::abs(d) > tol ? "  MISMATCH" : "");
            r.note(line.str());
        }
    }
}

const Table kTable1{{{0, 0, 0, 0}, {6, 10, 4, -10}, {-20, -20, -20, -20}, {-14, 10, -16, -10}}};
const Table kUnique{{{-2, -2, -2, -2}, {4, 10, 2, -10}, {-20, -20, -20, -20}, {-14, 10, -16, -10}}};
const Table kOnce{{{2.63, 2.63, 2.63, 2.63},
                   {7.58, 14.15, 6.41, -1.59},
                   {-23.54, -23.54, -23.54, -23.54},
                   {-15.54, 14.15, -16.70, -1.59}}};
const Table kAll{{{34.80, 34.80, 34.80, 34.80},
                  {40.80, 55, 38.80, 35},
                  {4.55, 4.55, 4.55, 4.55},
                  {10.55, 55, 8.55, 35}}};

Report table1() {
    Report r;
    const auto t0 = Clock::now();
    const Table lp = solve_table("table1", SolverKind::Lp);
    const Table vi = solve_table("table1", SolverKind::Vi);
    const double elapsed = seconds_since(t0);
    compare_table(r, "lp", lp, kTable1, 1e-9);
    compare_table(r, "vi", vi, kTable1, 1e-9);
    r.expect(elapsed < 0.1, "runtime " + fmt("%.3f", elapsed) + " s exceeds 0.1 s");
    r.note("runtime " + fmt("%.4f", elapsed) + " s");
    return r;
}

Report table_block(const std::string& name, const Table& want, double tol) {
    Report r;
    compare_table(r, name, solve_table(name), want, tol);
    return r;
}

Report modified() {
    Report r;
    const Access bob_high{1, 0};
    auto at = [&](const std::string& name, Action act) {
        const Scenario sc = builtin_scenario(name);
        const auto m = sc.transition_model();
        const auto v = solve(sc, m).values;
        return decision_value(sc, m, v, m.space().index_of(State{Emergency::Calm, AccessSetIndex{}, Request{bob_high}}), act);
    };
    const double ud = at("modified_unique", Action::Deny);
    const double ua = at("modified_unique", Action::Allow);
    const double od = at("modified_once", Action::Deny);
    const double oa = at("modified_once", Action::Allow);
    r.expect(std::abs(ud + 105.26) <= 0.01, "modified_unique deny " + fmt("%.6f", ud) + " vs -105.26");
    r.expect(std::abs(ua + 10.0) <= 1e-6, "modified_unique allow " + fmt("%.9f", ua) + " vs -10");
    r.expect(std::abs(od + 32.35) <= 0.01, "modified_once deny " + fmt("%.6f", od) + " vs -32.35");
    r.expect(std::abs(oa + 1.59) <= 0.01, "modified_once allow " + fmt("%.6f", oa) + " vs -1.59");

    const Table all = solve_table("table2_all");
    const Table mod = solve_table("modified_all");
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) worst = std::max(worst, std::abs(all[i][j] - mod[i][j]));
    }
    r.expect(worst <= 1e-6, "modified_all differs from table2_all by " + fmt("%g", worst));
    return r;
}

Report crossovers() {
    Report r;
    const auto t0 = Clock::now();
    struct Case {
        const char* name;
        double lo;
        double hi;
        bool open;
    };
    const Case cases[3] = {{"table2_unique", 0.499, 0.501, false},
                           {"table2_once", 0.18, 0.20, false},
                           {"table2_all", 0.09, 0.10, true}};
    for (const auto& c : cases) {
        SweepSpec spec;
        spec.base = builtin_scenario(c.name);
        spec.start = 0.0;
        spec.stop = 1.0;
        spec.step = 0.01;
        spec.queries = {SweepQuery{Emergency::Calm, AccessSetIndex{}, Access{1, 0}}};
        const auto points = run_sweep(spec, SolveOptions{});
        r.expect(points.size() == 101, std::string(c.name) + ": grid has " + std::to_string(points.size()) + " points");
        if (std::string(c.name) == "table2_unique") {
            double worst = 0.0;
            for (const auto& pt : points) {
                worst = std::max(worst, std::abs((pt.dv[0][1] - pt.dv[0][0]) - (20.0 * pt.probability - 10.0)));
            }
            r.expect(worst <= 1e-9, "unique: allow - deny departs from 20q - 10 by " + fmt("%g", worst));
        }
        const auto cross = find_crossovers(spec, points, SolveOptions{});
        if (cross.empty() || !cross[0].root) {
            r.fail(std::string(c.name) + ": no sign change found");
            continue;
        }
        const double root = *cross[0].root;
        const bool inside = c.open ? (root > c.lo && root < c.hi) : (root >= c.lo && root <= c.hi);
        r.expect(inside, std::string(c.name) + ": root " + fmt("%.6f", root) + " outside expected range");
        r.note(std::string(c.name) + " root " + fmt("%.6f", root));
    }
    const double elapsed = seconds_since(t0);
    r.expect(elapsed < 20.0, "runtime " + fmt("%.2f", elapsed) + " s exceeds 20 s");
    r.note("runtime " + fmt("%.2f", elapsed) + " s");
    return r;
}

Report oracle_equivalence() {
    Report r;
    for (const auto& name : builtin_names()) {
        const Scenario sc = builtin_scenario(name);
        const auto m = sc.transition_model();
        const auto lp = solve(sc, m, SolveOptions{SolverKind::Lp, std::nullopt});
        const auto vi = solve(sc, m, SolveOptions{SolverKind::Vi, std::nullopt});
        r.expect(lp.ok && vi.ok, name + ": solver failure");
        const double d = sup_distance(lp.values, vi.values);
        r.expect(d <= 1e-6, name + ": |V_lp - V_vi| = " + fmt("%g", d));
        const auto plp = extract_policy(sc, m, lp.values);
        const auto pvi = extract_policy(sc, m, vi.values);
        std::size_t disagree = 0;
        for (std::size_t i = 0; i < plp.size(); ++i) {
            if (plp.gaps[i] > 1e-5 && plp.actions[i] != pvi.actions[i]) ++disagree;
        }
        r.expect(disagree == 0, name + ": " + std::to_string(disagree) + " decisive states disagree");
    }
    return r;
}

Report lp_structure() {
    Report r;
    for (const auto& name : builtin_names()) {
        const Scenario sc = builtin_scenario(name);
        const auto m = sc.transition_model();
        const auto lp = solve_bellman_lp(sc, m);
        r.expect(lp.lp.status == LpStatus::Optimal, name + ": " + std::string(to_string(lp.lp.status)));
        const auto rep = verify_solution(sc, m, lp.lp.values);
        r.expect(rep.max_violation <= 1e-9, name + ": max violation " + fmt("%g", rep.max_violation));
        r.expect(rep.all_tight(1e-7), name + ": only " + std::to_string(rep.tight_count(1e-7)) + "/" +
                                          std::to_string(m.num_states()) + " states have a tight constraint");
    }
    return r;
}

Report properties() {
    Report r;
    for (const ModelDims d : {ModelDims{2, 2}, ModelDims{3, 2}}) {
        const StateSpace space(d);
        std::vector<bool> hit(space.size(), false);
        bool ok = true;
        for (std::size_t i = 0; i < space.size(); ++i) {
            const State s = space.state_at(i);
            const auto j = space.index_of(s);
            ok = ok && j == i && !hit[j];
            hit[j] = true;
        }
        r.expect(ok, "state index is not a bijection at " + std::to_string(d.num_users) + "x" +
                         std::to_string(d.num_resources));
    }

    for (const auto b : {RequestBehavior::Unique, RequestBehavior::Once, RequestBehavior::All}) {
        const TransitionModel m(ModelDims{2, 2}, EmergencyMatrix::from_rates(0.1, 1.0), b);
        const auto bad = validate_stochastic(m);
        r.expect(bad.empty(), std::string(to_string(b)) + ": " + std::to_string(bad.size()) + " non-stochastic rows");
    }

    for (const auto& name : builtin_names()) {
        const Scenario sc = builtin_scenario(name);
        const auto m = sc.transition_model();
        const auto base = solve(sc, m).values;
        const auto base_policy = extract_policy(sc, m, base);

        for (double c : {0.5, 2.0, 10.0}) {
            Scenario scaled = sc;
            for (auto& x : scaled.rewards.access) x *= c;
            for (auto& x : scaled.rewards.resource) x *= c;
            const auto v = solve(scaled, m).values;
            const auto policy = extract_policy(scaled, m, v);
            double worst = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                worst = std::max(worst, std::abs(v[i] - c * base[i]) / std::max(1.0, std::abs(c * base[i])));
            }
            r.expect(worst <= 1e-7, name + ": scaling by " + fmt("%g", c) + " off by " + fmt("%g", worst));
            std::size_t flips = 0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (base_policy.gaps[i] > 1e-5 && policy.actions[i] != base_policy.actions[i]) ++flips;
            }
            r.expect(flips == 0, name + ": scaling by " + fmt("%g", c) + " changed " + std::to_string(flips) + " actions");
        }

        // Every immediate reward shifted by c: raise every Bellman right-hand side.
        for (double c : {-7.0, 3.0}) {
            LinearProgram lp = build_bellman_lp(sc, m);
            for (auto& row : lp.constraints) row.rhs += c;
            const auto sol = simplex_solve(lp);
            if (sol.status != LpStatus::Optimal) {
                r.fail(name + ": shifted LP " + std::string(to_string(sol.status)));
                continue;
            }
            double worst = 0.0;
            for (std::size_t i = 0; i < base.size(); ++i) {
                worst = std::max(worst, std::abs(sol.values[i] - (base[i] + c / (1.0 - sc.beta))));
            }
            r.expect(worst <= 1e-7, name + ": shift by " + fmt("%g", c) + " off by " + fmt("%g", worst));
        }
    }

    for (double beta : {0.5, 0.9}) {
        Scenario sc = builtin_scenario("modified_unique");
        sc.beta = beta;
        const auto m = sc.transition_model();
        const auto v = solve(sc, m).values;
        const double got = v[m.space().index_of(State{Emergency::Alert, AccessSetIndex{}, Request::empty()})];
        const double want = -20.0 / (1.0 - beta);
        r.expect(std::abs(got - want) <= 1e-7,
                 "geometric series at beta " + fmt("%g", beta) + ": " + fmt("%.9f", got) + " vs " + fmt("%g", want));
    }
    return r;
}

Report round_trips() {
    Report r;
    for (const auto& name : builtin_names()) {
        const Scenario sc = builtin_scenario(name);
        const std::string text = render_scenario(sc);
        Scenario back;
        try {
            back = parse_scenario(text);
        } catch (const std::exception& e) {
            r.fail(name + ": rendered scenario does not parse: " + e.what());
            continue;
        }
        r.expect(back == sc, name + ": scenario round trip changed the model");
        r.expect(render_scenario(back) == text, name + ": rendering is not stable");

        const auto m = sc.transition_model();
        const auto file = make_value_file(sc, m, solve(sc, m).values);
        std::ostringstream out;
        export_values(file, out);
        std::istringstream in(out.str());
        try {
            const auto imported = import_values(in, &sc);
            std::ostringstream again;
            export_values(imported, again);
            r.expect(again.str() == out.str(), name + ": value table changed across export/import");
            r.expect(imported.rows.size() == m.num_states(), name + ": row count changed");
        } catch (const std::exception& e) {
            r.fail(name + ": value table import failed: " + e.what());
        }
    }
    return r;
}

}  // namespace

int main() {
    struct Criterion {
        const char* title;
        std::function<Report()> run;
    };
    const std::vector<Criterion> criteria{
        {"table1 exact reproduction, both solvers", table1},
        {"table2 unique block within 0.005", [] { return table_block("table2_unique", kUnique, 0.005); }},
        {"table2 all block within 0.005", [] { return table_block("table2_all", kAll, 0.005); }},
        {"table2 once block within 0.01",
         [] {
             auto r = table_block("table2_once", kOnce, 0.01);
             r.note("once rule: next request uniform over ungranted accesses and eps; eps stays eps");
             return r;
         }},
        {"eps_accrues reward variant", modified},
        {"crossover probabilities for (bob, high)", crossovers},
        {"LP and value iteration agree", oracle_equivalence},
        {"LP optimality structure", lp_structure},
        {"property suite", properties},
        {"scenario and value table round trips", round_trips},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Report r;
        try {
            r = criteria[i].run();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s %2zu %s\n", r.ok ? "PASS" : "FAIL", i + 1, criteria[i].title);
        for (const auto& n : r.notes) std::printf("       %s\n", n.c_str());
        if (!r.ok) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
