#include "acmdp/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "acmdp/lp_solver.hpp"
#include "acmdp/policy.hpp"
#include "acmdp/scenario_config.hpp"
#include "acmdp/solve.hpp"
#include "acmdp/sweep.hpp"
#include "acmdp/value_io.hpp"
#include "acmdp/vi_oracle.hpp"

namespace acmdp {

namespace {

constexpr double kTightTolerance = 1e-7;
constexpr double kOracleTolerance = 1e-6;
constexpr double kPolicyGapFloor = 1e-5;

struct CommonOptions {
    std::string scenario_path;
    std::string builtin;
    std::string solver = "lp";
    std::string out_path;
    double tol = 0.0;  // 0 keeps solver defaults
};

void add_scenario_options(CLI::App* cmd, CommonOptions& o) {
    auto* path = cmd->add_option("--scenario", o.scenario_path, "Scenario file");
    auto* builtin = cmd->add_option("--builtin", o.builtin, "Built-in scenario name")
                        ->check(CLI::IsMember(builtin_names()));
    path->excludes(builtin);
    builtin->excludes(path);
}

void add_solver_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--solver", o.solver, "Solver (lp or vi)")->check(CLI::IsMember({"lp", "vi"}));
    cmd->add_option("--tol", o.tol, "Solver tolerance")->check(CLI::PositiveNumber);
}

struct Loaded {
    Scenario scenario;
    std::string name;
};

Loaded load(const CommonOptions& o) {
    if (!o.builtin.empty()) return {builtin_scenario(o.builtin), "builtin:" + o.builtin};
    if (o.scenario_path.empty()) throw std::invalid_argument("one of --scenario or --builtin is required");
    return {load_scenario_file(o.scenario_path), o.scenario_path};
}

SolveOptions solve_options(const CommonOptions& o) {
    SolveOptions s;
    s.solver = *parse_solver(o.solver);
    if (o.tol > 0.0) s.tolerance = o.tol;
    return s;
}

SolveResult solve_or_throw(const Scenario& sc, const TransitionModel& m, const SolveOptions& options) {
    SolveResult r = solve(sc, m, options);
    if (!r.ok) throw std::runtime_error(std::string(to_string(options.solver)) + " solver failed: " + r.status);
    return r;
}

std::string fixed2(double v) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", v);
    std::string s = buf.data();
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string access_label(const Scenario& sc, const Access& a) {
    return sc.user_names[static_cast<std::size_t>(a.user)] + ", " + sc.resource_names[static_cast<std::size_t>(a.resource)];
}

int cmd_solve(const CommonOptions& o, std::ostream& out) {
    const auto [sc, name] = load(o);
    const TransitionModel m = sc.transition_model();
    const auto start = std::chrono::steady_clock::now();
    const SolveResult r = solve_or_throw(sc, m, solve_options(o));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto report = verify_solution(sc, m, r.values);

    out << "scenario: " << name << '\n'
        << "states: " << m.num_states() << '\n'
        << "solver: " << to_string(r.solver) << '\n'
        << "status: " << r.status << '\n'
        << (r.solver == SolverKind::Lp ? "pivots: " : "iterations: ") << r.iterations << '\n'
        << "max residual: " << format_real(report.max_violation) << '\n'
        << "seconds: " << format_real(seconds) << '\n';
    if (!o.out_path.empty()) {
        save_value_file(make_value_file(sc, m, r.values), o.out_path);
        out << "wrote " << o.out_path << '\n';
    }
    return 0;
}

int cmd_decisions(const CommonOptions& o, std::ostream& out) {
    const auto [sc, name] = load(o);
    const TransitionModel m = sc.transition_model();
    const SolveResult r = solve_or_throw(sc, m, solve_options(o));
    const auto dv = decision_values(sc, m, r.values);

    std::vector<Access> columns;
    for (int u = 0; u < sc.dims.num_users; ++u) {
        for (int res = 0; res < sc.dims.num_resources; ++res) columns.push_back(Access{u, res});
    }
    std::vector<std::string> headers;
    std::size_t width = 8;
    for (const auto& a : columns) {
        headers.push_back("(" + access_label(sc, a) + ")");
        width = std::max(width, headers.back().size());
    }

    out << "Decision values for " << name << " (beta = " << format_decimal(sc.beta)
        << ", emergency probability = " << format_decimal(sc.emergency(Emergency::Calm, Emergency::Alert))
        << ", behavior = " << to_string(sc.behavior) << ", reward_variant = " << to_string(sc.variant) << ")\n";
    out << std::left << std::setw(8) << "Status" << std::setw(10) << "Decision";
    for (const auto& h : headers) out << "  " << std::right << std::setw(static_cast<int>(width)) << h;
    out << '\n';
    for (Emergency e : kEmergencies) {
        for (Action act : kActions) {
            const std::string status = act == Action::Deny ? (e == Emergency::Calm ? "Calm" : "Alert") : "";
            out << std::left << std::setw(8) << status << std::setw(10) << to_string(act);
            for (const auto& a : columns) {
                const std::size_t i = m.space().index_of(State{e, AccessSetIndex{}, Request{a}});
                out << "  " << std::right << std::setw(static_cast<int>(width)) << fixed2(dv.at(i, act));
            }
            out << '\n';
        }
    }

    if (!o.out_path.empty()) {
        std::ofstream csv(o.out_path);
        if (!csv) throw std::runtime_error("cannot write " + o.out_path);
        csv << "status,user,resource,dv_deny,dv_allow,chosen,gap\n";
        for (Emergency e : kEmergencies) {
            for (const auto& a : columns) {
                const std::size_t i = m.space().index_of(State{e, AccessSetIndex{}, Request{a}});
                const double deny = dv.at(i, Action::Deny);
                const double allow = dv.at(i, Action::Allow);
                csv << to_string(e) << ',' << sc.user_names[static_cast<std::size_t>(a.user)] << ','
                    << sc.resource_names[static_cast<std::size_t>(a.resource)] << ',' << format_real(deny) << ','
                    << format_real(allow) << ',' << to_string(choose_action(deny, allow)) << ','
                    << format_real(std::abs(allow - deny)) << '\n';
            }
        }
        out << "wrote " << o.out_path << '\n';
    }
    return 0;
}

struct SweepOptions {
    double start = 0.0;
    double stop = 1.0;
    double step = 0.01;
    double width = 1e-4;
    unsigned threads = 0;
};

int cmd_sweep(const CommonOptions& o, const SweepOptions& so, std::ostream& out) {
    const auto [sc, name] = load(o);
    SweepSpec spec;
    spec.base = sc;
    spec.start = so.start;
    spec.stop = so.stop;
    spec.step = so.step;
    spec.queries = default_queries(sc);
    const unsigned threads = so.threads ? so.threads : std::max(1U, std::thread::hardware_concurrency());
    const SolveOptions options = solve_options(o);

    const auto points = run_sweep(spec, options, threads);
    const auto crossovers = find_crossovers(spec, points, options, so.width);

    if (!o.out_path.empty()) {
        std::ofstream csv(o.out_path);
        if (!csv) throw std::runtime_error("cannot write " + o.out_path);
        write_sweep_csv(spec, points, csv);
        out << "wrote " << o.out_path << " (" << points.size() << " points)\n";
    } else {
        write_sweep_csv(spec, points, out);
    }
    for (const auto& c : crossovers) {
        out << "crossover (" << access_label(sc, c.query.access) << ") " << to_string(c.query.emergency) << ": ";
        if (c.root) {
            out << std::fixed << std::setprecision(6) << *c.root << " in [" << c.lo << ", " << c.hi << "]"
                << std::defaultfloat << '\n';
        } else {
            out << "none\n";
        }
    }
    return 0;
}

struct EvalOptions {
    std::string values_path;
    std::string status = "calm";
    std::string granted = "none";
    std::string request;
};

AccessSetIndex parse_granted(const ValueFile& file, const std::string& spec) {
    if (spec.empty() || spec == "none") return AccessSetIndex{};
    if (std::all_of(spec.begin(), spec.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        const unsigned long k = std::stoul(spec);
        if (k >= file.dims.num_sets()) throw std::invalid_argument("granted set index " + spec + " out of range");
        return AccessSetIndex{static_cast<std::uint32_t>(k)};
    }
    AccessSetIndex k;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("granted access '" + item + "' is not user:resource");
        const auto u = file.user_index(item.substr(0, colon));
        const auto r = file.resource_index(item.substr(colon + 1));
        if (!u || !r) throw std::invalid_argument("unknown label in granted access '" + item + "'");
        k = set_insert(k, Access{*u, *r}, file.dims);
    }
    return k;
}

Request parse_request(const ValueFile& file, const std::string& spec) {
    if (spec == "eps") return Request::empty();
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("request '" + spec + "' is not user:resource or eps");
    const auto u = file.user_index(spec.substr(0, colon));
    const auto r = file.resource_index(spec.substr(colon + 1));
    if (!u) throw std::invalid_argument("unknown user '" + spec.substr(0, colon) + "'");
    if (!r) throw std::invalid_argument("unknown resource '" + spec.substr(colon + 1) + "'");
    return Request{Access{*u, *r}};
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
    const ValueFile file = load_value_file(o.values_path);
    const auto status = parse_emergency(o.status);
    if (!status) throw std::invalid_argument("unknown status '" + o.status + "'");
    const State s{*status, parse_granted(file, o.granted), parse_request(file, o.request)};
    const ValueRow& row = file.row(s);
    out << "decision: " << to_string(row.chosen) << '\n'
        << "dv_deny: " << format_real(row.dv_deny) << '\n'
        << "dv_allow: " << format_real(row.dv_allow) << '\n'
        << "gap: " << format_real(row.gap()) << '\n';
    return row.chosen == Action::Allow ? 0 : 1;
}

int cmd_selfcheck(const CommonOptions& o, std::ostream& out, std::ostream& err) {
    Loaded loaded;
    try {
        loaded = load(o);
    } catch (const ScenarioError& e) {
        const bool stochastic = std::any_of(e.diagnostics().begin(), e.diagnostics().end(), [](const Diagnostic& d) {
            return d.kind == DiagnosticKind::Stochastic;
        });
        out << "FAIL " << (stochastic ? "stochasticity" : "scenario") << '\n';
        err << e.what() << '\n';
        return 1;
    }
    const auto checks = run_selfcheck(loaded.scenario, o.tol > 0.0 ? o.tol : 1e-9);
    out << "selfcheck " << loaded.name << '\n';
    for (const auto& c : checks) out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    const bool ok = !checks.empty() && checks.back().passed;
    if (!ok) err << "selfcheck failed: " << checks.back().name << '\n';
    return ok ? 0 : 1;
}

}  // namespace

std::vector<CheckOutcome> run_selfcheck(const Scenario& sc, double tolerance) {
    std::vector<CheckOutcome> checks;
    auto record = [&](std::string name, bool passed, std::string detail) {
        checks.push_back({std::move(name), passed, std::move(detail)});
        return passed;
    };

    const auto problems = scenario_violations(sc);
    if (!record("scenario", problems.empty(), problems.empty() ? "invariants hold" : problems.front())) return checks;

    const TransitionModel m = sc.transition_model();
    const auto violations = validate_stochastic(m);
    if (!record("stochasticity", violations.empty(),
                violations.empty() ? std::to_string(2 * m.num_states()) + " successor lists sum to 1"
                                   : std::to_string(violations.size()) + " state/action pairs do not sum to 1")) {
        return checks;
    }

    const SolveResult lp = solve(sc, m, SolveOptions{SolverKind::Lp, tolerance});
    if (!record("lp-solve", lp.ok, lp.status + " after " + std::to_string(lp.iterations) + " pivots")) return checks;

    const auto report = verify_solution(sc, m, lp.values, tolerance);
    const bool structure = report.max_violation <= tolerance && report.all_tight(kTightTolerance);
    if (!record("lp-verify", structure,
                "max violation " + format_real(report.max_violation) + ", tight states " +
                    std::to_string(report.tight_count(kTightTolerance)) + "/" + std::to_string(m.num_states()))) {
        return checks;
    }

    const SolveResult vi = solve(sc, m, SolveOptions{SolverKind::Vi, std::nullopt});
    if (!record("vi-solve", vi.ok, vi.status + " after " + std::to_string(vi.iterations) + " iterations")) return checks;

    const double distance = sup_distance(lp.values, vi.values);
    if (!record("lp-vs-vi", distance <= kOracleTolerance, "sup-norm " + format_real(distance))) return checks;

    const auto lp_policy = extract_policy(sc, m, lp.values);
    const auto vi_policy = extract_policy(sc, m, vi.values);
    std::size_t compared = 0;
    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < m.num_states(); ++i) {
        if (lp_policy.gaps[i] <= kPolicyGapFloor || vi_policy.gaps[i] <= kPolicyGapFloor) continue;
        ++compared;
        if (lp_policy.actions[i] != vi_policy.actions[i]) ++disagreements;
    }
    record("policy-agreement", disagreements == 0,
           std::to_string(compared - disagreements) + "/" + std::to_string(compared) + " decisive states agree");
    return checks;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Access control MDP solver"};
    app.name("acmdp");
    app.require_subcommand(1);

    CommonOptions common;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a scenario and write its value table");
    add_scenario_options(solve_cmd, common);
    add_solver_options(solve_cmd, common);
    solve_cmd->add_option("--out", common.out_path, "Value table output path");

    auto* decisions_cmd = app.add_subcommand("decisions", "Print decision values for the empty granted set");
    add_scenario_options(decisions_cmd, common);
    add_solver_options(decisions_cmd, common);
    decisions_cmd->add_option("--out", common.out_path, "CSV output path");

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the calm->alert probability and locate crossovers");
    add_scenario_options(sweep_cmd, common);
    add_solver_options(sweep_cmd, common);
    sweep_cmd->add_option("--out", common.out_path, "CSV output path (stdout when omitted)");
    sweep_cmd->add_option("--start", sweep.start, "First grid probability")->check(CLI::Range(0.0, 1.0));
    sweep_cmd->add_option("--stop", sweep.stop, "Last grid probability")->check(CLI::Range(0.0, 1.0));
    sweep_cmd->add_option("--step", sweep.step, "Grid step")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--width", sweep.width, "Bisection bracket width")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0 = hardware concurrency)");

    EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "Answer an access query from a solved value table");
    eval_cmd->add_option("--values", eval.values_path, "Value table file")->required();
    eval_cmd->add_option("--status", eval.status, "Emergency status (calm or alert)");
    eval_cmd->add_option("--granted", eval.granted, "Granted set: none, a set index, or user:resource,...");
    eval_cmd->add_option("--request", eval.request, "Request as user:resource, or eps")->required();

    auto* selfcheck_cmd = app.add_subcommand("selfcheck", "Cross-check the LP solution against value iteration");
    add_scenario_options(selfcheck_cmd, common);
    selfcheck_cmd->add_option("--tol", common.tol, "LP feasibility tolerance")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(common, out);
        if (decisions_cmd->parsed()) return cmd_decisions(common, out);
        if (sweep_cmd->parsed()) return cmd_sweep(common, sweep, out);
        if (eval_cmd->parsed()) return cmd_eval(eval, out);
        if (selfcheck_cmd->parsed()) return cmd_selfcheck(common, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return eval_cmd->parsed() ? 2 : 1;
    }
    return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("acmdp");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace acmdp
