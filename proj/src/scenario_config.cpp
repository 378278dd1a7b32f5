#include "acmdp/scenario_config.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

namespace acmdp {

namespace {

std::string describe(const std::string& source, const std::vector<Diagnostic>& diags) {
    std::ostringstream msg;
    msg << "invalid scenario " << source << ':';
    for (const auto& d : diags) {
        msg << "\n  ";
        if (d.line > 0) msg << "line " << d.line << ": ";
        msg << d.message;
    }
    return msg.str();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::optional<double> parse_number(std::string_view token) {
    static const std::regex grammar(R"([+-]?[0-9]+(\.[0-9]+)?)");
    if (!std::regex_match(token.begin(), token.end(), grammar)) return std::nullopt;
    if (token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return v;
}

bool valid_label(const std::string& s) {
    static const std::regex grammar(R"([A-Za-z_][A-Za-z0-9_.-]*)");
    return std::regex_match(s, grammar) && s != "eps";
}

struct Line {
    int number = 0;
    std::string lhs;  // trimmed text before '='
    std::string rhs;  // trimmed text after '='
};

class Parser {
public:
    explicit Parser(const ScenarioSource& src) : src_(src) {}

    Scenario run() {
        split_sections();
        Scenario sc;
        parse_model(sc);
        parse_emergency(sc);
        if (labels_ok_) {
            parse_reward_access(sc);
            parse_reward_resource(sc);
        }
        if (!diags_.empty()) throw ScenarioError(src_.provenance, diags_);
        return sc;
    }

private:
    void error(int line, std::string msg, DiagnosticKind kind = DiagnosticKind::Syntax) {
        diags_.push_back({line, std::move(msg), kind});
    }

    void split_sections() {
        static const std::set<std::string> known{"model", "emergency", "reward_access", "reward_resource"};
        std::istringstream in(src_.text);
        std::string raw;
        std::string current;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            std::string_view text = raw;
            if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
            text = trim(text);
            if (text.empty()) continue;
            if (text.front() == '[') {
                if (text.back() != ']') {
                    error(number, "malformed section header");
                    current.clear();
                    continue;
                }
                current = std::string(trim(text.substr(1, text.size() - 2)));
                if (!known.contains(current)) {
                    error(number, "unknown section [" + current + "]");
                    current.clear();
                } else if (!section_lines_.emplace(current, number).second) {
                    error(number, "duplicate section [" + current + "]");
                    current.clear();
                } else {
                    sections_[current];
                }
                continue;
            }
            if (current.empty()) {
                error(number, "entry outside of a known section");
                continue;
            }
            const auto eq = text.find('=');
            if (eq == std::string_view::npos) {
                error(number, "expected '<key> = <value>'");
                continue;
            }
            sections_[current].push_back(
                {number, std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))});
        }
        for (const char* name : {"model", "emergency", "reward_access", "reward_resource"}) {
            if (!sections_.contains(name)) error(0, std::string("missing section [") + name + "]");
        }
    }

    // Reads `key = value` pairs of a flat section, rejecting unknown and duplicate keys.
    std::map<std::string, Line> keyed(const std::string& section, const std::set<std::string>& allowed) {
        std::map<std::string, Line> out;
        const auto it = sections_.find(section);
        if (it == sections_.end()) return out;
        for (const Line& l : it->second) {
            if (!allowed.contains(l.lhs)) {
                error(l.number, "unknown key '" + l.lhs + "' in [" + section + "]");
            } else if (!out.emplace(l.lhs, l).second) {
                error(l.number, "duplicate key '" + l.lhs + "'");
            }
        }
        return out;
    }

    std::optional<Line> require(const std::map<std::string, Line>& keys, const std::string& section,
                                const std::string& key) {
        const auto it = keys.find(key);
        if (it != keys.end()) return it->second;
        if (sections_.contains(section)) error(section_lines_[section], "missing key '" + key + "' in [" + section + "]");
        return std::nullopt;
    }

    std::optional<double> number(const Line& l) {
        const auto v = parse_number(l.rhs);
        if (!v) error(l.number, "'" + l.rhs + "' is not a decimal number");
        return v;
    }

    std::vector<std::string> labels(const Line& l, const char* what) {
        auto names = split_ws(l.rhs);
        if (names.empty()) error(l.number, std::string("no ") + what + " declared");
        std::set<std::string> seen;
        for (const auto& n : names) {
            if (!valid_label(n)) error(l.number, "invalid " + std::string(what) + " label '" + n + "'");
            if (!seen.insert(n).second) error(l.number, "duplicate " + std::string(what) + " label '" + n + "'");
        }
        if (seen.size() != names.size() || names.empty()) labels_ok_ = false;
        return names;
    }

    void parse_model(Scenario& sc) {
        const auto keys = keyed("model", {"users", "resources", "beta", "behavior", "reward_variant"});
        const auto users = require(keys, "model", "users");
        const auto resources = require(keys, "model", "resources");
        if (users) sc.user_names = labels(*users, "user");
        if (resources) sc.resource_names = labels(*resources, "resource");
        if (!users || !resources) labels_ok_ = false;
        sc.dims = ModelDims{static_cast<int>(sc.user_names.size()), static_cast<int>(sc.resource_names.size())};
        if (labels_ok_) {
            try {
                validate_dims(sc.dims);
            } catch (const std::exception& e) {
                error(users->number, e.what());
                labels_ok_ = false;
            }
        }
        if (const auto beta = require(keys, "model", "beta")) {
            if (const auto v = number(*beta)) {
                if (!(*v >= 0.0 && *v < 1.0)) error(beta->number, "beta " + beta->rhs + " is outside [0, 1)", DiagnosticKind::Range);
                sc.beta = *v;
            }
        }
        if (const auto b = require(keys, "model", "behavior")) {
            if (const auto v = parse_behavior(b->rhs)) {
                sc.behavior = *v;
            } else {
                error(b->number, "unknown behavior '" + b->rhs + "' (expected unique, once or all)");
            }
        }
        if (const auto rv = require(keys, "model", "reward_variant")) {
            if (const auto v = parse_variant(rv->rhs)) {
                sc.variant = *v;
            } else {
                error(rv->number, "unknown reward_variant '" + rv->rhs + "' (expected eps_zero or eps_accrues)");
            }
        }
    }

    void parse_emergency(Scenario& sc) {
        const auto keys = keyed("emergency", {"calm_to_alert", "alert_to_alert", "calm_to_calm", "alert_to_calm"});
        auto probability = [&](const std::optional<Line>& l) -> std::optional<double> {
            if (!l) return std::nullopt;
            const auto v = number(*l);
            if (v && !(*v >= 0.0 && *v <= 1.0)) {
                error(l->number, "probability " + l->rhs + " is outside [0, 1]", DiagnosticKind::Stochastic);
                return std::nullopt;
            }
            return v;
        };
        const auto c2a = probability(require(keys, "emergency", "calm_to_alert"));
        const auto a2a = probability(require(keys, "emergency", "alert_to_alert"));
        if (!c2a || !a2a) return;
        sc.emergency = EmergencyMatrix::from_rates(*c2a, *a2a);
        // Explicit complements must close their row.
        const std::array<std::pair<const char*, double>, 2> rows{{{"calm_to_calm", *c2a}, {"alert_to_calm", *a2a}}};
        for (const auto& [key, other] : rows) {
            const auto it = keys.find(key);
            if (it == keys.end()) continue;
            const auto v = probability(it->second);
            if (v && std::abs(*v + other - 1.0) > kStochasticTolerance) {
                error(it->second.number, std::string("row of '") + key + "' sums to " + format_decimal(*v + other) +
                                             ", expected 1",
                      DiagnosticKind::Stochastic);
            }
        }
    }

    std::optional<int> index_of(const std::vector<std::string>& names, const std::string& label) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == label) return static_cast<int>(i);
        }
        return std::nullopt;
    }

    void parse_reward_access(Scenario& sc) {
        const auto n = static_cast<std::size_t>(sc.dims.num_accesses());
        sc.rewards.access.assign(n, 0.0);
        std::vector<bool> seen(n, false);
        const auto it = sections_.find("reward_access");
        if (it == sections_.end()) return;
        for (const Line& l : it->second) {
            const auto key = split_ws(l.lhs);
            if (key.size() != 2) {
                error(l.number, "expected '<user> <resource> = <reward>'");
                continue;
            }
            const auto u = index_of(sc.user_names, key[0]);
            const auto r = index_of(sc.resource_names, key[1]);
            if (!u) error(l.number, "undeclared user '" + key[0] + "'");
            if (!r) error(l.number, "undeclared resource '" + key[1] + "'");
            const auto v = number(l);
            if (!u || !r) continue;
            const auto bit = static_cast<std::size_t>(access_bit_index(Access{*u, *r}, sc.dims));
            if (seen[bit]) {
                error(l.number, "duplicate reward for (" + key[0] + ", " + key[1] + ")");
                continue;
            }
            seen[bit] = true;
            if (v) sc.rewards.access[bit] = *v;
        }
        for (std::size_t bit = 0; bit < n; ++bit) {
            if (seen[bit]) continue;
            const Access a = access_from_bit(static_cast<int>(bit), sc.dims);
            error(section_lines_["reward_access"], "missing reward_access entry for (" +
                                                       sc.user_names[static_cast<std::size_t>(a.user)] + ", " +
                                                       sc.resource_names[static_cast<std::size_t>(a.resource)] + ")",
                  DiagnosticKind::Totality);
        }
    }

    void parse_reward_resource(Scenario& sc) {
        const auto n = sc.resource_names.size();
        sc.rewards.resource.assign(n, 0.0);
        std::vector<bool> seen(n, false);
        const auto it = sections_.find("reward_resource");
        if (it == sections_.end()) return;
        for (const Line& l : it->second) {
            const auto r = index_of(sc.resource_names, l.lhs);
            if (!r) {
                error(l.number, "undeclared resource '" + l.lhs + "'");
                continue;
            }
            const auto v = number(l);
            const auto idx = static_cast<std::size_t>(*r);
            if (seen[idx]) {
                error(l.number, "duplicate reward for resource '" + l.lhs + "'");
                continue;
            }
            seen[idx] = true;
            if (v) sc.rewards.resource[idx] = *v;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (!seen[r]) {
                error(section_lines_["reward_resource"], "missing reward_resource entry for '" + sc.resource_names[r] + "'",
                      DiagnosticKind::Totality);
            }
        }
    }

    const ScenarioSource& src_;
    std::vector<Diagnostic> diags_;
    std::map<std::string, std::vector<Line>> sections_;
    std::map<std::string, int> section_lines_;
    bool labels_ok_ = true;
};

Scenario example_scenario(RequestBehavior behavior, RewardVariant variant, double beta, EmergencyMatrix emergency) {
    Scenario sc;
    sc.dims = ModelDims{2, 2};
    sc.user_names = {"alice", "bob"};
    sc.resource_names = {"high", "low"};
    // Bit order u * NR + r: (alice,high), (alice,low), (bob,high), (bob,low).
    sc.rewards.access = {10.0, 6.0, -10.0, 4.0};
    sc.rewards.resource = {-20.0, 0.0};
    sc.emergency = emergency;
    sc.behavior = behavior;
    sc.variant = variant;
    sc.beta = beta;
    return sc;
}

}  // namespace

ScenarioError::ScenarioError(std::string source, std::vector<Diagnostic> diagnostics)
    : std::runtime_error(describe(source, diagnostics)), diagnostics_(std::move(diagnostics)) {}

Scenario parse_scenario(const ScenarioSource& source) { return Parser(source).run(); }

Scenario parse_scenario(std::string_view text) { return parse_scenario(ScenarioSource{std::string(text), "<text>"}); }

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(ScenarioSource{buf.str(), path});
}

std::string format_decimal(double v) {
    if (v == 0.0) return "0";
    std::array<char, 512> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    if (ec != std::errc{}) throw std::runtime_error("cannot render number");
    return std::string(buf.data(), ptr);
}

std::string render_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "[model]\nusers =";
    for (const auto& u : sc.user_names) out << ' ' << u;
    out << "\nresources =";
    for (const auto& r : sc.resource_names) out << ' ' << r;
    out << "\nbeta = " << format_decimal(sc.beta) << '\n'
        << "behavior = " << to_string(sc.behavior) << '\n'
        << "reward_variant = " << to_string(sc.variant) << "\n\n"
        << "[emergency]\n"
        << "calm_to_alert = " << format_decimal(sc.emergency(Emergency::Calm, Emergency::Alert)) << '\n'
        << "alert_to_alert = " << format_decimal(sc.emergency(Emergency::Alert, Emergency::Alert)) << "\n\n"
        << "[reward_access]\n";
    for (int u = 0; u < sc.dims.num_users; ++u) {
        for (int r = 0; r < sc.dims.num_resources; ++r) {
            out << sc.user_names[static_cast<std::size_t>(u)] << ' ' << sc.resource_names[static_cast<std::size_t>(r)]
                << " = " << format_decimal(sc.access_reward(Access{u, r})) << '\n';
        }
    }
    out << "\n[reward_resource]\n";
    for (std::size_t r = 0; r < sc.resource_names.size(); ++r) {
        out << sc.resource_names[r] << " = " << format_decimal(sc.rewards.resource[r]) << '\n';
    }
    return out.str();
}

std::string scenario_fingerprint(const Scenario& sc) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : render_scenario(sc)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::array<char, 17> hex{};
    std::snprintf(hex.data(), hex.size(), "%016llx", static_cast<unsigned long long>(h));
    return std::string(hex.data(), 16);
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"table1",       "table2_unique",   "table2_once",  "table2_all",
                                                "modified_unique", "modified_once", "modified_all"};
    return names;
}

Scenario builtin_scenario(std::string_view name) {
    const auto identity = EmergencyMatrix::from_rates(0.0, 1.0);
    const auto risky = EmergencyMatrix::from_rates(0.1, 1.0);
    if (name == "table1") return example_scenario(RequestBehavior::Unique, RewardVariant::EpsZero, 0.0, identity);

    static const std::map<std::string_view, RequestBehavior, std::less<>> suffixes{
        {"unique", RequestBehavior::Unique}, {"once", RequestBehavior::Once}, {"all", RequestBehavior::All}};
    for (const auto& [prefix, variant] : {std::pair{std::string_view("table2_"), RewardVariant::EpsZero},
                                          std::pair{std::string_view("modified_"), RewardVariant::EpsAccrues}}) {
        if (!name.starts_with(prefix)) continue;
        const auto it = suffixes.find(name.substr(prefix.size()));
        if (it != suffixes.end()) return example_scenario(it->second, variant, 0.9, risky);
    }
    throw std::invalid_argument("unknown builtin scenario '" + std::string(name) + "'");
}

}  // namespace acmdp
