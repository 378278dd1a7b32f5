#include "acmdp/value_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <memory>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "acmdp/scenario_config.hpp"

namespace acmdp {

namespace {

std::string describe(int line, const std::string& message) {
    return line > 0 ? "line " + std::to_string(line) + ": " + message : message;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> parse_real(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::uint32_t> parse_set(const std::string& s) {
    std::uint32_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

struct RawRow {
    int line = 0;
    Emergency emergency = Emergency::Calm;
    std::uint32_t set = 0;
    std::string user;
    std::string resource;
    ValueRow values;
};

int find_or_add(std::vector<std::string>& names, const std::string& label) {
    const auto it = std::find(names.begin(), names.end(), label);
    if (it != names.end()) return static_cast<int>(it - names.begin());
    names.push_back(label);
    return static_cast<int>(names.size()) - 1;
}

}  // namespace

ValueFileError::ValueFileError(Kind kind, int line, const std::string& message)
    : std::runtime_error(describe(line, message)), kind_(kind), line_(line) {}

double ValueRow::gap() const { return std::abs(dv_allow - dv_deny); }

std::optional<int> ValueFile::user_index(const std::string& label) const {
    const auto it = std::find(user_names.begin(), user_names.end(), label);
    if (it == user_names.end()) return std::nullopt;
    return static_cast<int>(it - user_names.begin());
}

std::optional<int> ValueFile::resource_index(const std::string& label) const {
    const auto it = std::find(resource_names.begin(), resource_names.end(), label);
    if (it == resource_names.end()) return std::nullopt;
    return static_cast<int>(it - resource_names.begin());
}

const ValueRow& ValueFile::row(const State& s) const { return rows.at(StateSpace(dims).index_of(s)); }

std::string format_real(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.12g", v);
    return buf.data();
}

ValueFile make_value_file(const Scenario& sc, const TransitionModel& m, const ValueVector& v) {
    const auto dv = decision_values(sc, m, v);
    const auto policy = extract_policy(dv);
    ValueFile file;
    file.fingerprint = scenario_fingerprint(sc);
    file.user_names = sc.user_names;
    file.resource_names = sc.resource_names;
    file.dims = sc.dims;
    file.rows.reserve(m.num_states());
    for (std::size_t i = 0; i < m.num_states(); ++i) {
        file.rows.push_back(ValueRow{m.space().state_at(i), v[i], policy.actions[i], dv.at(i, Action::Deny),
                                     dv.at(i, Action::Allow)});
    }
    return file;
}

void export_values(const ValueFile& file, std::ostream& out) {
    out << kValueFileHeader << '\n' << file.fingerprint << '\n';
    for (const ValueRow& r : file.rows) {
        out << to_string(r.state.emergency) << ',' << r.state.granted.bits << ',';
        if (r.state.request.is_empty()) {
            out << "eps,eps";
        } else {
            const Access& a = r.state.request.access();
            out << file.user_names[static_cast<std::size_t>(a.user)] << ','
                << file.resource_names[static_cast<std::size_t>(a.resource)];
        }
        out << ',' << format_real(r.value) << ',' << to_string(r.chosen) << ',' << format_real(r.dv_deny) << ','
            << format_real(r.dv_allow) << '\n';
    }
}

ValueFile import_values(std::istream& in, const Scenario* expected) {
    using Kind = ValueFileError::Kind;
    std::string line;
    if (!std::getline(in, line)) throw ValueFileError(Kind::Malformed, 1, "empty value file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kValueFileHeader) {
        if (line.starts_with("ACMDP-VALUES ")) {
            throw ValueFileError(Kind::Version, 1, "unsupported version '" + line.substr(13) + "', expected v1");
        }
        throw ValueFileError(Kind::Malformed, 1, "missing '" + std::string(kValueFileHeader) + "' header");
    }

    ValueFile file;
    if (!std::getline(in, line)) throw ValueFileError(Kind::Malformed, 2, "missing scenario fingerprint");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != 16 || !std::all_of(line.begin(), line.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); })) {
        throw ValueFileError(Kind::Malformed, 2, "fingerprint must be 16 hex digits");
    }
    file.fingerprint = line;

    std::vector<RawRow> raw;
    int number = 2;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_commas(line);
        if (f.size() != 8) {
            throw ValueFileError(Kind::Malformed, number, "expected 8 comma-separated fields, found " + std::to_string(f.size()));
        }
        RawRow r;
        r.line = number;
        const auto e = parse_emergency(f[0]);
        const auto set = parse_set(f[1]);
        const auto value = parse_real(f[4]);
        const auto chosen = parse_action(f[5]);
        const auto deny = parse_real(f[6]);
        const auto allow = parse_real(f[7]);
        if (!e) throw ValueFileError(Kind::Malformed, number, "unknown emergency status '" + f[0] + "'");
        if (!set) throw ValueFileError(Kind::Malformed, number, "invalid set index '" + f[1] + "'");
        if ((f[2] == "eps") != (f[3] == "eps") || f[2].empty() || f[3].empty()) {
            throw ValueFileError(Kind::Malformed, number, "request must be two labels or 'eps,eps'");
        }
        if (!value || !deny || !allow) throw ValueFileError(Kind::Malformed, number, "invalid real value");
        if (!chosen) throw ValueFileError(Kind::Malformed, number, "unknown action '" + f[5] + "'");
        r.emergency = *e;
        r.set = *set;
        r.user = f[2];
        r.resource = f[3];
        r.values.value = *value;
        r.values.chosen = *chosen;
        r.values.dv_deny = *deny;
        r.values.dv_allow = *allow;
        raw.push_back(std::move(r));
    }

    for (const auto& r : raw) {
        if (r.user == "eps") continue;
        find_or_add(file.user_names, r.user);
        find_or_add(file.resource_names, r.resource);
    }
    if (file.user_names.empty()) throw ValueFileError(Kind::Incomplete, 0, "no concrete requests found");
    file.dims = ModelDims{static_cast<int>(file.user_names.size()), static_cast<int>(file.resource_names.size())};
    std::unique_ptr<StateSpace> space;
    try {
        space = std::make_unique<StateSpace>(file.dims);
    } catch (const std::exception& ex) {
        throw ValueFileError(Kind::Mismatch, 0, ex.what());
    }
    if (raw.size() != space->size()) {
        throw ValueFileError(Kind::Incomplete, 0,
                             "expected " + std::to_string(space->size()) + " rows for " +
                                 std::to_string(file.dims.num_users) + " users x " +
                                 std::to_string(file.dims.num_resources) + " resources, found " +
                                 std::to_string(raw.size()));
    }

    file.rows.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const RawRow& r = raw[i];
        State s{r.emergency, AccessSetIndex{r.set}, Request::empty()};
        if (r.user != "eps") {
            s.request = Request{Access{*file.user_index(r.user), *file.resource_index(r.resource)}};
        }
        if (!is_valid(s, file.dims) || space->index_of(s) != i) {
            throw ValueFileError(Kind::Mismatch, r.line, "row is out of enumeration order or names an invalid state");
        }
        ValueRow row = r.values;
        row.state = s;
        file.rows.push_back(row);
    }

    if (expected != nullptr) {
        if (expected->dims != file.dims || expected->user_names != file.user_names ||
            expected->resource_names != file.resource_names) {
            throw ValueFileError(Kind::Mismatch, 0, "value file dimensions or labels do not match the scenario");
        }
        if (scenario_fingerprint(*expected) != file.fingerprint) {
            throw ValueFileError(Kind::Mismatch, 2, "fingerprint does not match the scenario");
        }
    }
    return file;
}

void save_value_file(const ValueFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValueFileError(ValueFileError::Kind::Io, 0, "cannot write " + path);
    export_values(file, out);
    if (!out) throw ValueFileError(ValueFileError::Kind::Io, 0, "failed writing " + path);
}

ValueFile load_value_file(const std::string& path, const Scenario* expected) {
    std::ifstream in(path);
    if (!in) throw ValueFileError(ValueFileError::Kind::Io, 0, "cannot open " + path);
    return import_values(in, expected);
}

}  // namespace acmdp
