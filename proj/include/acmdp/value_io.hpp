#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acmdp/policy.hpp"
#include "acmdp/rewards.hpp"
#include "acmdp/vi_oracle.hpp"

namespace acmdp {

inline constexpr const char* kValueFileHeader = "ACMDP-VALUES v1";

/// Structured parse failure; `line` is 1-based, 0 when not tied to a line.
class ValueFileError : public std::runtime_error {
public:
    enum class Kind { Version, Malformed, Incomplete, Mismatch, Io };

    ValueFileError(Kind kind, int line, const std::string& message);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int line() const { return line_; }

private:
    Kind kind_;
    int line_;
};

struct ValueRow {
    State state;
    double value = 0.0;
    Action chosen = Action::Deny;
    double dv_deny = 0.0;
    double dv_allow = 0.0;

    [[nodiscard]] double gap() const;
};

/// Solved value table as persisted on disk.
struct ValueFile {
    std::string fingerprint;
    std::vector<std::string> user_names;
    std::vector<std::string> resource_names;
    ModelDims dims;
    std::vector<ValueRow> rows;  // enumeration order

    [[nodiscard]] std::optional<int> user_index(const std::string& label) const;
    [[nodiscard]] std::optional<int> resource_index(const std::string& label) const;
    [[nodiscard]] const ValueRow& row(const State& s) const;
};

/// Assembles the persisted table from a solved value vector.
[[nodiscard]] ValueFile make_value_file(const Scenario& sc, const TransitionModel& m, const ValueVector& v);

/// Writes the line-oriented format: header, fingerprint, then
/// `emergency,set,user|eps,resource|eps,value,action,dv_deny,dv_allow` per state.
void export_values(const ValueFile& file, std::ostream& out);

/// Parses and validates a value file. Labels and dimensions are recovered from
/// the rows; when `expected` is given its fingerprint and dimensions must match.
[[nodiscard]] ValueFile import_values(std::istream& in, const Scenario* expected = nullptr);

void save_value_file(const ValueFile& file, const std::string& path);
[[nodiscard]] ValueFile load_value_file(const std::string& path, const Scenario* expected = nullptr);

/// Renders a real with 12 significant digits.
[[nodiscard]] std::string format_real(double v);

}  // namespace acmdp
