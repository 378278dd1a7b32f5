#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acmdp/rewards.hpp"

namespace acmdp {

enum class DiagnosticKind { Syntax, Range, Stochastic, Totality };

struct Diagnostic {
    int line = 0;  // 1-based; 0 when the problem is not tied to a line
    std::string message;
    DiagnosticKind kind = DiagnosticKind::Syntax;
};

/// Raised by parse_scenario with every problem found, not only the first.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string source, std::vector<Diagnostic> diagnostics);

    [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct ScenarioSource {
    std::string text;
    std::string provenance;  // file path or "builtin:<name>"
};

/// Parses the sectioned key-value scenario format:
///
///     [model]
///     users = alice bob
///     resources = high low
///     beta = 0.9
///     behavior = once            # unique | once | all
///     reward_variant = eps_zero  # eps_zero | eps_accrues
///
///     [emergency]
///     calm_to_alert = 0.1
///     alert_to_alert = 1.0
///
///     [reward_access]
///     alice high = 10
///     ...
///
///     [reward_resource]
///     high = -20
///     low = 0
///
/// Sections may come in any order, `#` starts a comment, numbers are plain
/// decimals without exponents. `calm_to_calm` and `alert_to_calm` may be given
/// explicitly, in which case each row must sum to 1.
[[nodiscard]] Scenario parse_scenario(const ScenarioSource& source);
[[nodiscard]] Scenario parse_scenario(std::string_view text);

[[nodiscard]] Scenario load_scenario_file(const std::string& path);

/// Canonical rendering; parse_scenario(render_scenario(s)) == s.
[[nodiscard]] std::string render_scenario(const Scenario& sc);

/// 64-bit FNV-1a of the canonical rendering, as 16 lowercase hex digits.
[[nodiscard]] std::string scenario_fingerprint(const Scenario& sc);

[[nodiscard]] const std::vector<std::string>& builtin_names();

/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] Scenario builtin_scenario(std::string_view name);

/// Fixed-notation shortest round-trip rendering of a real.
[[nodiscard]] std::string format_decimal(double v);

}  // namespace acmdp
