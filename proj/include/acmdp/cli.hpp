#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "acmdp/rewards.hpp"

namespace acmdp {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Stochasticity, LP and VI solves, Bellman verification, LP/VI agreement and policy agreement.
/// Stops at the first failing check.
[[nodiscard]] std::vector<CheckOutcome> run_selfcheck(const Scenario& sc, double tolerance = 1e-9);

/// Entry point of the `acmdp` command line tool. Subcommands: solve, decisions, sweep, eval, selfcheck.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace acmdp
