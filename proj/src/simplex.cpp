#include "acmdp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace acmdp {

Constraint& LinearProgram::add_constraint(Relation relation, double rhs) {
    constraints.push_back(Constraint{std::vector<double>(num_variables, 0.0), relation, rhs});
    return constraints.back();
}

void validate_lp(const LinearProgram& lp) {
    if (lp.objective.size() != lp.num_variables) {
        throw std::invalid_argument("objective has " + std::to_string(lp.objective.size()) + " coefficients, expected " +
                                    std::to_string(lp.num_variables));
    }
    for (double c : lp.objective) {
        if (!std::isfinite(c)) throw std::invalid_argument("objective coefficient is not finite");
    }
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& con = lp.constraints[i];
        if (con.coefficients.size() != lp.num_variables) {
            throw std::invalid_argument("constraint " + std::to_string(i) + " has the wrong number of coefficients");
        }
        if (!std::isfinite(con.rhs) ||
            !std::all_of(con.coefficients.begin(), con.coefficients.end(), [](double v) { return std::isfinite(v); })) {
            throw std::invalid_argument("constraint " + std::to_string(i) + " contains a non-finite value");
        }
    }
}

void dump_lp(const LinearProgram& lp, std::ostream& out) {
    out << "min";
    for (double c : lp.objective) out << ' ' << c;
    out << '\n';
    for (const auto& con : lp.constraints) {
        for (std::size_t j = 0; j < con.coefficients.size(); ++j) out << (j ? " " : "") << con.coefficients[j];
        switch (con.relation) {
            case Relation::GreaterEqual: out << " >= "; break;
            case Relation::LessEqual: out << " <= "; break;
            case Relation::Equal: out << " = "; break;
        }
        out << con.rhs << '\n';
    }
}

std::string_view to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::IterationLimit: return "iteration-limit";
    }
    return "unknown";
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& con : lp.constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < con.coefficients.size(); ++j) lhs += con.coefficients[j] * x[j];
        double v = 0.0;
        switch (con.relation) {
            case Relation::GreaterEqual: v = con.rhs - lhs; break;
            case Relation::LessEqual: v = lhs - con.rhs; break;
            case Relation::Equal: v = std::abs(lhs - con.rhs); break;
        }
        worst = std::max(worst, v);
    }
    return worst;
}

namespace {

// Dense tableau in standard form: T x = b, x >= 0, with an explicit basis.
// Column layout: [x+ (n) | x- (n) | slacks | artificials | rhs].
class Tableau {
public:
    Tableau(const LinearProgram& lp, const SimplexOptions& opt) : opt_(opt) {
        n_ = lp.num_variables;
        rows_ = lp.constraints.size();
        std::size_t slacks = 0;
        for (const auto& con : lp.constraints) slacks += con.relation != Relation::Equal ? 1 : 0;

        // A row needs an artificial unless its slack enters with +1 after sign normalization.
        std::vector<bool> needs_art(rows_);
        std::size_t arts = 0;
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto& con = lp.constraints[i];
            const bool flip = con.rhs < 0.0;
            const bool slack_positive = (con.relation == Relation::LessEqual && !flip) ||
                                        (con.relation == Relation::GreaterEqual && flip);
            needs_art[i] = !slack_positive;
            arts += needs_art[i] ? 1 : 0;
        }

        slack_begin_ = 2 * n_;
        art_begin_ = slack_begin_ + slacks;
        cols_ = art_begin_ + arts;
        width_ = cols_ + 1;
        t_.assign(rows_ * width_, 0.0);
        basis_.assign(rows_, 0);

        std::size_t slack = slack_begin_;
        std::size_t art = art_begin_;
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto& con = lp.constraints[i];
            const double sign = con.rhs < 0.0 ? -1.0 : 1.0;
            double* row = &t_[i * width_];
            for (std::size_t j = 0; j < n_; ++j) {
                row[j] = sign * con.coefficients[j];
                row[n_ + j] = -sign * con.coefficients[j];
            }
            if (con.relation != Relation::Equal) {
                row[slack] = sign * (con.relation == Relation::LessEqual ? 1.0 : -1.0);
                if (!needs_art[i]) basis_[i] = slack;
                ++slack;
            }
            if (needs_art[i]) {
                row[art] = 1.0;
                basis_[i] = art++;
            }
            row[cols_] = sign * con.rhs;
        }
    }

    LpSolution solve(const LinearProgram& lp) {
        LpSolution sol;
        max_iter_ = opt_.max_iterations ? opt_.max_iterations : 100 * (rows_ + cols_);

        if (art_begin_ < cols_) {
            std::vector<double> phase1(cols_, 0.0);
            std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(art_begin_), phase1.end(), 1.0);
            const LpStatus st = optimize(phase1);
            if (st == LpStatus::IterationLimit) {
                sol.status = st;
                sol.pivots = pivots_;
                return sol;
            }
            if (-d_[cols_] > opt_.feasibility_tolerance) {
                sol.status = LpStatus::Infeasible;
                sol.pivots = pivots_;
                return sol;
            }
            drive_out_artificials();
        }

        std::vector<double> phase2(cols_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            phase2[j] = lp.objective[j];
            phase2[n_ + j] = -lp.objective[j];
        }
        sol.status = optimize(phase2);
        sol.pivots = pivots_;
        if (sol.status != LpStatus::Optimal) return sol;

        std::vector<double> x(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) x[basis_[i]] = t_[i * width_ + cols_];
        sol.values.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) sol.values[j] = x[j] - x[n_ + j];
        sol.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) sol.objective += lp.objective[j] * sol.values[j];
        return sol;
    }

private:
    double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }

    void price(const std::vector<double>& cost) {
        d_.assign(width_, 0.0);
        for (std::size_t j = 0; j < cols_; ++j) d_[j] = cost[j];
        for (std::size_t i = 0; i < rows_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &t_[i * width_];
            for (std::size_t j = 0; j < width_; ++j) d_[j] -= cb * row[j];
        }
    }

    std::size_t choose_entering(bool bland) const {
        std::size_t best = cols_;
        double best_d = -opt_.feasibility_tolerance;
        for (std::size_t j = 0; j < art_begin_; ++j) {
            if (d_[j] < best_d) {
                best = j;
                if (bland) break;
                best_d = d_[j];
            }
        }
        return best;
    }

    // Minimum ratio test; ties go to the smallest basic column index.
    std::size_t choose_leaving(std::size_t col) {
        std::size_t best = rows_;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rows_; ++i) {
            const double a = at(i, col);
            if (a <= opt_.pivot_tolerance) continue;
            const double ratio = std::max(0.0, at(i, cols_)) / a;
            if (best == rows_ || ratio < best_ratio - kRatioTie) {
                best = i;
                best_ratio = ratio;
            } else if (ratio <= best_ratio + kRatioTie && basis_[i] < basis_[best]) {
                best = i;
                best_ratio = std::min(best_ratio, ratio);
            }
        }
        return best;
    }

    void pivot(std::size_t r, std::size_t c) {
        double* prow = &t_[r * width_];
        const double inv = 1.0 / prow[c];
        nz_.clear();
        for (std::size_t j = 0; j < width_; ++j) {
            if (prow[j] != 0.0) {
                prow[j] *= inv;
                nz_.push_back(j);
            }
        }
        prow[c] = 1.0;
        auto eliminate = [&](double* row) {
            const double f = row[c];
            if (f == 0.0) return;
            for (std::size_t j : nz_) row[j] -= f * prow[j];
            row[c] = 0.0;
        };
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i != r) eliminate(&t_[i * width_]);
        }
        eliminate(d_.data());
        basis_[r] = c;
        ++pivots_;
    }

    LpStatus optimize(const std::vector<double>& cost) {
        price(cost);
        std::size_t stalled = 0;
        while (true) {
            if (pivots_ >= max_iter_) return LpStatus::IterationLimit;
            const bool bland = opt_.rule == PivotRule::Bland || stalled >= kStallLimit;
            const std::size_t col = choose_entering(bland);
            if (col == cols_) return LpStatus::Optimal;
            const std::size_t row = choose_leaving(col);
            if (row == rows_) return LpStatus::Unbounded;
            const bool degenerate = at(row, cols_) <= opt_.pivot_tolerance;
            stalled = degenerate ? stalled + 1 : 0;
            pivot(row, col);
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < art_begin_) continue;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (std::abs(at(i, j)) > opt_.pivot_tolerance) {
                    pivot(i, j);
                    break;
                }
            }
            // A row with no usable column is redundant; its artificial stays basic at zero.
        }
    }

    static constexpr std::size_t kStallLimit = 50;
    static constexpr double kRatioTie = 1e-12;

    SimplexOptions opt_;
    std::size_t n_ = 0, rows_ = 0, cols_ = 0, width_ = 0;
    std::size_t slack_begin_ = 0, art_begin_ = 0;
    std::vector<double> t_;
    std::vector<double> d_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> nz_;
    std::size_t pivots_ = 0, max_iter_ = 0;
};

}  // namespace

LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options) {
    validate_lp(lp);
    Tableau tableau(lp, options);
    return tableau.solve(lp);
}

}  // namespace acmdp
