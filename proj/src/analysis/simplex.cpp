#include "taskmatch/analysis/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace taskmatch {

std::size_t LinearProgram::add_var(double cost) {
    objective.push_back(cost);
    return num_vars++;
}

void LinearProgram::add_row(std::vector<std::pair<std::size_t, double>> coeffs, Relation relation,
                            double rhs) {
    rows.push_back({std::move(coeffs), relation, rhs});
}

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-10;
constexpr int kDegenerateRunBeforeBland = 50;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a_[i * (n_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * (n_ + 1) + j]; }
    double& rhs(std::size_t i) { return a_[i * (n_ + 1) + n_]; }
    double rhs(std::size_t i) const { return a_[i * (n_ + 1) + n_]; }
    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

    std::vector<std::size_t> basis;
    std::vector<double> reduced;  // length n_, entering candidates have reduced > 0

    void set_costs(const std::vector<double>& cost) {
        reduced.assign(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            reduced[j] = cost[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost[basis[i]];
            if (cb == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < n_; ++j) {
                reduced[j] -= cb * at(i, j);
            }
        }
    }

    void pivot(std::size_t r, std::size_t col) {
        const double inv = 1.0 / at(r, col);
        nz_.clear();
        for (std::size_t j = 0; j <= n_; ++j) {
            double& v = at(r, j);
            if (v != 0.0) {
                v *= inv;
                nz_.push_back(j);
            }
        }
        at(r, col) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) {
                continue;
            }
            const double f = at(i, col);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j : nz_) {
                at(i, j) -= f * at(r, j);
            }
            at(i, col) = 0.0;
        }
        const double f = reduced[col];
        if (f != 0.0) {
            for (std::size_t j : nz_) {
                if (j < n_) {
                    reduced[j] -= f * at(r, j);
                }
            }
            reduced[col] = 0.0;
        }
        basis[r] = col;
    }

    /// Maximizes the current costs, letting only columns j < allowed enter.
    LpStatus optimize(std::size_t allowed, std::size_t max_iter) {
        int degenerate_run = 0;
        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
            std::size_t enter = n_;
            double best = kCostEps;
            for (std::size_t j = 0; j < allowed; ++j) {
                if (reduced[j] > best) {
                    enter = j;
                    if (bland) {
                        break;
                    }
                    best = reduced[j];
                }
            }
            if (enter == n_) {
                return LpStatus::Optimal;
            }
            std::size_t leave = m_;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double v = at(i, enter);
                if (v <= kPivotEps) {
                    continue;
                }
                const double q = rhs(i) / v;
                if (q < ratio - 1e-12 ||
                    (q <= ratio + 1e-12 && leave < m_ && basis[i] < basis[leave])) {
                    ratio = q;
                    leave = i;
                }
            }
            if (leave == m_) {
                return LpStatus::Unbounded;
            }
            degenerate_run = ratio <= 1e-12 ? degenerate_run + 1 : 0;
            pivot(leave, enter);
        }
        return LpStatus::IterationLimit;
    }

private:
    std::size_t m_, n_;
    std::vector<double> a_;
    std::vector<std::size_t> nz_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
    if (lp.objective.size() != lp.num_vars) {
        throw std::invalid_argument("objective length does not match variable count");
    }
    const std::size_t n = lp.num_vars;
    const std::size_t m = lp.rows.size();

    // Normalize to non-negative right-hand sides.
    std::vector<Relation> rel(m);
    std::vector<double> sign(m, 1.0);
    std::size_t slacks = 0, artificials = 0;
    for (std::size_t i = 0; i < m; ++i) {
        rel[i] = lp.rows[i].relation;
        if (lp.rows[i].rhs < 0.0) {
            sign[i] = -1.0;
            if (rel[i] == Relation::LessEqual) {
                rel[i] = Relation::GreaterEqual;
            } else if (rel[i] == Relation::GreaterEqual) {
                rel[i] = Relation::LessEqual;
            }
        }
        if (rel[i] != Relation::Equal) {
            ++slacks;
        }
        if (rel[i] != Relation::LessEqual) {
            ++artificials;
        }
    }
    const std::size_t art0 = n + slacks;
    const std::size_t cols = art0 + artificials;
    Tableau t(m, cols);
    t.basis.assign(m, 0);
    std::size_t next_slack = n, next_art = art0;
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& [j, v] : lp.rows[i].coeffs) {
            if (j >= n) {
                throw std::invalid_argument("constraint references unknown variable");
            }
            t.at(i, j) += sign[i] * v;
        }
        t.rhs(i) = sign[i] * lp.rows[i].rhs;
        switch (rel[i]) {
            case Relation::LessEqual:
                t.at(i, next_slack) = 1.0;
                t.basis[i] = next_slack++;
                break;
            case Relation::GreaterEqual:
                t.at(i, next_slack++) = -1.0;
                t.at(i, next_art) = 1.0;
                t.basis[i] = next_art++;
                break;
            case Relation::Equal:
                t.at(i, next_art) = 1.0;
                t.basis[i] = next_art++;
                break;
        }
    }

    const std::size_t max_iter = 50 * (m + cols) + 1000;
    LpResult result;

    if (artificials > 0) {
        std::vector<double> cost(cols, 0.0);
        for (std::size_t j = art0; j < cols; ++j) {
            cost[j] = -1.0;
        }
        t.set_costs(cost);
        const LpStatus s = t.optimize(cols, max_iter);
        if (s == LpStatus::IterationLimit) {
            result.status = s;
            return result;
        }
        double infeas = 0.0;
        double scale = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            scale = std::max(scale, std::abs(t.rhs(i)));
            if (t.basis[i] >= art0) {
                infeas += t.rhs(i);
            }
        }
        if (infeas > 1e-9 * scale) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        // Drive remaining zero-level artificials out of the basis.
        for (std::size_t i = 0; i < m; ++i) {
            if (t.basis[i] < art0) {
                continue;
            }
            for (std::size_t j = 0; j < art0; ++j) {
                if (std::abs(t.at(i, j)) > kPivotEps) {
                    t.pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<double> cost(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cost[j] = lp.objective[j];
    }
    t.set_costs(cost);
    const LpStatus s = t.optimize(art0, max_iter);
    result.status = s;
    if (s != LpStatus::Optimal) {
        return result;
    }
    result.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] < n) {
            result.x[t.basis[i]] = std::max(0.0, t.rhs(i));
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        result.objective += lp.objective[j] * result.x[j];
    }
    return result;
}

}  // namespace taskmatch
