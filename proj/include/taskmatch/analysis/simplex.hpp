#ifndef TASKMATCH_ANALYSIS_SIMPLEX_HPP
#define TASKMATCH_ANALYSIS_SIMPLEX_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace taskmatch {

enum class Relation { LessEqual, Equal, GreaterEqual };

/// maximize objective . x subject to rows, x >= 0.
struct LinearProgram {
    struct Row {
        std::vector<std::pair<std::size_t, double>> coeffs;
        Relation relation = Relation::LessEqual;
        double rhs = 0.0;
    };

    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<Row> rows;

    /// Adds a variable with objective coefficient `cost`; returns its index.
    std::size_t add_var(double cost = 0.0);
    void add_row(std::vector<std::pair<std::size_t, double>> coeffs, Relation relation,
                 double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/// Dense two-phase primal simplex. Uses the largest-coefficient rule and
/// falls back to Bland's rule after a run of degenerate pivots.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace taskmatch

#endif
