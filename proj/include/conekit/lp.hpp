#pragma once

#include <string>
#include <vector>

namespace conekit {

enum class Sense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct SparseEntry {
    int col = 0;
    double coeff = 0.0;
};

using SparseRow = std::vector<SparseEntry>;

struct LpRow {
    SparseRow coeffs;
    double rhs = 0.0;
};

// Linear program over x >= 0:
//
//   max/min  objective . x
//   s.t.     eq_rows  . x  =  rhs
//            ge_rows  . x  >= rhs
//
// Column indices must lie in [0, num_vars); coefficients and rhs finite.
// Duplicate column entries within a row are summed on ingestion.
struct LinearProgram {
    int num_vars = 0;
    Sense sense = Sense::Maximize;
    SparseRow objective;
    std::vector<LpRow> eq_rows;
    std::vector<LpRow> ge_rows;

    void add_eq(SparseRow coeffs, double rhs);
    void add_ge(SparseRow coeffs, double rhs);
    void validate() const; // throws std::invalid_argument on malformed input
};

// status == Optimal guarantees x >= -1e-9 componentwise and every row
// satisfied to 1e-7 absolute.  row_duals (eq rows first, then ge rows)
// carries the simplex multipliers at termination: the optimal dual for
// Optimal, a Farkas certificate (y.A <= 0 columnwise, y.rhs > 0) for
// Infeasible.
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
    long iterations = 0;
    std::vector<double> row_duals;
};

// Two-phase primal simplex on the slack-augmented standard form.
// Entering variable: most negative reduced cost, lowest index on ties;
// after 5 * (rows + cols) total pivots Bland's rule takes over.  Pivot
// candidates need magnitude > tol.  Throws NumericalError after 10^6
// pivots or on a numerically singular basis.
LpSolution solve(const LinearProgram& lp, double tol = 1e-9);

// Same engine with the two tolerances split out: pivot_tol as above,
// feas_tol the largest phase-1 artificial objective still accepted as
// feasible (negative means the default 100 * pivot_tol * max |rhs|).
struct SolveOptions {
    double pivot_tol = 1e-9;
    double feas_tol = -1.0;
};

LpSolution solve(const LinearProgram& lp, const SolveOptions& options);

// Phase 1 only: true iff the artificial objective reaches <= tol.
bool feasible(const LinearProgram& lp, double tol = 1e-9);

// Fixed-layout MPS rendering: sections NAME, ROWS, COLUMNS, RHS, BOUNDS,
// ENDATA; rows named R0001.. with the objective row first (type N, then
// E and G rows in input order), columns C0001.., numbers with 12
// significant digits.  Maximization is flagged by a "* SENSE: MAX"
// comment, since classic MPS carries no sense.  Byte-deterministic.
std::string write_mps(const LinearProgram& lp, const std::string& name = "CONEKIT");

} // namespace conekit
