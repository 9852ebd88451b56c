#pragma once

#include <optional>
#include <vector>

#include "conekit/lp.hpp"
#include "conekit/sdbasis.hpp"
#include "conekit/symmat.hpp"

namespace conekit {

// Outcome of a conic membership test.  For members, coefficients holds
// gamma >= -1e-9 per generator with |sum_k gamma_k expand(G_k) - M|_F
// <= tol * max(1, |M|_F).  For non-members, separator (when the
// certificate extraction succeeds) holds a matrix Y with <Y, M> < 0 yet
// <Y, G_k> >= -tol * max(1, |Y|_F) for every generator.
struct MembershipResult {
    bool member = false;
    std::vector<double> coefficients;
    std::optional<SymMatrix> separator;
    double residual = 0.0;
};

// Diagonal dominance, tested exactly: A_ii >= sum_{j != i} |A_ij| rowwise.
bool is_dd(const SymMatrix& a);

// Scaled diagonal dominance via the scaling LP: feasibility of
//   d_i >= 1,   A_ii d_i - sum_{j != i} |A_ij| d_j >= 0.
// A positive feasible d makes diag(d) A diag(d) diagonally dominant.
// Rows with A_ii = 0 but some |A_ij| > 0 short-circuit to false.
bool is_sdd(const SymMatrix& a, double tol = 1e-9);

// Does m lie in the conic hull of the expanded generators?  Decided by
// LP feasibility of gamma >= 0 with one equality per packed entry of m.
MembershipResult cone_membership(const SymMatrix& m,
                                 const std::vector<BasisMatrix>& generators,
                                 double tol = 1e-7);

// LP rows over packed matrix variables X expressing <expand(G), X> >= 0
// for each generator G (inner product, so off-diagonal terms doubled):
// (i < j) gives X_ii + 2 alpha X_ij + alpha^2 X_jj, (i = j) gives
// (1 + alpha)^2 X_ii.  Row k corresponds to generators[k].
std::vector<SparseRow> dual_cone_rows(const std::vector<BasisMatrix>& generators,
                                      int n);

} // namespace conekit
