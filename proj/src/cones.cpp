#include "conekit/cones.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conekit/errors.hpp"

namespace conekit {

bool is_dd(const SymMatrix& a) {
    const int n = a.dim();
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) off += std::abs(a(i, j));
        if (a(i, i) < off) return false;
    }
    return true;
}

bool is_sdd(const SymMatrix& a, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("is_sdd: tol must be positive");
    const int n = a.dim();
    if (n == 0) return true;

    for (int i = 0; i < n; ++i) {
        if (a(i, i) != 0.0) continue;
        for (int j = 0; j < n; ++j)
            if (j != i && a(i, j) != 0.0) return false;
    }

    LinearProgram lp;
    lp.num_vars = n;
    for (int i = 0; i < n; ++i)
        lp.add_ge({{i, 1.0}}, 1.0);
    for (int i = 0; i < n; ++i) {
        SparseRow row;
        row.push_back({i, a(i, i)});
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double c = std::abs(a(i, j));
            if (c != 0.0) row.push_back({j, -c});
        }
        lp.add_ge(std::move(row), 0.0);
    }
    return feasible(lp, tol);
}

std::vector<SparseRow> dual_cone_rows(const std::vector<BasisMatrix>& generators, int n) {
    std::vector<SparseRow> rows;
    rows.reserve(generators.size());
    for (const auto& g : generators) {
        if (g.i < 0 || g.i > g.j || g.j >= n)
            throw std::invalid_argument("dual_cone_rows: generator index out of range");
        SparseRow row;
        if (g.i == g.j) {
            row.push_back({SymMatrix::packed_index(n, g.i, g.i),
                           (1.0 + g.alpha) * (1.0 + g.alpha)});
        } else {
            row.push_back({SymMatrix::packed_index(n, g.i, g.i), 1.0});
            row.push_back({SymMatrix::packed_index(n, g.i, g.j), 2.0 * g.alpha});
            row.push_back({SymMatrix::packed_index(n, g.j, g.j), g.alpha * g.alpha});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

MembershipResult cone_membership(const SymMatrix& m,
                                 const std::vector<BasisMatrix>& generators,
                                 double tol) {
    if (tol <= 0.0)
        throw std::invalid_argument("cone_membership: tol must be positive");
    const int n = m.dim();
    const int dim = SymMatrix::packed_size(n);
    const int ngen = static_cast<int>(generators.size());

    // One equality per packed entry: sum_k gamma_k expand(G_k) = m,
    // gamma >= 0.  Generator k contributes to at most three entries.
    LinearProgram lp;
    lp.num_vars = ngen;
    std::vector<SparseRow> entry_rows(dim);
    for (int k = 0; k < ngen; ++k) {
        const auto& g = generators[k];
        if (g.i < 0 || g.i > g.j || g.j >= n)
            throw std::invalid_argument("cone_membership: generator index out of range");
        if (g.i == g.j) {
            entry_rows[SymMatrix::packed_index(n, g.i, g.i)].push_back(
                {k, (1.0 + g.alpha) * (1.0 + g.alpha)});
        } else {
            entry_rows[SymMatrix::packed_index(n, g.i, g.i)].push_back({k, 1.0});
            entry_rows[SymMatrix::packed_index(n, g.i, g.j)].push_back({k, g.alpha});
            entry_rows[SymMatrix::packed_index(n, g.j, g.j)].push_back({k, g.alpha * g.alpha});
        }
    }
    for (int p = 0; p < dim; ++p)
        lp.add_eq(std::move(entry_rows[p]), m.packed()[p]);

    // Phase-1 acceptance budget: the packed one-norm of the residual
    // bounds its Frobenius norm by sqrt(2), so divide that out.
    const double scale = std::max(1.0, fro_norm(m));
    SolveOptions options;
    options.feas_tol = tol * scale / std::sqrt(2.0);
    LpSolution sol = solve(lp, options);

    MembershipResult res;
    if (sol.status == LpStatus::Optimal) {
        res.member = true;
        res.coefficients = sol.x;

        SymMatrix rec(n);
        auto& pv = rec.packed_values();
        for (int k = 0; k < ngen; ++k) {
            const double gamma = res.coefficients[k];
            if (gamma == 0.0) continue;
            const auto& g = generators[k];
            if (g.i == g.j) {
                pv[SymMatrix::packed_index(n, g.i, g.i)] +=
                    gamma * (1.0 + g.alpha) * (1.0 + g.alpha);
            } else {
                pv[SymMatrix::packed_index(n, g.i, g.i)] += gamma;
                pv[SymMatrix::packed_index(n, g.i, g.j)] += gamma * g.alpha;
                pv[SymMatrix::packed_index(n, g.j, g.j)] += gamma * g.alpha * g.alpha;
            }
        }
        SymMatrix diff(n);
        auto& dv = diff.packed_values();
        for (int p = 0; p < dim; ++p)
            dv[p] = pv[p] - m.packed()[p];
        res.residual = fro_norm(diff);
        if (res.residual > tol * scale)
            throw NumericalError("cone_membership: residual beyond tolerance",
                                 res.residual);
        return res;
    }

    res.member = false;
    // Farkas multipliers y satisfy y . G_k <= 0 for every generator and
    // y . m > 0 in packed coordinates; halving the off-diagonal part
    // turns the packed dot product into the matrix inner product, and
    // the sign flip puts the certificate into the dual cone.
    if (!sol.row_duals.empty()) {
        SymMatrix sep(n);
        int p = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++p)
                sep.set(i, j, i == j ? -sol.row_duals[p] : -sol.row_duals[p] / 2.0);

        bool valid = inner(sep, m) < 0.0;
        for (int k = 0; valid && k < ngen; ++k)
            valid = inner(sep, expand(generators[k], n)) >= -tol * std::max(1.0, fro_norm(sep));
        if (valid) res.separator = std::move(sep);
    }
    return res;
}

} // namespace conekit
