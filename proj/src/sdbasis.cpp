#include "conekit/sdbasis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conekit/errors.hpp"

namespace conekit {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_index(const BasisMatrix& b, int n) {
    require(0 <= b.i && b.i <= b.j && b.j < n, "BasisMatrix: need 0 <= i <= j < n");
    require(std::isfinite(b.alpha), "BasisMatrix: non-finite alpha");
}

} // namespace

SymMatrix expand(const BasisMatrix& b, int n) {
    check_index(b, n);
    SymMatrix m(n);
    if (b.i == b.j) {
        m.set(b.i, b.i, (1.0 + b.alpha) * (1.0 + b.alpha));
    } else {
        m.set(b.i, b.i, 1.0);
        m.set(b.i, b.j, b.alpha);
        m.set(b.j, b.j, b.alpha * b.alpha);
    }
    return m;
}

ParameterSet::ParameterSet(std::initializer_list<double> values)
    : ParameterSet(std::vector<double>(values)) {}

ParameterSet::ParameterSet(std::vector<double> values) : values_(std::move(values)) {
    require(!values_.empty(), "ParameterSet: empty");
    for (double v : values_)
        require(std::isfinite(v), "ParameterSet: non-finite parameter");
    std::sort(values_.begin(), values_.end());
    require(std::adjacent_find(values_.begin(), values_.end()) == values_.end(),
            "ParameterSet: duplicate parameter");
}

std::vector<BasisMatrix> type1_basis(int n) {
    return expanded_basis(n, 1.0);
}

std::vector<BasisMatrix> type2_basis(int n) {
    require(n >= 1, "type2_basis: need n >= 1");
    std::vector<BasisMatrix> out;
    out.reserve(SymMatrix::packed_size(n));
    for (int i = 0; i < n; ++i) {
        out.push_back({i, i, 1.0});
        for (int j = i + 1; j < n; ++j)
            out.push_back({i, j, -1.0});
    }
    return out;
}

std::vector<BasisMatrix> expanded_basis(int n, double alpha) {
    require(n >= 1, "expanded_basis: need n >= 1");
    require(std::isfinite(alpha), "expanded_basis: non-finite alpha");
    std::vector<BasisMatrix> out;
    out.reserve(SymMatrix::packed_size(n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            out.push_back({i, j, alpha});
    return out;
}

namespace {

// Row echelon rank with partial pivoting; pivots below tol count as zero.
int dense_rank(std::vector<std::vector<double>>& rows, double tol) {
    if (rows.empty()) return 0;
    const int ncol = static_cast<int>(rows[0].size());
    const int nrow = static_cast<int>(rows.size());
    int rank = 0;
    for (int col = 0; col < ncol && rank < nrow; ++col) {
        int best = -1;
        double best_abs = tol;
        for (int r = rank; r < nrow; ++r) {
            const double a = std::abs(rows[r][col]);
            if (a > best_abs) {
                best_abs = a;
                best = r;
            }
        }
        if (best < 0) continue;
        std::swap(rows[rank], rows[best]);
        const double piv = rows[rank][col];
        for (int r = rank + 1; r < nrow; ++r) {
            const double f = rows[r][col] / piv;
            if (f == 0.0) continue;
            rows[r][col] = 0.0;
            for (int c = col + 1; c < ncol; ++c)
                rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<double>> packed_rows(const std::vector<BasisMatrix>& gens, int n) {
    std::vector<std::vector<double>> rows;
    rows.reserve(gens.size());
    for (const auto& g : gens) {
        const SymMatrix m = expand(g, n);
        rows.emplace_back(m.packed().begin(), m.packed().end());
    }
    return rows;
}

} // namespace

int basis_rank(int n, double alpha) {
    auto rows = packed_rows(expanded_basis(n, alpha), n);
    return dense_rank(rows, 1e-9);
}

std::vector<BasisMatrix> sdb_generators(int n, const ParameterSet& params) {
    require(n >= 1, "sdb_generators: need n >= 1");
    std::vector<BasisMatrix> out;
    out.reserve(n + params.size() * n * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        // Every diagonal generator is a positive multiple of e_i e_i^T,
        // so one representative at alpha = 1 stands for all of them.
        out.push_back({i, i, 1.0});
        for (int j = i + 1; j < n; ++j)
            for (double alpha : params.alphas())
                out.push_back({i, j, alpha});
    }
    return out;
}

Angles angles(double alpha) {
    require(std::isfinite(alpha), "angles: non-finite alpha");
    const double denom = 1.0 + alpha * alpha;
    Angles a;
    a.cos_theta1 = 1.0 / denom;
    a.cos_theta2 = alpha * alpha / denom;
    a.cos_theta3 = (1.0 + alpha) * (1.0 + alpha) / (2.0 * denom);
    a.cos_theta4 = (1.0 - alpha) * (1.0 - alpha) / (2.0 * denom);
    return a;
}

ParameterSet equal_angle_parameters() {
    const double r = std::sqrt(2.0);
    return ParameterSet{-1.0 - r, 1.0 - r, -1.0 + r, 1.0 + r};
}

ParameterSet standard_parameters() {
    const double r = std::sqrt(2.0);
    return ParameterSet{-1.0 - r, -1.0, 1.0 - r, -1.0 + r, 1.0, 1.0 + r};
}

std::vector<double> decompose_in_basis(const SymMatrix& m,
                                       const std::vector<BasisMatrix>& basis) {
    const int n = m.dim();
    const int dim = SymMatrix::packed_size(n);
    require(static_cast<int>(basis.size()) == dim,
            "decompose_in_basis: generator count != n(n+1)/2");

    // Columns are the packed expansions; solve B gamma = packed(m) by
    // Gauss elimination with partial pivoting on an augmented matrix.
    auto cols = packed_rows(basis, n);
    std::vector<std::vector<double>> aug(dim, std::vector<double>(dim + 1, 0.0));
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c)
            aug[r][c] = cols[c][r];
        aug[r][dim] = m.packed()[r];
    }

    for (int k = 0; k < dim; ++k) {
        int best = k;
        double best_abs = std::abs(aug[k][k]);
        for (int r = k + 1; r < dim; ++r) {
            if (std::abs(aug[r][k]) > best_abs) {
                best_abs = std::abs(aug[r][k]);
                best = r;
            }
        }
        if (best_abs <= 1e-9)
            throw std::invalid_argument("decompose_in_basis: rank-deficient generator set");
        std::swap(aug[k], aug[best]);
        for (int r = k + 1; r < dim; ++r) {
            const double f = aug[r][k] / aug[k][k];
            if (f == 0.0) continue;
            for (int c = k; c <= dim; ++c)
                aug[r][c] -= f * aug[k][c];
        }
    }

    std::vector<double> gamma(dim, 0.0);
    for (int k = dim - 1; k >= 0; --k) {
        double s = aug[k][dim];
        for (int c = k + 1; c < dim; ++c)
            s -= aug[k][c] * gamma[c];
        gamma[k] = s / aug[k][k];
    }

    // Verify the reconstruction before handing the coefficients back.
    SymMatrix diff(n);
    auto& dv = diff.packed_values();
    for (int r = 0; r < dim; ++r)
        dv[r] = -m.packed()[r];
    for (int c = 0; c < dim; ++c) {
        if (gamma[c] == 0.0) continue;
        for (int r = 0; r < dim; ++r)
            dv[r] += gamma[c] * cols[c][r];
    }
    const double residual = fro_norm(diff);
    if (residual > 1e-8 * std::max(1.0, fro_norm(m)))
        throw NumericalError("decompose_in_basis: inconsistent system, residual " +
                                 std::to_string(residual),
                             residual);
    return gamma;
}

} // namespace conekit
