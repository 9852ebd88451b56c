#include "conekit/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "conekit/errors.hpp"

namespace conekit {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values)
        require(std::isfinite(v), what);
}

} // namespace

SymMatrix::SymMatrix(int n) : n_(n) {
    require(n >= 0, "SymMatrix: negative dimension");
    v_.assign(packed_size(n), 0.0);
}

SymMatrix::SymMatrix(int n, std::vector<double> packed) : n_(n), v_(std::move(packed)) {
    require(n >= 0, "SymMatrix: negative dimension");
    require(static_cast<int>(v_.size()) == packed_size(n),
            "SymMatrix: packed length != n(n+1)/2");
    require_finite(v_, "SymMatrix: non-finite entry");
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        m.set(i, i, 1.0);
    return m;
}

void SymMatrix::set(int i, int j, double value) {
    if (i > j) std::swap(i, j);
    require(i >= 0 && j < n_, "SymMatrix: index out of range");
    require(std::isfinite(value), "SymMatrix: non-finite entry");
    v_[packed_index(n_, i, j)] = value;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
    require(a.dim() == b.dim(), "inner: dimension mismatch");
    const int n = a.dim();
    auto pa = a.packed();
    auto pb = b.packed();
    double diag = 0.0, off = 0.0;
    int k = 0;
    for (int i = 0; i < n; ++i) {
        diag += pa[k] * pb[k];
        ++k;
        for (int j = i + 1; j < n; ++j, ++k)
            off += pa[k] * pb[k];
    }
    return diag + 2.0 * off;
}

double fro_norm(const SymMatrix& a) {
    return std::sqrt(inner(a, a));
}

SymMatrix rank1(std::span<const double> v) {
    const int n = static_cast<int>(v.size());
    require_finite(v, "rank1: non-finite entry");
    SymMatrix m(n);
    auto& packed = m.packed_values();
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++k)
            packed[k] = v[i] * v[j];
    return m;
}

namespace {

// One cyclic sweep of Jacobi rotations over the dense working copy.
// a is n x n row-major (full, symmetric); q accumulates the rotations.
void jacobi_sweep(std::vector<double>& a, std::vector<double>& q, int n) {
    for (int i = 0; i < n - 1; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double apq = a[i * n + j];
            if (std::abs(apq) <= 1e-300) continue;

            const double theta = (a[j * n + j] - a[i * n + i]) / (2.0 * apq);
            double t;
            if (std::abs(theta) > 1e150) {
                t = 0.5 / theta; // tan of a vanishing angle
            } else {
                t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
            }
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            const double tau = s / (1.0 + c);

            const double aii = a[i * n + i];
            const double ajj = a[j * n + j];
            a[i * n + i] = aii - t * apq;
            a[j * n + j] = ajj + t * apq;
            a[i * n + j] = 0.0;
            a[j * n + i] = 0.0;

            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double aki = a[k * n + i];
                const double akj = a[k * n + j];
                a[k * n + i] = aki - s * (akj + tau * aki);
                a[k * n + j] = akj + s * (aki - tau * akj);
                a[i * n + k] = a[k * n + i];
                a[j * n + k] = a[k * n + j];
            }
            for (int k = 0; k < n; ++k) {
                const double qki = q[k * n + i];
                const double qkj = q[k * n + j];
                q[k * n + i] = qki - s * (qkj + tau * qki);
                q[k * n + j] = qkj + s * (qki - tau * qkj);
            }
        }
    }
}

double offdiag_norm(const std::vector<double>& a, int n) {
    double sum = 0.0;
    for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n; ++j)
            sum += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * sum);
}

} // namespace

EigenDecomposition jacobi_eigen(const SymMatrix& m, double tol, int max_sweeps) {
    require(tol > 0.0, "jacobi_eigen: tol must be positive");
    require(max_sweeps > 0, "jacobi_eigen: max_sweeps must be positive");
    const int n = m.dim();

    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        q[i * n + i] = 1.0;
        for (int j = i; j < n; ++j) {
            const double v = m(i, j);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }

    const double target = tol * fro_norm(m);
    double off = offdiag_norm(a, n);
    int sweeps = 0;
    while (off > target) {
        if (sweeps >= max_sweeps)
            throw NumericalError("jacobi_eigen: no convergence after " +
                                     std::to_string(max_sweeps) +
                                     " sweeps, off-diagonal norm " +
                                     std::to_string(off),
                                 off);
        jacobi_sweep(a, q, n);
        ++sweeps;
        off = offdiag_norm(a, n);
    }

    // Ascending eigenvalue order; a stable sort keeps equal eigenvalues
    // in their original column order.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return a[x * n + x] < a[y * n + y];
    });

    EigenDecomposition d;
    d.n = n;
    d.eigenvalues.resize(n);
    d.eigenvectors.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        const int src = order[k];
        d.eigenvalues[k] = a[src * n + src];
        for (int r = 0; r < n; ++r)
            d.eigenvectors[static_cast<std::size_t>(k) * n + r] = q[r * n + src];
    }
    return d;
}

std::vector<std::pair<double, std::vector<double>>>
min_eigenpairs(const SymMatrix& a, int k, double tol) {
    require(k >= 0, "min_eigenpairs: negative count");
    const EigenDecomposition d = jacobi_eigen(a, tol);
    const int take = std::min(k, d.n);
    std::vector<std::pair<double, std::vector<double>>> out;
    out.reserve(take);
    for (int e = 0; e < take; ++e) {
        auto v = d.eigenvector(e);
        out.emplace_back(d.eigenvalues[e], std::vector<double>(v.begin(), v.end()));
    }
    return out;
}

bool is_psd(const SymMatrix& a, double tol) {
    require(tol >= 0.0, "is_psd: negative tolerance");
    if (a.dim() == 0) return true;
    const EigenDecomposition d = jacobi_eigen(a);
    return d.eigenvalues.front() >= -tol;
}

} // namespace conekit
