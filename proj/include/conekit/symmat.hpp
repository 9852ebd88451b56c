#pragma once

#include <span>
#include <utility>
#include <vector>

namespace conekit {

// Dense real symmetric matrix, stored as the packed upper triangle in
// row-major order: (0,0), (0,1), ..., (0,n-1), (1,1), ..., (n-1,n-1).
// Entries must stay finite; accessors take unordered (i, j).
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n);
    SymMatrix(int n, std::vector<double> packed);

    static SymMatrix identity(int n);
    static int packed_size(int n) { return n * (n + 1) / 2; }

    // Index of (i, j), i <= j, within the packed upper triangle.
    static int packed_index(int n, int i, int j) {
        return i * n - i * (i - 1) / 2 + (j - i);
    }

    int dim() const { return n_; }

    double operator()(int i, int j) const {
        if (i > j) std::swap(i, j);
        return v_[packed_index(n_, i, j)];
    }

    void set(int i, int j, double value);

    std::span<const double> packed() const { return v_; }
    std::vector<double>& packed_values() { return v_; }

private:
    int n_ = 0;
    std::vector<double> v_;
};

// Eigenvalues in ascending order; eigenvectors[k*n .. k*n+n) is the unit
// eigenvector paired with eigenvalues[k] (column-major Q).  Satisfies
// |Q^T Q - I|_max <= 1e-10 and |Q diag(w) Q^T - A|_max <= 1e-8 * max(1, |A|_F).
struct EigenDecomposition {
    int n = 0;
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;

    std::span<const double> eigenvector(int k) const {
        return {eigenvectors.data() + static_cast<std::size_t>(k) * n,
                static_cast<std::size_t>(n)};
    }
};

// Matrix inner product <A, B> = sum_ij A_ij B_ij; off-diagonal packed
// entries count twice.
double inner(const SymMatrix& a, const SymMatrix& b);

double fro_norm(const SymMatrix& a);

// v v^T for a vector of length n.
SymMatrix rank1(std::span<const double> v);

// Cyclic-by-row Jacobi rotations; a sweep visits every (i, j), i < j, and
// skips pairs with |A_ij| <= 1e-300.  Stops once the off-diagonal
// Frobenius norm falls to tol * |A|_F; throws NumericalError with the
// remaining off-diagonal norm after max_sweeps sweeps.  Eigenvalues are
// sorted ascending, equal values keeping their pre-sort order.
EigenDecomposition jacobi_eigen(const SymMatrix& a, double tol = 1e-10,
                                int max_sweeps = 100);

// The k smallest eigenpairs of a, ascending.
std::vector<std::pair<double, std::vector<double>>>
min_eigenpairs(const SymMatrix& a, int k, double tol = 1e-10);

// True iff the smallest eigenvalue is >= -tol.
bool is_psd(const SymMatrix& a, double tol);

} // namespace conekit
