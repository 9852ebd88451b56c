#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "conekit/symmat.hpp"

namespace conekit {

// Symbolic rank-one generator (e_i + alpha e_j)(e_i + alpha e_j)^T with
// 0 <= i <= j.  For i < j the expansion has entries (i,i) = 1,
// (i,j) = alpha, (j,j) = alpha^2; for i = j it collapses to (1+alpha)^2
// at (i,i).
struct BasisMatrix {
    int i = 0;
    int j = 0;
    double alpha = 0.0;
};

SymMatrix expand(const BasisMatrix& b, int n);

// Finite set of distinct, finite scaling parameters, kept sorted
// ascending so every consumer sees one canonical order.
class ParameterSet {
public:
    ParameterSet(std::initializer_list<double> values);
    explicit ParameterSet(std::vector<double> values);

    std::span<const double> alphas() const { return values_; }
    int size() const { return static_cast<int>(values_.size()); }

private:
    std::vector<double> values_;
};

// All (i, j, +1), i <= j: the plus-type rank-one generators.
std::vector<BasisMatrix> type1_basis(int n);

// Diagonal (i, i, +1) plus off-diagonal (i, j, -1): the minus-type set.
std::vector<BasisMatrix> type2_basis(int n);

// All (i, j, alpha), i <= j, at a single parameter value.
std::vector<BasisMatrix> expanded_basis(int n, double alpha);

// Rank of the expanded_basis(n, alpha) matrices as vectors, by Gaussian
// elimination with pivot tolerance 1e-9.  Equals n(n+1)/2 exactly when
// alpha is neither 0 nor -1.
int basis_rank(int n, double alpha);

// Union of expanded_basis(n, alpha) over alpha in params, with the
// diagonal generators (all positive multiples of e_i e_i^T) collapsed to
// a single (i, i, 1) per i.  Ordered by (i, j, alpha); the size is
// n + |params| * n(n-1)/2.
std::vector<BasisMatrix> sdb_generators(int n, const ParameterSet& params);

// Cosines of the angles between an off-diagonal generator at alpha and
// the four plus/minus generators sharing its index pair:
//   cos t1 = 1/(1+a^2)            (against (i,i,+1))
//   cos t2 = a^2/(1+a^2)          (against (j,j,+1))
//   cos t3 = (1+a)^2/(2(1+a^2))   (against (i,j,+1))
//   cos t4 = (1-a)^2/(2(1+a^2))   (against (i,j,-1))
// cos t1 + cos t2 = 1 and cos t3 + cos t4 = 1 hold identically.
struct Angles {
    double cos_theta1 = 0.0;
    double cos_theta2 = 0.0;
    double cos_theta3 = 0.0;
    double cos_theta4 = 0.0;
};

Angles angles(double alpha);

// The four parameters at which two of the angles above coincide, i.e.
// the roots of (1+a)^2 = 2, (1-a)^2 = 2 and 2a^2 = (1 +- a)^2:
//   -1-sqrt(2) = -2.4142135623730951
//    1-sqrt(2) = -0.41421356237309515
//   -1+sqrt(2) =  0.41421356237309515
//    1+sqrt(2) =  2.4142135623730951
ParameterSet equal_angle_parameters();

// equal_angle_parameters() together with +1 and -1: the parameter set
// the stable-set relaxation uses by default.
ParameterSet standard_parameters();

// Coefficients gamma with sum_k gamma_k expand(basis[k]) = m.  Requires
// basis to be a genuine basis (n(n+1)/2 elements of full rank); solved
// by Gaussian elimination with partial pivoting and verified to residual
// 1e-8 * max(1, |m|_F).
std::vector<double> decompose_in_basis(const SymMatrix& m,
                                       const std::vector<BasisMatrix>& basis);

} // namespace conekit
