#include "conekit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

#include "conekit/errors.hpp"
#include "conekit/log.hpp"

namespace conekit {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Sort by column and merge duplicates; drop exact zeros.
SparseRow canonical_row(const SparseRow& row) {
    SparseRow out(row);
    std::sort(out.begin(), out.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
    SparseRow merged;
    merged.reserve(out.size());
    for (const auto& e : out) {
        if (!merged.empty() && merged.back().col == e.col)
            merged.back().coeff += e.coeff;
        else
            merged.push_back(e);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const SparseEntry& e) { return e.coeff == 0.0; }),
                 merged.end());
    return merged;
}

void validate_row(const SparseRow& coeffs, double rhs, int num_vars, const char* what) {
    require(std::isfinite(rhs), what);
    for (const auto& e : coeffs) {
        require(e.col >= 0 && e.col < num_vars, "LinearProgram: column index out of range");
        require(std::isfinite(e.coeff), what);
    }
}

} // namespace

void LinearProgram::add_eq(SparseRow coeffs, double rhs_value) {
    eq_rows.push_back({std::move(coeffs), rhs_value});
}

void LinearProgram::add_ge(SparseRow coeffs, double rhs_value) {
    ge_rows.push_back({std::move(coeffs), rhs_value});
}

void LinearProgram::validate() const {
    require(num_vars >= 0, "LinearProgram: negative num_vars");
    validate_row(objective, 0.0, num_vars, "LinearProgram: non-finite objective");
    for (const auto& r : eq_rows)
        validate_row(r.coeffs, r.rhs, num_vars, "LinearProgram: non-finite eq row");
    for (const auto& r : ge_rows)
        validate_row(r.coeffs, r.rhs, num_vars, "LinearProgram: non-finite ge row");
}

namespace {

// ------------------------------------------------------------------
// Revised two-phase primal simplex.
//
// Standard form: structural columns, one surplus column per ge row
// (a.x - s = rhs), artificial columns where the initial basis needs
// them.  Rows are sign-flipped so every right-hand side is >= 0.  The
// basis inverse is kept as a product of eta columns (rebuilt from
// scratch every refactor_every pivots); unit basis columns contribute
// single-entry "diagonal" etas applied as one vector pass, so a mostly
// slack basis costs almost nothing to factorize.
// ------------------------------------------------------------------

constexpr long kIterationLimit = 1'000'000;
constexpr int kRefactorEvery = 50;

struct Eta {
    int pivot_row;
    int begin; // [begin, end) into the pools; entry `begin` is the pivot
    int end;
};

class Simplex {
public:
    Simplex(const LinearProgram& lp, double pivot_tol);

    // Phase 1: returns the artificial objective at its minimum.
    double run_phase1();

    // Phase 2 after a feasible phase 1; fills status/x/objective/duals.
    void run_phase2(LpSolution& out);

    void farkas_duals(LpSolution& out);
    long iterations() const { return iterations_; }

private:
    static constexpr int kStructural = 0, kSurplus = 1, kArtificial = 2;

    int kind(int var) const {
        if (var < n_struct_) return kStructural;
        if (var < n_struct_ + n_surplus_) return kSurplus;
        return kArtificial;
    }

    double phase_cost(int var) const {
        if (phase_ == 1) return kind(var) == kArtificial ? 1.0 : 0.0;
        return var < n_struct_ ? cost_[var] : 0.0;
    }

    // --- factorization ---------------------------------------------
    void refactorize();
    void append_eta_from(const std::vector<double>& w, const std::vector<int>& nz,
                         int pivot_row);
    void ftran_dense(std::vector<double>& v) const;
    void ftran_sparse(std::vector<double>& v, std::vector<int>& nz) const;
    void btran_dense(std::vector<double>& v) const;
    void recompute_x();

    // --- iteration pieces ------------------------------------------
    void compute_duals(std::vector<double>& y) const;
    int price(const std::vector<double>& y, bool bland) const;
    void scatter_column(int var, std::vector<double>& v, std::vector<int>& nz) const;
    bool pivot(int entering, bool bland, bool* unbounded);
    void drive_out_artificials();
    double artificial_sum() const;

    void check_pivot_budget() {
        if (++iterations_ > kIterationLimit)
            throw NumericalError("simplex: iteration limit exceeded");
        if (++pivots_since_refactor_ >= kRefactorEvery) {
            refactorize();
            recompute_x();
        }
    }

    // problem data in working form
    int m_ = 0;            // rows (eq first, then ge)
    int n_struct_ = 0;
    int n_surplus_ = 0;
    int n_art_ = 0;
    int n_total_ = 0;
    double ptol_;
    std::vector<double> cost_;     // internal (minimize) structural costs
    std::vector<double> b_;        // flipped rhs, >= 0
    std::vector<double> flip_;     // +1 / -1 per row
    std::vector<int> art_row_;     // row of each artificial column
    // structural columns, CSC over flipped rows
    std::vector<int> col_ptr_, col_row_;
    std::vector<double> col_val_;
    std::vector<int> surplus_row_; // row of each surplus column
    std::vector<double> surplus_val_;

    // basis state
    std::vector<int> basis_;       // row -> var
    std::vector<char> in_basis_;   // var -> 0/1
    std::vector<double> x_;        // basic values by row

    // factorization: diagonal pass + eta columns
    std::vector<int> diag_rows_;
    std::vector<double> diag_mult_;
    std::vector<double> row_diag_mult_; // dense mirror, 1.0 off the diagonal set
    std::vector<Eta> etas_;
    std::vector<int> eta_row_pool_;
    std::vector<double> eta_val_pool_;
    std::vector<std::vector<int>> row_etas_; // pivot row -> eta indices (ascending)

    int phase_ = 1;
    long iterations_ = 0;
    int pivots_since_refactor_ = 0;
    long bland_after_ = 0;

    // scratch
    mutable std::vector<double> work_;
    mutable std::vector<int> work_nz_;
    mutable std::vector<char> in_support_;
};

Simplex::Simplex(const LinearProgram& lp, double pivot_tol) : ptol_(pivot_tol) {
    const int m_eq = static_cast<int>(lp.eq_rows.size());
    const int m_ge = static_cast<int>(lp.ge_rows.size());
    m_ = m_eq + m_ge;
    n_struct_ = lp.num_vars;
    n_surplus_ = m_ge;

    cost_.assign(n_struct_, 0.0);
    for (const auto& e : canonical_row(lp.objective))
        cost_[e.col] = lp.sense == Sense::Maximize ? -e.coeff : e.coeff;

    b_.resize(m_);
    flip_.resize(m_);
    std::vector<SparseRow> rows(m_);
    for (int r = 0; r < m_; ++r) {
        const LpRow& src = r < m_eq ? lp.eq_rows[r] : lp.ge_rows[r - m_eq];
        flip_[r] = src.rhs < 0.0 ? -1.0 : 1.0;
        b_[r] = flip_[r] * src.rhs;
        rows[r] = canonical_row(src.coeffs);
    }

    // CSC for structural columns.
    std::vector<int> count(n_struct_ + 1, 0);
    for (const auto& row : rows)
        for (const auto& e : row)
            ++count[e.col + 1];
    col_ptr_.assign(n_struct_ + 1, 0);
    for (int j = 0; j < n_struct_; ++j)
        col_ptr_[j + 1] = col_ptr_[j] + count[j + 1];
    col_row_.resize(col_ptr_[n_struct_]);
    col_val_.resize(col_ptr_[n_struct_]);
    std::vector<int> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    for (int r = 0; r < m_; ++r)
        for (const auto& e : rows[r]) {
            const int k = fill[e.col]++;
            col_row_[k] = r;
            col_val_[k] = flip_[r] * e.coeff;
        }

    surplus_row_.resize(n_surplus_);
    surplus_val_.resize(n_surplus_);
    for (int g = 0; g < m_ge; ++g) {
        surplus_row_[g] = m_eq + g;
        surplus_val_[g] = -flip_[m_eq + g];
    }

    // Initial basis: surplus where its sign (or a zero rhs) allows,
    // otherwise an artificial.
    basis_.assign(m_, -1);
    x_.assign(m_, 0.0);
    std::vector<int> need_art;
    for (int r = 0; r < m_; ++r) {
        if (r >= m_eq) {
            const double sv = surplus_val_[r - m_eq];
            if (sv > 0.0 || b_[r] == 0.0) {
                basis_[r] = n_struct_ + (r - m_eq);
                x_[r] = b_[r] / sv; // 0 when b is 0
                continue;
            }
        }
        need_art.push_back(r);
    }
    n_art_ = static_cast<int>(need_art.size());
    art_row_ = std::move(need_art);
    n_total_ = n_struct_ + n_surplus_ + n_art_;
    for (int a = 0; a < n_art_; ++a) {
        basis_[art_row_[a]] = n_struct_ + n_surplus_ + a;
        x_[art_row_[a]] = b_[art_row_[a]];
    }

    in_basis_.assign(n_total_, 0);
    for (int r = 0; r < m_; ++r)
        in_basis_[basis_[r]] = 1;

    row_etas_.resize(m_);
    work_.assign(m_, 0.0);
    work_nz_.reserve(m_);
    in_support_.assign(m_, 0);
    bland_after_ = 5L * (m_ + n_struct_);

    refactorize();
    recompute_x();
}

void Simplex::scatter_column(int var, std::vector<double>& v, std::vector<int>& nz) const {
    if (kind(var) == kStructural) {
        for (int k = col_ptr_[var]; k < col_ptr_[var + 1]; ++k) {
            v[col_row_[k]] = col_val_[k];
            nz.push_back(col_row_[k]);
        }
    } else if (kind(var) == kSurplus) {
        const int g = var - n_struct_;
        v[surplus_row_[g]] = surplus_val_[g];
        nz.push_back(surplus_row_[g]);
    } else {
        const int r = art_row_[var - n_struct_ - n_surplus_];
        v[r] = 1.0;
        nz.push_back(r);
    }
}

void Simplex::refactorize() {
    pivots_since_refactor_ = 0;
    diag_rows_.clear();
    diag_mult_.clear();
    etas_.clear();
    eta_row_pool_.clear();
    eta_val_pool_.clear();
    for (auto& v : row_etas_)
        v.clear();
    row_diag_mult_.assign(m_, 1.0);

    std::vector<char> row_done(m_, 0);
    std::vector<int> pending;

    // Unit columns first: each claims its own row (basis_ follows,
    // since a pivot may have parked it elsewhere) and never fills.
    const std::vector<int> vars(basis_);
    for (const int var : vars) {
        const int k = kind(var);
        if (k == kSurplus) {
            const int g = var - n_struct_;
            diag_rows_.push_back(surplus_row_[g]);
            diag_mult_.push_back(1.0 / surplus_val_[g]);
            row_diag_mult_[surplus_row_[g]] = 1.0 / surplus_val_[g];
            row_done[surplus_row_[g]] = 1;
            basis_[surplus_row_[g]] = var;
        } else if (k == kArtificial) {
            const int row = art_row_[var - n_struct_ - n_surplus_];
            diag_rows_.push_back(row);
            diag_mult_.push_back(1.0);
            row_done[row] = 1;
            basis_[row] = var;
        } else {
            pending.push_back(var);
        }
    }

    // Structural basis columns, sparsest first.
    std::sort(pending.begin(), pending.end(), [&](int a, int b) {
        const int na = col_ptr_[a + 1] - col_ptr_[a];
        const int nb = col_ptr_[b + 1] - col_ptr_[b];
        return na != nb ? na < nb : a < b;
    });

    std::vector<double>& v = work_;
    std::vector<int>& nz = work_nz_;
    for (int var : pending) {
        nz.clear();
        scatter_column(var, v, nz);
        ftran_sparse(v, nz);
        int pivot = -1;
        double best = ptol_;
        for (int r : nz) {
            if (row_done[r]) continue;
            const double a = std::abs(v[r]);
            if (a > best || (pivot >= 0 && a == best && r < pivot)) {
                best = a;
                pivot = r;
            }
        }
        if (pivot < 0) {
            for (int r : nz)
                v[r] = 0.0;
            throw NumericalError("simplex: singular basis during refactorization");
        }
        append_eta_from(v, nz, pivot);
        row_done[pivot] = 1;
        basis_[pivot] = var;
        for (int r : nz)
            v[r] = 0.0;
    }
}

void Simplex::append_eta_from(const std::vector<double>& w, const std::vector<int>& nz,
                              int pivot_row) {
    const double piv = w[pivot_row];
    const int begin = static_cast<int>(eta_row_pool_.size());
    eta_row_pool_.push_back(pivot_row);
    eta_val_pool_.push_back(1.0 / piv);
    for (int r : nz) {
        if (r == pivot_row) continue;
        const double val = w[r];
        if (val == 0.0) continue;
        eta_row_pool_.push_back(r);
        eta_val_pool_.push_back(-val / piv);
    }
    const int end = static_cast<int>(eta_row_pool_.size());
    row_etas_[pivot_row].push_back(static_cast<int>(etas_.size()));
    etas_.push_back({pivot_row, begin, end});
}

void Simplex::ftran_dense(std::vector<double>& v) const {
    for (std::size_t d = 0; d < diag_rows_.size(); ++d)
        v[diag_rows_[d]] *= diag_mult_[d];
    for (const Eta& e : etas_) {
        const double piv = v[e.pivot_row];
        if (piv == 0.0) continue;
        v[e.pivot_row] = piv * eta_val_pool_[e.begin];
        for (int k = e.begin + 1; k < e.end; ++k)
            v[eta_row_pool_[k]] += piv * eta_val_pool_[k];
    }
}

// Sparse FTRAN: etas are indexed by pivot row, and a min-heap over eta
// indices visits exactly the ones whose pivot row is (or becomes)
// nonzero, in creation order.  nz accumulates the support, duplicate
// free (an entry may still hold an exact zero after cancellation).
void Simplex::ftran_sparse(std::vector<double>& v, std::vector<int>& nz) const {
    // The diagonal etas all precede the column etas, so they act on the
    // original scatter only.
    for (int r : nz) {
        v[r] *= row_diag_mult_[r];
        in_support_[r] = 1;
    }

    std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
    auto push_candidates = [&](int row, int after) {
        const auto& list = row_etas_[row];
        auto it = std::upper_bound(list.begin(), list.end(), after);
        if (it != list.end()) heap.push(*it);
    };
    for (int r : nz)
        push_candidates(r, -1);

    int last = -1;
    while (!heap.empty()) {
        const int e_idx = heap.top();
        heap.pop();
        if (e_idx == last) continue; // duplicate
        last = e_idx;
        const Eta& e = etas_[e_idx];
        const double piv = v[e.pivot_row];
        push_candidates(e.pivot_row, e_idx);
        if (piv == 0.0) continue;
        v[e.pivot_row] = piv * eta_val_pool_[e.begin];
        for (int k = e.begin + 1; k < e.end; ++k) {
            const int r = eta_row_pool_[k];
            if (!in_support_[r]) {
                in_support_[r] = 1;
                nz.push_back(r);
                push_candidates(r, e_idx);
            }
            v[r] += piv * eta_val_pool_[k];
        }
    }
    for (int r : nz)
        in_support_[r] = 0;
}

void Simplex::btran_dense(std::vector<double>& v) const {
    for (std::size_t i = etas_.size(); i-- > 0;) {
        const Eta& e = etas_[i];
        double s = 0.0;
        for (int k = e.begin; k < e.end; ++k)
            s += eta_val_pool_[k] * v[eta_row_pool_[k]];
        v[e.pivot_row] = s;
    }
    for (std::size_t d = 0; d < diag_rows_.size(); ++d)
        v[diag_rows_[d]] *= diag_mult_[d];
}

void Simplex::recompute_x() {
    std::vector<double> v(b_);
    ftran_dense(v);
    x_ = std::move(v);
}

void Simplex::compute_duals(std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r)
        y[r] = phase_cost(basis_[r]);
    btran_dense(y);
}

// Entering variable: most negative reduced cost (ties to the lowest
// index), or the lowest negative index under Bland.  Artificials never
// enter.  Returns -1 when none qualifies.
int Simplex::price(const std::vector<double>& y, bool bland) const {
    int best = -1;
    double best_d = -ptol_;
    for (int j = 0; j < n_struct_; ++j) {
        if (in_basis_[j]) continue;
        double s = 0.0;
        for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
            s += col_val_[k] * y[col_row_[k]];
        const double d = phase_cost(j) - s;
        if (d < best_d) {
            if (bland) return j;
            best_d = d;
            best = j;
        }
    }
    for (int g = 0; g < n_surplus_; ++g) {
        const int j = n_struct_ + g;
        if (in_basis_[j]) continue;
        const double d = -surplus_val_[g] * y[surplus_row_[g]];
        if (d < best_d) {
            if (bland) return j;
            best_d = d;
            best = j;
        }
    }
    return best;
}

// One pivot with entering variable `entering`.  Returns false when the
// column is unblocked (unbounded direction).
bool Simplex::pivot(int entering, bool bland, bool* unbounded) {
    std::vector<double>& w = work_;
    std::vector<int>& nz = work_nz_;
    nz.clear();
    scatter_column(entering, w, nz);
    ftran_sparse(w, nz);

    int leave_row = -1;
    double theta = std::numeric_limits<double>::infinity();
    double leave_abs = 0.0;
    for (int r : nz) {
        const double wr = w[r];
        if (wr <= ptol_) continue;
        const double xr = x_[r] > 0.0 ? x_[r] : 0.0;
        const double ratio = xr / wr;
        if (ratio < theta) {
            theta = ratio;
            leave_row = r;
            leave_abs = wr;
        } else if (ratio == theta && leave_row >= 0) {
            if (bland ? basis_[r] < basis_[leave_row] : wr > leave_abs) {
                leave_row = r;
                leave_abs = wr;
            }
        }
    }

    if (leave_row < 0) {
        for (int r : nz)
            w[r] = 0.0;
        *unbounded = true;
        return false;
    }

    for (int r : nz)
        x_[r] -= theta * w[r];
    x_[leave_row] = theta;
    in_basis_[basis_[leave_row]] = 0;
    basis_[leave_row] = entering;
    in_basis_[entering] = 1;
    append_eta_from(w, nz, leave_row);
    for (int r : nz)
        w[r] = 0.0;
    check_pivot_budget();
    return true;
}

double Simplex::artificial_sum() const {
    double s = 0.0;
    for (int r = 0; r < m_; ++r)
        if (kind(basis_[r]) == kArtificial)
            s += x_[r] > 0.0 ? x_[r] : 0.0;
    return s;
}

double Simplex::run_phase1() {
    phase_ = 1;
    if (n_art_ == 0) return 0.0;
    std::vector<double> y;
    bool unbounded = false;
    while (artificial_sum() > 0.0) {
        const bool bland = iterations_ >= bland_after_;
        compute_duals(y);
        const int entering = price(y, bland);
        if (entering < 0) break;
        if (!pivot(entering, bland, &unbounded))
            throw NumericalError("simplex: unblocked column in phase 1");
    }
    return artificial_sum();
}

// Between phases: pivot basic artificials out wherever their row has a
// usable entry; rows without one are redundant and stay inert because
// every future FTRAN result is zero there.
void Simplex::drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
        if (kind(basis_[r]) != kArtificial) continue;
        std::vector<double> beta(m_, 0.0);
        beta[r] = 1.0;
        btran_dense(beta);
        int entering = -1;
        for (int j = 0; j < n_struct_ + n_surplus_ && entering < 0; ++j) {
            if (in_basis_[j]) continue;
            double s = 0.0;
            if (j < n_struct_) {
                for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
                    s += col_val_[k] * beta[col_row_[k]];
            } else {
                s = surplus_val_[j - n_struct_] * beta[surplus_row_[j - n_struct_]];
            }
            if (std::abs(s) > ptol_) entering = j;
        }
        if (entering < 0) continue; // redundant row

        std::vector<double>& w = work_;
        std::vector<int>& nz = work_nz_;
        nz.clear();
        scatter_column(entering, w, nz);
        ftran_sparse(w, nz);
        bool pivoted = false;
        if (std::abs(w[r]) > ptol_) {
            const double theta = x_[r] / w[r];
            for (int q : nz)
                x_[q] -= theta * w[q];
            x_[r] = theta;
            in_basis_[basis_[r]] = 0;
            basis_[r] = entering;
            in_basis_[entering] = 1;
            append_eta_from(w, nz, r);
            pivoted = true;
        }
        // refactorize() scavenges the workspace, so clear it first
        for (int q : nz)
            w[q] = 0.0;
        if (pivoted) check_pivot_budget();
    }
}

void Simplex::run_phase2(LpSolution& out) {
    if (log_enabled(LogLevel::Debug)) {
        int basic_art = 0;
        for (int r = 0; r < m_; ++r)
            if (kind(basis_[r]) == kArtificial) ++basic_art;
        log_msg(LogLevel::Debug,
                "simplex: phase 1 done, %ld pivots, art sum %.3e, %d basic artificials",
                iterations_, artificial_sum(), basic_art);
    }
    drive_out_artificials();
    if (log_enabled(LogLevel::Debug)) {
        for (int r = 0; r < m_; ++r)
            if (kind(basis_[r]) == kArtificial)
                log_msg(LogLevel::Debug,
                        "simplex: artificial stays basic in row %d at %.3e", r, x_[r]);
    }
    phase_ = 2;
    std::vector<double> y;
    for (;;) {
        const bool bland = iterations_ >= bland_after_;
        compute_duals(y);
        const int entering = price(y, bland);
        if (entering < 0) break; // optimal
        bool unbounded = false;
        if (!pivot(entering, bland, &unbounded)) {
            out.status = LpStatus::Unbounded;
            out.iterations = iterations_;
            return;
        }
    }

    refactorize();
    recompute_x();
    if (log_enabled(LogLevel::Debug)) {
        std::vector<char> seen(n_total_, 0);
        for (int r = 0; r < m_; ++r) {
            if (seen[basis_[r]])
                log_msg(LogLevel::Debug, "simplex: BUG duplicate basic var %d", basis_[r]);
            seen[basis_[r]] = 1;
        }
        std::vector<double> res(b_);
        std::vector<int> nz;
        for (int r = 0; r < m_; ++r) {
            nz.clear();
            scatter_column(basis_[r], work_, nz);
            for (int q : nz) {
                res[q] -= work_[q] * x_[r];
                work_[q] = 0.0;
            }
        }
        double worst = 0.0;
        for (double v : res) worst = std::max(worst, std::abs(v));
        log_msg(LogLevel::Debug, "simplex: internal residual %.3e", worst);
    }
    out.status = LpStatus::Optimal;
    out.iterations = iterations_;
    out.x.assign(n_struct_, 0.0);
    for (int r = 0; r < m_; ++r)
        if (basis_[r] < n_struct_)
            out.x[basis_[r]] = x_[r];

    compute_duals(y);
    out.row_duals.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r)
        out.row_duals[r] = flip_[r] * y[r];
}

void Simplex::farkas_duals(LpSolution& out) {
    std::vector<double> y;
    phase_ = 1;
    compute_duals(y);
    out.row_duals.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r)
        out.row_duals[r] = flip_[r] * y[r];
}

// Solution clean-up and verification against the original data.
void verify_solution(const LinearProgram& lp, LpSolution& sol) {
    for (double v : sol.x)
        if (v < -1e-9)
            throw NumericalError("simplex: negative variable beyond tolerance", -v);

    auto row_value = [&](const LpRow& row) {
        double s = 0.0;
        for (const auto& e : row.coeffs)
            s += e.coeff * sol.x[e.col];
        return s;
    };
    for (const auto& row : lp.eq_rows) {
        const double resid = std::abs(row_value(row) - row.rhs);
        if (resid > 1e-7)
            throw NumericalError("simplex: equality residual beyond tolerance", resid);
    }
    for (const auto& row : lp.ge_rows) {
        const double resid = row.rhs - row_value(row);
        if (resid > 1e-7)
            throw NumericalError("simplex: inequality violated beyond tolerance", resid);
    }

    double obj = 0.0;
    for (const auto& e : lp.objective)
        obj += e.coeff * sol.x[e.col];
    sol.objective_value = obj;
}

} // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& options) {
    const double tol = options.pivot_tol;
    require(tol > 0.0, "solve: pivot tolerance must be positive");
    lp.validate();

    Simplex spx(lp, tol);
    const double art = spx.run_phase1();

    double bmax = 1.0;
    for (const auto& r : lp.eq_rows)
        bmax = std::max(bmax, std::abs(r.rhs));
    for (const auto& r : lp.ge_rows)
        bmax = std::max(bmax, std::abs(r.rhs));
    const double feas_tol = options.feas_tol >= 0.0
        ? options.feas_tol
        : std::max(100.0 * tol, 1e-9) * bmax;

    LpSolution out;
    if (art > feas_tol) {
        out.status = LpStatus::Infeasible;
        out.iterations = spx.iterations();
        spx.farkas_duals(out);
        return out;
    }

    spx.run_phase2(out);
    if (out.status == LpStatus::Optimal) {
        const double sgn = lp.sense == Sense::Maximize ? -1.0 : 1.0;
        for (auto& d : out.row_duals)
            d *= sgn;
        verify_solution(lp, out);
    }
    if (log_enabled(LogLevel::Debug))
        log_msg(LogLevel::Debug, "simplex: %ld pivots, status %d",
                out.iterations, static_cast<int>(out.status));
    return out;
}

LpSolution solve(const LinearProgram& lp, double tol) {
    SolveOptions options;
    options.pivot_tol = tol;
    return solve(lp, options);
}

bool feasible(const LinearProgram& lp, double tol) {
    require(tol > 0.0, "feasible: tol must be positive");
    lp.validate();
    Simplex spx(lp, 1e-9);
    return spx.run_phase1() <= tol;
}

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string row_name(int k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "R%04d", k);
    return buf;
}

std::string col_name(int k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "C%04d", k);
    return buf;
}

} // namespace

std::string write_mps(const LinearProgram& lp, const std::string& name) {
    lp.validate();
    const int m_eq = static_cast<int>(lp.eq_rows.size());
    const int m_ge = static_cast<int>(lp.ge_rows.size());

    std::string out;
    out += "NAME          " + name + "\n";
    if (lp.sense == Sense::Maximize)
        out += "* SENSE: MAX\n";
    out += "ROWS\n";
    out += " N  " + row_name(1) + "\n";
    for (int r = 0; r < m_eq; ++r)
        out += " E  " + row_name(2 + r) + "\n";
    for (int r = 0; r < m_ge; ++r)
        out += " G  " + row_name(2 + m_eq + r) + "\n";

    // Column-major gather: (row index, coeff) per variable, objective
    // row first, constraint rows in declaration order.
    std::vector<std::vector<std::pair<int, double>>> cols(lp.num_vars);
    for (const auto& e : canonical_row(lp.objective))
        cols[e.col].emplace_back(1, e.coeff);
    for (int r = 0; r < m_eq; ++r)
        for (const auto& e : canonical_row(lp.eq_rows[r].coeffs))
            cols[e.col].emplace_back(2 + r, e.coeff);
    for (int r = 0; r < m_ge; ++r)
        for (const auto& e : canonical_row(lp.ge_rows[r].coeffs))
            cols[e.col].emplace_back(2 + m_eq + r, e.coeff);

    out += "COLUMNS\n";
    char line[96];
    for (int j = 0; j < lp.num_vars; ++j) {
        auto& entries = cols[j];
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (entries.empty())
            entries.emplace_back(1, 0.0); // keep the variable visible
        for (const auto& [row, coeff] : entries) {
            std::snprintf(line, sizeof line, "    %-10s%-10s%s\n", col_name(j + 1).c_str(),
                          row_name(row).c_str(), format_number(coeff).c_str());
            out += line;
        }
    }

    out += "RHS\n";
    for (int r = 0; r < m_eq; ++r)
        if (lp.eq_rows[r].rhs != 0.0) {
            std::snprintf(line, sizeof line, "    %-10s%-10s%s\n", "RHS",
                          row_name(2 + r).c_str(), format_number(lp.eq_rows[r].rhs).c_str());
            out += line;
        }
    for (int r = 0; r < m_ge; ++r)
        if (lp.ge_rows[r].rhs != 0.0) {
            std::snprintf(line, sizeof line, "    %-10s%-10s%s\n", "RHS",
                          row_name(2 + m_eq + r).c_str(),
                          format_number(lp.ge_rows[r].rhs).c_str());
            out += line;
        }

    out += "BOUNDS\n";
    out += "ENDATA\n";
    return out;
}

} // namespace conekit
