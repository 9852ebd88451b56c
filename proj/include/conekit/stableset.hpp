#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conekit/graphio.hpp"
#include "conekit/lp.hpp"
#include "conekit/sdbasis.hpp"
#include "conekit/symmat.hpp"

namespace conekit {

// Which polyhedral outer approximation of the PSD cone the relaxation
// uses: the dual of the plus/minus generator cone (DD) or the dual of
// the multi-parameter generator cone (SDB).
enum class Approx { DD, SDB };

// LP relaxation of the maximum stable set number of a graph:
//
//   max  <ee^T, X>   s.t.  <A + I, X> = 1,  cone rows >= 0,
//                          cut rows <d d^T, X> >= 0,  X >= 0 entrywise,
//
// over the packed upper triangle of X as LP variables.  Cuts must be
// unit vectors to 1e-12.  materialize() always emits every cone row and
// every cut currently held.
class Relaxation {
public:
    Relaxation(const Graph& g, Approx approx,
               const ParameterSet& params = standard_parameters());

    int dim() const { return n_; }
    Approx approx() const { return approx_; }
    int num_cuts() const { return static_cast<int>(cuts_.size()); }
    const std::vector<BasisMatrix>& generators() const { return generators_; }
    const std::vector<std::vector<double>>& cuts() const { return cuts_; }

    // Column of packed entry (i, j) in the materialized LP.
    int column(int i, int j) const;

    void add_cut(std::vector<double> d);
    LinearProgram materialize() const;

private:
    int n_;
    Approx approx_;
    SymMatrix a_plus_i_;
    std::vector<BasisMatrix> generators_;
    std::vector<std::vector<double>> cuts_;
};

Relaxation build_relaxation(const Graph& g, Approx approx,
                            const ParameterSet& params = standard_parameters());

// One row per cutting-plane iteration; bound is nonincreasing down the
// log, elapsed_seconds is wall-clock from loop start, cuts_added counts
// the cuts appended after this iterate (0 on the last row).
struct IterationLog {
    int iteration = 0;
    double bound = 0.0;
    double lambda_min = 0.0;
    int cuts_added = 0;
    double elapsed_seconds = 0.0;
};

// psd_tol > 0, and at least one of the two limits must be finite.
struct StopCriteria {
    double psd_tol = 1e-6;
    long max_iterations = 1000;
    double time_limit_seconds = 0.0; // <= 0 means no time limit

    void validate() const;
};

// Thrown when an LP solve or eigensolve fails mid-run; carries the
// iterations completed before the failure.
class CuttingPlaneError : public std::runtime_error {
public:
    CuttingPlaneError(const std::string& what, std::vector<IterationLog> log)
        : std::runtime_error(what), partial_log(std::move(log)) {}

    std::vector<IterationLog> partial_log;
};

// Solve the current LP; returns the optimal X and the bound value.
std::pair<SymMatrix, double> solve_relaxation(const Relaxation& r);

// Unit eigenvectors of x whose eigenvalues fall below -psd_tol, most
// negative first, at most max_cuts of them.
std::vector<std::vector<double>> generate_cuts(const SymMatrix& x,
                                               int max_cuts = 2,
                                               double psd_tol = 1e-6);

// The full loop: solve, log, stop once the iterate is psd_tol-PSD or a
// limit is reached, otherwise append the eigenvector cuts and repeat.
std::vector<IterationLog> cutting_plane(const Graph& g, Approx approx,
                                        const StopCriteria& stop,
                                        const ParameterSet& params = standard_parameters());

// Relative optimality gap |f_star - f_k| / |f_star| in percent.
// f_star = 0 is an error.
double gap(double f_k, double f_star);

// CSV with header iter,bound,lambda_min,cuts_added,elapsed_s; JSON is an
// array of objects with the same keys.
std::string logs_to_csv(const std::vector<IterationLog>& logs);
std::string logs_to_json(const std::vector<IterationLog>& logs);
std::vector<IterationLog> logs_from_csv(const std::string& text);

} // namespace conekit
