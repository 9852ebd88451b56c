#include "conekit/stableset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "conekit/cones.hpp"
#include "conekit/errors.hpp"
#include "conekit/log.hpp"

namespace conekit {

Relaxation::Relaxation(const Graph& g, Approx approx, const ParameterSet& params)
    : n_(g.n), approx_(approx), a_plus_i_(adjacency(g)) {
    if (n_ <= 0)
        throw std::invalid_argument("Relaxation: graph must have at least one vertex");
    for (int i = 0; i < n_; ++i)
        a_plus_i_.set(i, i, 1.0);
    generators_ = approx == Approx::DD ? sdb_generators(n_, ParameterSet{-1.0, 1.0})
                                       : sdb_generators(n_, params);
}

int Relaxation::column(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw std::invalid_argument("Relaxation::column: index out of range");
    return SymMatrix::packed_index(n_, std::min(i, j), std::max(i, j));
}

void Relaxation::add_cut(std::vector<double> d) {
    if (static_cast<int>(d.size()) != n_)
        throw std::invalid_argument("add_cut: vector length must match the graph order");
    double ss = 0.0;
    for (double v : d) {
        if (!std::isfinite(v))
            throw std::invalid_argument("add_cut: entries must be finite");
        ss += v * v;
    }
    if (std::abs(std::sqrt(ss) - 1.0) > 1e-12)
        throw std::invalid_argument("add_cut: cut vector must have unit norm");
    cuts_.push_back(std::move(d));
}

LinearProgram Relaxation::materialize() const {
    LinearProgram lp;
    lp.num_vars = SymMatrix::packed_size(n_);
    lp.sense = Sense::Maximize;

    // <M, X> over the packed upper triangle picks up a factor 2 on every
    // off-diagonal coordinate.
    lp.objective.reserve(lp.num_vars);
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            lp.objective.push_back({SymMatrix::packed_index(n_, i, j), i == j ? 1.0 : 2.0});

    SparseRow eq;
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
            const double a = a_plus_i_(i, j);
            if (a != 0.0)
                eq.push_back({SymMatrix::packed_index(n_, i, j), i == j ? a : 2.0 * a});
        }
    lp.add_eq(std::move(eq), 1.0);

    for (auto& row : dual_cone_rows(generators_, n_))
        lp.add_ge(std::move(row), 0.0);

    for (const auto& d : cuts_) {
        SparseRow row;
        row.reserve(lp.num_vars);
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) {
                const double c = i == j ? d[i] * d[i] : 2.0 * d[i] * d[j];
                if (c != 0.0) row.push_back({SymMatrix::packed_index(n_, i, j), c});
            }
        lp.add_ge(std::move(row), 0.0);
    }
    return lp;
}

Relaxation build_relaxation(const Graph& g, Approx approx, const ParameterSet& params) {
    return Relaxation(g, approx, params);
}

void StopCriteria::validate() const {
    if (!(psd_tol > 0.0))
        throw std::invalid_argument("StopCriteria: psd_tol must be positive");
    const bool has_iter_limit = max_iterations > 0;
    const bool has_time_limit = time_limit_seconds > 0.0 && std::isfinite(time_limit_seconds);
    if (!has_iter_limit && !has_time_limit)
        throw std::invalid_argument("StopCriteria: need an iteration or time limit");
}

namespace {

// The bound is computed on the dual of the materialized program.  The
// dual has one row per packed matrix entry, no matter how many cone
// rows the primal carries, and its right-hand side is the primal
// objective, which is nonzero everywhere.  That sidesteps the long
// degenerate plateaus the primal formulation forces on the simplex,
// where nearly every constraint has a zero right-hand side.  Each
// equality turns into a split pair of free columns and each primal
// inequality into one sign-constrained column; the primal optimizer is
// recovered from the row duals.
LinearProgram bound_dual(const LinearProgram& primal) {
    const int n_eq = static_cast<int>(primal.eq_rows.size());
    const int n_ge = static_cast<int>(primal.ge_rows.size());

    LinearProgram dual;
    dual.num_vars = 2 * n_eq + n_ge;
    dual.sense = Sense::Minimize;
    for (int e = 0; e < n_eq; ++e) {
        const double rhs = primal.eq_rows[e].rhs;
        if (rhs != 0.0) {
            dual.objective.push_back({2 * e, rhs});
            dual.objective.push_back({2 * e + 1, -rhs});
        }
    }
    for (int g = 0; g < n_ge; ++g)
        if (primal.ge_rows[g].rhs != 0.0)
            dual.objective.push_back({2 * n_eq + g, primal.ge_rows[g].rhs});

    std::vector<SparseRow> rows(primal.num_vars);
    for (int e = 0; e < n_eq; ++e)
        for (const auto& entry : primal.eq_rows[e].coeffs) {
            rows[entry.col].push_back({2 * e, entry.coeff});
            rows[entry.col].push_back({2 * e + 1, -entry.coeff});
        }
    for (int g = 0; g < n_ge; ++g)
        for (const auto& entry : primal.ge_rows[g].coeffs)
            rows[entry.col].push_back({2 * n_eq + g, -entry.coeff});

    std::vector<double> rhs(primal.num_vars, 0.0);
    for (const auto& entry : primal.objective)
        rhs[entry.col] = entry.coeff;
    for (int p = 0; p < primal.num_vars; ++p)
        dual.add_ge(std::move(rows[p]), rhs[p]);
    return dual;
}

} // namespace

std::pair<SymMatrix, double> solve_relaxation(const Relaxation& r) {
    const LinearProgram primal = r.materialize();
    const LpSolution sol = solve(bound_dual(primal));
    if (sol.status != LpStatus::Optimal)
        throw NumericalError(sol.status == LpStatus::Infeasible
                                 ? "solve_relaxation: LP reported unbounded"
                                 : "solve_relaxation: LP reported infeasible");

    SymMatrix x(r.dim());
    for (int i = 0; i < r.dim(); ++i)
        for (int j = i; j < r.dim(); ++j)
            x.set(i, j, sol.row_duals[r.column(i, j)]);

    if (log_enabled(LogLevel::Debug)) {
        double primal_obj = 0.0;
        for (const auto& e : primal.objective)
            primal_obj += e.coeff * sol.row_duals[e.col];
        double worst = 0.0;
        for (const auto& row : primal.ge_rows) {
            double s = 0.0;
            for (const auto& e : row.coeffs)
                s += e.coeff * sol.row_duals[e.col];
            worst = std::min(worst, s - row.rhs);
        }
        log_msg(LogLevel::Debug,
                "relaxation: bound %.9f, recovered objective %.9f, worst cone slack %.3e",
                sol.objective_value, primal_obj, worst);
    }
    return {std::move(x), sol.objective_value};
}

namespace {

std::vector<std::vector<double>> cuts_from_pairs(
    std::vector<std::pair<double, std::vector<double>>> pairs, double psd_tol) {
    std::vector<std::vector<double>> cuts;
    for (auto& [value, vec] : pairs) {
        if (value >= -psd_tol) break; // ascending, so the rest are no better
        double norm = 0.0;
        for (double v : vec) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        for (double& v : vec) v /= norm;
        cuts.push_back(std::move(vec));
    }
    return cuts;
}

} // namespace

std::vector<std::vector<double>> generate_cuts(const SymMatrix& x, int max_cuts,
                                               double psd_tol) {
    if (max_cuts < 1)
        throw std::invalid_argument("generate_cuts: max_cuts must be at least 1");
    if (psd_tol <= 0.0)
        throw std::invalid_argument("generate_cuts: psd_tol must be positive");
    return cuts_from_pairs(min_eigenpairs(x, max_cuts), psd_tol);
}

std::vector<IterationLog> cutting_plane(const Graph& g, Approx approx,
                                        const StopCriteria& stop,
                                        const ParameterSet& params) {
    stop.validate();
    Relaxation relax = build_relaxation(g, approx, params);

    std::vector<IterationLog> logs;
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    };

    for (int k = 0;; ++k) {
        double bound = 0.0;
        std::vector<std::pair<double, std::vector<double>>> pairs;
        try {
            auto [x, f] = solve_relaxation(relax);
            bound = f;
            pairs = min_eigenpairs(x, 2);
        } catch (const NumericalError& e) {
            throw CuttingPlaneError(std::string("cutting_plane: ") + e.what(),
                                    std::move(logs));
        }

        IterationLog row;
        row.iteration = k;
        row.bound = bound;
        row.lambda_min = pairs.front().first;
        row.elapsed_seconds = elapsed();

        const bool converged = row.lambda_min >= -stop.psd_tol;
        const bool out_of_iterations =
            stop.max_iterations > 0 && k + 1 >= stop.max_iterations;
        const bool out_of_time = stop.time_limit_seconds > 0.0 &&
                                 row.elapsed_seconds >= stop.time_limit_seconds;
        if (converged || out_of_iterations || out_of_time) {
            logs.push_back(row);
            if (log_enabled(LogLevel::Info))
                log_msg(LogLevel::Info,
                        "cutting plane: stop at iteration %d, bound %.6f%s", k, bound,
                        converged ? " (psd)" : "");
            return logs;
        }

        auto cuts = cuts_from_pairs(std::move(pairs), stop.psd_tol);
        row.cuts_added = static_cast<int>(cuts.size());
        for (auto& d : cuts)
            relax.add_cut(std::move(d));
        logs.push_back(row);
        if (log_enabled(LogLevel::Debug))
            log_msg(LogLevel::Debug, "iteration %d: bound %.6f, lambda_min %.3e, %d cuts",
                    k, row.bound, row.lambda_min, row.cuts_added);
    }
}

double gap(double f_k, double f_star) {
    if (!std::isfinite(f_k) || !std::isfinite(f_star))
        throw std::invalid_argument("gap: values must be finite");
    if (f_star == 0.0)
        throw std::invalid_argument("gap: reference value must be nonzero");
    return std::abs((f_star - f_k) / f_star) * 100.0;
}

std::string logs_to_csv(const std::vector<IterationLog>& logs) {
    std::string out = "iter,bound,lambda_min,cuts_added,elapsed_s\n";
    char buf[160];
    for (const auto& r : logs) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d,%.17g\n", r.iteration, r.bound,
                      r.lambda_min, r.cuts_added, r.elapsed_seconds);
        out += buf;
    }
    return out;
}

std::string logs_to_json(const std::vector<IterationLog>& logs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : logs)
        arr.push_back({{"iter", r.iteration},
                       {"bound", r.bound},
                       {"lambda_min", r.lambda_min},
                       {"cuts_added", r.cuts_added},
                       {"elapsed_s", r.elapsed_seconds}});
    return arr.dump();
}

namespace {

double csv_double(const std::string& s, int lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v))
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed numeric field '" + s + "'", lineno);
    }
}

int csv_int(const std::string& s, int lineno) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed integer field '" + s + "'", lineno);
    }
}

} // namespace

std::vector<IterationLog> logs_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty iteration log", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "iter,bound,lambda_min,cuts_added,elapsed_s")
        throw ParseError("unexpected CSV header '" + line + "'", 1);

    std::vector<IterationLog> logs;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 5)
            throw ParseError("expected 5 comma-separated fields", lineno);

        IterationLog r;
        r.iteration = csv_int(fields[0], lineno);
        r.bound = csv_double(fields[1], lineno);
        r.lambda_min = csv_double(fields[2], lineno);
        r.cuts_added = csv_int(fields[3], lineno);
        r.elapsed_seconds = csv_double(fields[4], lineno);
        logs.push_back(r);
    }
    return logs;
}

} // namespace conekit
