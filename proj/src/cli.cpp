#include "conekit/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "conekit/cones.hpp"
#include "conekit/errors.hpp"
#include "conekit/graphio.hpp"
#include "conekit/lp.hpp"
#include "conekit/sdbasis.hpp"
#include "conekit/stableset.hpp"
#include "conekit/symmat.hpp"

namespace conekit {
namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("short write to " + path);
}

struct ErSpec {
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
};

ErSpec parse_er(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = s.find(',', pos);
        parts.push_back(s.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (parts.size() != 3)
        throw std::invalid_argument("--er expects n,p,seed");
    try {
        std::size_t used = 0;
        ErSpec er;
        er.n = std::stoi(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
        er.p = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
        er.seed = std::stoull(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
        return er;
    } catch (const std::exception&) {
        throw std::invalid_argument("--er expects n,p,seed as integer,real,integer");
    }
}

SymMatrix matrix_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw ParseError("expected an object with an integer field 'n'", 0);
    const int n = j["n"].get<int>();
    if (n < 0) throw ParseError("'n' must be nonnegative", 0);
    if (!j.contains("upper") || !j["upper"].is_array())
        throw ParseError("expected an array field 'upper'", 0);
    const auto& u = j["upper"];
    if (static_cast<int>(u.size()) != SymMatrix::packed_size(n))
        throw ParseError("'upper' must hold n(n+1)/2 numbers", 0);

    SymMatrix m(n);
    auto& pv = m.packed_values();
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u[k].is_number())
            throw ParseError("'upper' entries must be numbers", 0);
        const double v = u[k].get<double>();
        if (!std::isfinite(v))
            throw ParseError("'upper' entries must be finite", 0);
        pv[k] = v;
    }
    return m;
}

Graph load_graph(const std::string& er_arg, const std::string& dimacs_path) {
    if (er_arg.empty() == dimacs_path.empty())
        throw std::invalid_argument("choose exactly one graph source: --er or --dimacs");
    if (!er_arg.empty()) {
        const ErSpec er = parse_er(er_arg);
        return erdos_renyi(er.n, er.p, er.seed);
    }
    return parse_dimacs(read_file(dimacs_path));
}

std::string json_sibling(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".json";
    return csv_path + ".json";
}

int cmd_gen_graph(const std::string& er_arg, const std::string& out_path) {
    const ErSpec er = parse_er(er_arg);
    const Graph g = erdos_renyi(er.n, er.p, er.seed);
    write_file(out_path, write_dimacs(g));
    std::printf("n %d m %d\n", g.n, g.num_edges());
    return 0;
}

int cmd_solve(const std::string& method, const std::string& er_arg,
              const std::string& dimacs_path, long max_iters, double time_limit,
              double psd_tol, const std::optional<double>& ref_bound,
              const std::string& out_path, const std::string& mps_path) {
    if (method != "cpdd" && method != "cpsdb")
        throw std::invalid_argument("--method must be cpdd or cpsdb");
    const Approx approx = method == "cpdd" ? Approx::DD : Approx::SDB;
    const Graph g = load_graph(er_arg, dimacs_path);

    if (!mps_path.empty()) {
        const Relaxation r = build_relaxation(g, approx);
        write_file(mps_path, write_mps(r.materialize(), "STABLESET"));
        std::printf("wrote %s\n", mps_path.c_str());
        return 0;
    }

    StopCriteria stop;
    stop.psd_tol = psd_tol;
    stop.max_iterations = max_iters;
    stop.time_limit_seconds = time_limit;

    std::vector<IterationLog> logs;
    int code = 0;
    try {
        logs = cutting_plane(g, approx, stop);
    } catch (const CuttingPlaneError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        logs = e.partial_log;
        code = 3;
    }

    if (!out_path.empty() && !logs.empty()) {
        write_file(out_path, logs_to_csv(logs));
        write_file(json_sibling(out_path), logs_to_json(logs));
    }
    if (!logs.empty()) {
        std::printf("method %s\n", method.c_str());
        std::printf("graph n=%d m=%d\n", g.n, g.num_edges());
        std::printf("first bound %.6f\n", logs.front().bound);
        std::printf("final bound %.6f\n", logs.back().bound);
        std::printf("iterations %zu\n", logs.size());
        if (ref_bound) {
            std::printf("first gap %.4f%%\n", gap(logs.front().bound, *ref_bound));
            std::printf("final gap %.4f%%\n", gap(logs.back().bound, *ref_bound));
        }
    }
    return code;
}

int cmd_check(const std::string& matrix_path, const std::string& test,
              const std::optional<double>& tol_opt) {
    const SymMatrix m = matrix_from_json(read_file(matrix_path));
    bool verdict = false;
    std::string detail;
    char buf[160];

    if (test == "dd") {
        verdict = is_dd(m);
        double margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m.dim(); ++i) {
            double off = 0.0;
            for (int j = 0; j < m.dim(); ++j)
                if (j != i) off += std::abs(m(i, j));
            margin = std::min(margin, m(i, i) - off);
        }
        if (m.dim() > 0) {
            std::snprintf(buf, sizeof buf, "min row margin %.6g", margin);
            detail = buf;
        }
    } else if (test == "sdd") {
        verdict = is_sdd(m, tol_opt.value_or(1e-9));
    } else if (test == "psd") {
        const double tol = tol_opt.value_or(1e-9);
        verdict = is_psd(m, tol);
        if (m.dim() > 0) {
            const auto pairs = min_eigenpairs(m, 1);
            std::snprintf(buf, sizeof buf, "lambda_min %.6g", pairs.front().first);
            detail = buf;
        }
    } else if (test == "cone-dd" || test == "cone-sdb") {
        const auto gens =
            sdb_generators(m.dim(), test == "cone-dd" ? ParameterSet{-1.0, 1.0}
                                                      : standard_parameters());
        const auto res = cone_membership(m, gens, tol_opt.value_or(1e-7));
        verdict = res.member;
        if (res.member) {
            int nonzero = 0;
            for (double c : res.coefficients)
                if (c != 0.0) ++nonzero;
            std::snprintf(buf, sizeof buf,
                          "decomposition over %d of %zu generators, residual %.3g",
                          nonzero, gens.size(), res.residual);
            detail = buf;
        } else if (res.separator) {
            std::snprintf(buf, sizeof buf, "separating certificate: <S, M> = %.6g",
                          inner(*res.separator, m));
            detail = buf;
        } else {
            detail = "no separating certificate recovered";
        }
    } else {
        throw std::invalid_argument("--test must be dd, sdd, psd, cone-dd, or cone-sdb");
    }

    std::printf("%s\n", verdict ? "true" : "false");
    if (!detail.empty()) std::printf("%s\n", detail.c_str());
    return verdict ? 0 : 1;
}

int cmd_bases(int n, const std::string& alpha_arg) {
    if (n < 1) throw std::invalid_argument("bases: n must be at least 1");

    ParameterSet params = [&] {
        if (alpha_arg == "H") return standard_parameters();
        std::vector<double> alphas;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = alpha_arg.find(',', pos);
            const std::string tok =
                alpha_arg.substr(pos, comma == std::string::npos ? comma : comma - pos);
            try {
                std::size_t used = 0;
                alphas.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw std::invalid_argument("--alpha expects 'H' or a comma-separated list");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return ParameterSet(alphas);
    }();

    const auto gens = sdb_generators(n, params);
    std::printf("n %d parameters %zu generators %zu\n", n,
                static_cast<std::size_t>(params.size()), gens.size());
    std::printf("%14s %6s %10s %10s %10s %10s\n", "alpha", "rank", "cos_t1", "cos_t2",
                "cos_t3", "cos_t4");
    for (double a : params.alphas()) {
        const Angles ang = angles(a);
        std::printf("%14.8g %6d %10.6f %10.6f %10.6f %10.6f\n", a, basis_rank(n, a),
                    ang.cos_theta1, ang.cos_theta2, ang.cos_theta3, ang.cos_theta4);
    }
    return 0;
}

std::string basename_of(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

int cmd_report(const std::vector<std::string>& log_paths,
               const std::optional<double>& ref_bound,
               const std::vector<double>& checkpoints, const std::string& out_path) {
    struct Row {
        std::string name;
        std::vector<IterationLog> logs;
    };
    std::vector<Row> rows;
    for (const auto& p : log_paths)
        rows.push_back({basename_of(p), logs_from_csv(read_file(p))});
    for (const auto& r : rows)
        if (r.logs.empty())
            throw ParseError("iteration log " + r.name + " has no rows", 0);

    // Bounds are step functions of wall-clock time: the value at a
    // checkpoint is the bound of the last iteration completed by then,
    // carried forward (and flagged) past the end of the log.
    const auto bound_at = [](const std::vector<IterationLog>& logs, double t)
        -> std::pair<std::optional<double>, bool> {
        if (t < logs.front().elapsed_seconds) return {std::nullopt, false};
        double b = logs.front().bound;
        for (const auto& r : logs) {
            if (r.elapsed_seconds > t) break;
            b = r.bound;
        }
        return {b, t > logs.back().elapsed_seconds};
    };

    std::string text;
    std::string csv = "log,first";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-24s %12s", "log", "first");
    text += buf;
    for (double t : checkpoints) {
        char tb[32];
        std::snprintf(tb, sizeof tb, "t=%g", t);
        std::snprintf(buf, sizeof buf, " %12s", tb);
        text += buf;
        std::snprintf(buf, sizeof buf, ",%s", tb);
        csv += buf;
    }
    std::snprintf(buf, sizeof buf, " %12s %10s", "final", "iters");
    text += buf;
    csv += ",final,iters";
    if (ref_bound) {
        std::snprintf(buf, sizeof buf, " %10s %10s", "gap_first", "gap_final");
        text += buf;
        csv += ",gap_first,gap_final";
    }
    text += '\n';
    csv += '\n';

    bool flagged_any = false;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-24s %12.6f", r.name.c_str(),
                      r.logs.front().bound);
        text += buf;
        std::snprintf(buf, sizeof buf, "%s,%.17g", r.name.c_str(), r.logs.front().bound);
        csv += buf;
        for (double t : checkpoints) {
            const auto [b, carried] = bound_at(r.logs, t);
            if (!b) {
                std::snprintf(buf, sizeof buf, " %12s", "-");
                text += buf;
                csv += ",";
            } else {
                flagged_any = flagged_any || carried;
                std::snprintf(buf, sizeof buf, " %11.6f%c", *b, carried ? '*' : ' ');
                text += buf;
                std::snprintf(buf, sizeof buf, ",%.17g", *b);
                csv += buf;
            }
        }
        std::snprintf(buf, sizeof buf, " %12.6f %10zu", r.logs.back().bound,
                      r.logs.size());
        text += buf;
        std::snprintf(buf, sizeof buf, ",%.17g,%zu", r.logs.back().bound, r.logs.size());
        csv += buf;
        if (ref_bound) {
            std::snprintf(buf, sizeof buf, " %10.4f %10.4f",
                          gap(r.logs.front().bound, *ref_bound),
                          gap(r.logs.back().bound, *ref_bound));
            text += buf;
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g",
                          gap(r.logs.front().bound, *ref_bound),
                          gap(r.logs.back().bound, *ref_bound));
            csv += buf;
        }
        text += '\n';
        csv += '\n';
    }
    if (flagged_any)
        text += "* last bound carried forward past the end of the log\n";

    std::fputs(text.c_str(), stdout);
    if (!out_path.empty()) write_file(out_path, csv);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Polyhedral cone relaxations for stable set bounds"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-graph", "Sample a G(n, p) graph, write DIMACS");
    std::string gen_er, gen_out;
    gen->add_option("--er", gen_er, "n,p,seed")->required();
    gen->add_option("--out", gen_out, "output DIMACS path")->required();

    auto* solve_cmd = app.add_subcommand("solve", "Run the cutting-plane bound");
    std::string sv_method, sv_er, sv_dimacs, sv_out, sv_mps;
    long sv_max_iters = 1000;
    double sv_time_limit = 0.0, sv_psd_tol = 1e-6;
    std::optional<double> sv_ref;
    solve_cmd->add_option("--method", sv_method, "cpdd or cpsdb")->required();
    solve_cmd->add_option("--er", sv_er, "n,p,seed graph source");
    solve_cmd->add_option("--dimacs", sv_dimacs, "DIMACS graph source");
    solve_cmd->add_option("--max-iters", sv_max_iters, "iteration cap (0 = none)");
    solve_cmd->add_option("--time-limit-s", sv_time_limit, "wall-clock cap (0 = none)");
    solve_cmd->add_option("--psd-tol", sv_psd_tol, "eigenvalue tolerance");
    solve_cmd->add_option("--ref-bound", sv_ref, "reference value for gap reporting");
    solve_cmd->add_option("--out", sv_out, "CSV log path (JSON written alongside)");
    solve_cmd->add_option("--mps", sv_mps, "export the initial LP as MPS and exit");

    auto* check = app.add_subcommand("check", "Membership tests for a packed matrix");
    std::string ck_matrix, ck_test;
    std::optional<double> ck_tol;
    check->add_option("matrix", ck_matrix, "JSON file {n, upper:[...]}")->required();
    check->add_option("--test", ck_test, "dd, sdd, psd, cone-dd, cone-sdb")->required();
    check->add_option("--tol", ck_tol, "tolerance override");

    auto* bases = app.add_subcommand("bases", "Inspect basis parameters");
    int bs_n = 0;
    std::string bs_alpha = "H";
    bases->add_option("--n", bs_n, "matrix order")->required();
    bases->add_option("--alpha", bs_alpha, "'H' or comma-separated values");

    auto* report = app.add_subcommand("report", "Compare iteration logs");
    std::vector<std::string> rp_paths;
    std::vector<double> rp_at;
    std::optional<double> rp_ref;
    std::string rp_out;
    report->add_option("logs", rp_paths, "CSV iteration logs")->required();
    report->add_option("--at", rp_at, "comma-separated time checkpoints in seconds")
        ->delimiter(',');
    report->add_option("--ref-bound", rp_ref, "reference value for gap columns");
    report->add_option("--out", rp_out, "also write the table as CSV");

    try {
        app.parse(argc, argv);
        if (*gen) return cmd_gen_graph(gen_er, gen_out);
        if (*solve_cmd)
            return cmd_solve(sv_method, sv_er, sv_dimacs, sv_max_iters, sv_time_limit,
                             sv_psd_tol, sv_ref, sv_out, sv_mps);
        if (*check) return cmd_check(ck_matrix, ck_test, ck_tol);
        if (*bases) return cmd_bases(bs_n, bs_alpha);
        if (*report) return cmd_report(rp_paths, rp_ref, rp_at, rp_out);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ParseError& e) {
        if (e.line() > 0)
            std::fprintf(stderr, "error: line %d: %s\n", e.line(), e.what());
        else
            std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

} // namespace conekit
