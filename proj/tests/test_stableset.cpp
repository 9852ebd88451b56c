#include "doctest.h"

#include "conekit/cones.hpp"
#include "conekit/errors.hpp"
#include "conekit/graphio.hpp"
#include "conekit/lp.hpp"
#include "conekit/stableset.hpp"
#include "conekit/symmat.hpp"

#include "json.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

using conekit::Approx;
using conekit::Graph;
using conekit::IterationLog;
using conekit::LinearProgram;
using conekit::ParseError;
using conekit::Relaxation;
using conekit::StopCriteria;
using conekit::SymMatrix;

namespace {

Graph complete(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.edges.emplace_back(i, j);
    return g;
}

Graph empty_graph(int n) {
    Graph g;
    g.n = n;
    return g;
}

Graph path3() {
    Graph g;
    g.n = 3;
    g.edges = {{0, 1}, {1, 2}};
    return g;
}

double quad_form(const SymMatrix& x, const std::vector<double>& d) {
    double s = 0.0;
    const int n = x.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += d[i] * x(i, j) * d[j];
    return s;
}

} // namespace

TEST_CASE("relaxation construction and validation") {
    const Graph g = path3();
    Relaxation r(g, Approx::DD);
    CHECK(r.dim() == 3);
    CHECK(r.approx() == Approx::DD);
    CHECK(r.num_cuts() == 0);
    CHECK(r.generators().size() == 9); // 3 diagonal + 3 pairs x 2 signs

    Relaxation s(g, Approx::SDB);
    CHECK(s.generators().size() == 21); // 3 diagonal + 3 pairs x 6 parameters

    CHECK_THROWS_AS(Relaxation(empty_graph(0), Approx::DD), std::invalid_argument);

    SUBCASE("column indexing is symmetric in its arguments") {
        CHECK(r.column(0, 0) == 0);
        CHECK(r.column(0, 2) == 2);
        CHECK(r.column(2, 0) == 2);
        CHECK(r.column(1, 1) == 3);
        CHECK(r.column(2, 2) == 5);
        CHECK_THROWS_AS(r.column(0, 3), std::invalid_argument);
        CHECK_THROWS_AS(r.column(-1, 0), std::invalid_argument);
    }

    SUBCASE("cut vectors must be unit length and well formed") {
        CHECK_THROWS_AS(r.add_cut({1.0, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(r.add_cut({1.0, 1.0, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(r.add_cut({std::nan(""), 0.0, 0.0}), std::invalid_argument);
        r.add_cut({1.0, 0.0, 0.0});
        const double inv = 1.0 / std::sqrt(2.0);
        r.add_cut({inv, -inv, 0.0});
        CHECK(r.num_cuts() == 2);
        CHECK(r.cuts()[0] == std::vector<double>{1.0, 0.0, 0.0});
    }

    SUBCASE("the DD generator set ignores the parameter argument") {
        Relaxation custom(g, Approx::DD, conekit::ParameterSet{0.5});
        REQUIRE(custom.generators().size() == r.generators().size());
        for (size_t k = 0; k < r.generators().size(); ++k) {
            CHECK(custom.generators()[k].i == r.generators()[k].i);
            CHECK(custom.generators()[k].j == r.generators()[k].j);
            CHECK(custom.generators()[k].alpha == r.generators()[k].alpha);
        }
    }
}

TEST_CASE("materialized program shape") {
    Relaxation r(path3(), Approx::DD);
    r.add_cut({1.0, 0.0, 0.0});
    const double inv = 1.0 / std::sqrt(2.0);
    r.add_cut({inv, inv, 0.0});
    const LinearProgram lp = r.materialize();

    CHECK(lp.num_vars == 6);
    CHECK(lp.sense == conekit::Sense::Maximize);
    REQUIRE(lp.eq_rows.size() == 1);
    REQUIRE(lp.ge_rows.size() == 9 + 2);

    SUBCASE("objective doubles the off-diagonal entries") {
        REQUIRE(lp.objective.size() == 6);
        std::vector<double> dense(6, 0.0);
        for (const auto& e : lp.objective)
            dense[e.col] = e.coeff;
        CHECK(dense == std::vector<double>{1, 2, 2, 1, 2, 1});
    }

    SUBCASE("the trace row skips the missing edge of the path") {
        std::vector<double> dense(6, 0.0);
        for (const auto& e : lp.eq_rows[0].coeffs)
            dense[e.col] += e.coeff;
        // packed order: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
        CHECK(dense == std::vector<double>{1, 2, 0, 1, 2, 1});
        CHECK(lp.eq_rows[0].rhs == 1.0);
    }

    SUBCASE("cut rows pack the squared vector with doubled cross terms") {
        const auto& first = lp.ge_rows[9];
        std::vector<double> dense(6, 0.0);
        for (const auto& e : first.coeffs)
            dense[e.col] += e.coeff;
        CHECK(dense == std::vector<double>{1, 0, 0, 0, 0, 0});
        CHECK(first.rhs == 0.0);

        const auto& second = lp.ge_rows[10];
        dense.assign(6, 0.0);
        for (const auto& e : second.coeffs)
            dense[e.col] += e.coeff;
        CHECK(dense[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(dense[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dense[3] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(dense[2] == 0.0);
        CHECK(dense[4] == 0.0);
        CHECK(dense[5] == 0.0);
    }

    SUBCASE("cone rows are exactly the dual cone rows of the generators") {
        const auto rows = conekit::dual_cone_rows(r.generators(), 3);
        for (int k = 0; k < 9; ++k) {
            std::vector<double> a(6, 0.0), b(6, 0.0);
            for (const auto& e : rows[k])
                a[e.col] += e.coeff;
            for (const auto& e : lp.ge_rows[k].coeffs)
                b[e.col] += e.coeff;
            CHECK(a == b);
            CHECK(lp.ge_rows[k].rhs == 0.0);
        }
    }
}

TEST_CASE("relaxation bound matches a direct solve of the same program") {
    const Graph graphs[] = {path3(), complete(4), conekit::erdos_renyi(6, 0.5, 5),
                            conekit::erdos_renyi(8, 0.4, 11)};
    for (const Graph& g : graphs) {
        for (const Approx approx : {Approx::DD, Approx::SDB}) {
            if (approx == Approx::SDB && g.n > 6)
                continue; // keep the direct solve small
            Relaxation r(g, approx);
            const auto [x, bound] = conekit::solve_relaxation(r);

            const LinearProgram lp = r.materialize();
            const conekit::LpSolution direct = conekit::solve(lp);
            REQUIRE(direct.status == conekit::LpStatus::Optimal);
            CHECK(bound == doctest::Approx(direct.objective_value).epsilon(1e-8));

            // The recovered matrix is an optimizer: feasible for every
            // row of the program and achieving the bound.
            double obj = 0.0;
            for (const auto& e : lp.objective)
                obj += e.coeff * x.packed()[e.col];
            CHECK(obj == doctest::Approx(bound).epsilon(1e-7));

            double trace_row = 0.0;
            for (const auto& e : lp.eq_rows[0].coeffs)
                trace_row += e.coeff * x.packed()[e.col];
            CHECK(trace_row == doctest::Approx(1.0).epsilon(1e-7));

            for (const auto& row : lp.ge_rows) {
                double s = 0.0;
                for (const auto& e : row.coeffs)
                    s += e.coeff * x.packed()[e.col];
                CHECK(s >= -1e-8);
            }
            for (double v : x.packed())
                CHECK(v >= -1e-9);
        }
    }
}

TEST_CASE("fixed bound values") {
    SUBCASE("empty graphs reach the vertex count") {
        for (int n : {3, 5}) {
            for (const Approx approx : {Approx::DD, Approx::SDB}) {
                Relaxation r(empty_graph(n), approx);
                const auto [x, bound] = conekit::solve_relaxation(r);
                CHECK(bound == doctest::Approx(double(n)).epsilon(1e-9));
            }
        }
    }
    SUBCASE("complete graphs reach one") {
        for (int n : {3, 5}) {
            for (const Approx approx : {Approx::DD, Approx::SDB}) {
                Relaxation r(complete(n), approx);
                const auto [x, bound] = conekit::solve_relaxation(r);
                CHECK(bound == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
    SUBCASE("regression anchors on a seeded random graph") {
        const Graph g = conekit::erdos_renyi(10, 0.5, 3);
        const auto dd = conekit::solve_relaxation(Relaxation(g, Approx::DD));
        CHECK(dd.second == doctest::Approx(8.0).epsilon(1e-6));
        const auto sdb = conekit::solve_relaxation(Relaxation(g, Approx::SDB));
        CHECK(sdb.second == doctest::Approx(5.911269837).epsilon(1e-6));
    }
}

TEST_CASE("cutting plane logs are monotone and valid") {
    StopCriteria stop;
    stop.max_iterations = 8;
    const std::uint64_t seeds[] = {21, 22};
    for (const std::uint64_t seed : seeds) {
        const int n = seed == 21 ? 12 : 16;
        const Graph g = conekit::erdos_renyi(n, 0.5, seed);
        const int alpha = conekit::stability_number(g);
        for (const Approx approx : {Approx::DD, Approx::SDB}) {
            const auto logs = conekit::cutting_plane(g, approx, stop);
            REQUIRE(!logs.empty());
            REQUIRE(logs.size() <= 8);
            CAPTURE(seed);
            for (size_t k = 0; k < logs.size(); ++k) {
                CHECK(logs[k].iteration == static_cast<int>(k));
                CHECK(logs[k].bound >= alpha - 1e-6);
                if (k > 0) {
                    CHECK(logs[k].bound <= logs[k - 1].bound + 1e-7);
                    CHECK(logs[k].elapsed_seconds >= logs[k - 1].elapsed_seconds);
                }
            }
            CHECK(logs.back().cuts_added == 0);
            for (size_t k = 0; k + 1 < logs.size(); ++k) {
                CHECK(logs[k].cuts_added >= 1);
                CHECK(logs[k].cuts_added <= 2);
            }
        }
    }
}

TEST_CASE("the multi-parameter cone never loosens the bound") {
    for (int t = 0; t < 50; ++t) {
        const int n = 10 + 30 * t / 49;
        const double p = 0.3 + 0.1 * (t % 5);
        const Graph g = conekit::erdos_renyi(n, p, 1000 + t);
        const auto dd = conekit::solve_relaxation(Relaxation(g, Approx::DD));
        const auto sdb = conekit::solve_relaxation(Relaxation(g, Approx::SDB));
        CAPTURE(t);
        CHECK(sdb.second <= dd.second + 1e-7);
    }
}

TEST_CASE("cuts strictly separate the optimizer that produced them") {
    const Graph g = conekit::erdos_renyi(12, 0.5, 5);
    Relaxation r(g, Approx::DD);
    double prev = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 5; ++round) {
        const auto [x, bound] = conekit::solve_relaxation(r);
        CHECK(bound <= prev + 1e-7);
        prev = bound;
        const auto cuts = conekit::generate_cuts(x, 2, 1e-6);
        if (cuts.empty())
            break;
        for (const auto& d : cuts) {
            CHECK(quad_form(x, d) < -1e-6);
            r.add_cut(d);
        }
    }
    CHECK(r.num_cuts() > 0);
}

TEST_CASE("cut extraction from eigenvectors") {
    SUBCASE("psd input yields nothing") {
        CHECK(conekit::generate_cuts(SymMatrix::identity(3)).empty());
    }
    SUBCASE("negative eigenvalues come out most negative first") {
        SymMatrix x(3);
        x.set(0, 0, 1.0);
        x.set(1, 1, -1.0);
        x.set(2, 2, -2.0);
        const auto cuts = conekit::generate_cuts(x, 2, 1e-6);
        REQUIRE(cuts.size() == 2);
        CHECK(std::abs(cuts[0][2]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(cuts[0][0]) <= 1e-12);
        CHECK(std::abs(cuts[0][1]) <= 1e-12);
        CHECK(std::abs(cuts[1][1]) == doctest::Approx(1.0).epsilon(1e-12));

        CHECK(conekit::generate_cuts(x, 1, 1e-6).size() == 1);
    }
    SUBCASE("only eigenvalues below the tolerance count") {
        SymMatrix x(2);
        x.set(0, 0, 1.0);
        x.set(1, 1, -1e-8);
        CHECK(conekit::generate_cuts(x, 2, 1e-6).empty());
        CHECK(conekit::generate_cuts(x, 2, 1e-9).size() == 1);

        SymMatrix one_neg(3);
        one_neg.set(0, 0, 1.0);
        one_neg.set(1, 1, 2.0);
        one_neg.set(2, 2, -1.0);
        CHECK(conekit::generate_cuts(one_neg, 2, 1e-6).size() == 1);
    }
    SUBCASE("cuts are unit vectors") {
        SymMatrix x(4);
        x.set(0, 1, 1.0);
        x.set(2, 3, -2.0);
        for (const auto& d : conekit::generate_cuts(x, 2, 1e-6)) {
            double ss = 0.0;
            for (double v : d)
                ss += v * v;
            CHECK(std::sqrt(ss) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(conekit::generate_cuts(SymMatrix(2), 0, 1e-6),
                        std::invalid_argument);
        CHECK_THROWS_AS(conekit::generate_cuts(SymMatrix(2), 2, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("stop criteria") {
    SUBCASE("validation") {
        StopCriteria bad;
        bad.psd_tol = 0.0;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

        StopCriteria none;
        none.max_iterations = 0;
        none.time_limit_seconds = 0.0;
        CHECK_THROWS_AS(none.validate(), std::invalid_argument);

        StopCriteria time_only;
        time_only.max_iterations = 0;
        time_only.time_limit_seconds = 1.0;
        CHECK_NOTHROW(time_only.validate());

        StopCriteria defaults;
        CHECK_NOTHROW(defaults.validate());
    }
    SUBCASE("iteration limit cuts the run short") {
        StopCriteria one;
        one.max_iterations = 1;
        const auto logs =
            conekit::cutting_plane(conekit::erdos_renyi(10, 0.5, 3), Approx::DD, one);
        REQUIRE(logs.size() == 1);
        CHECK(logs[0].iteration == 0);
        CHECK(logs[0].cuts_added == 0);
        CHECK(logs[0].bound == doctest::Approx(8.0).epsilon(1e-6));
    }
    SUBCASE("a tiny time limit stops after the first iterate") {
        StopCriteria tick;
        tick.max_iterations = 0;
        tick.time_limit_seconds = 1e-9;
        const auto logs =
            conekit::cutting_plane(conekit::erdos_renyi(10, 0.5, 3), Approx::DD, tick);
        REQUIRE(logs.size() == 1);
        CHECK(logs[0].cuts_added == 0);
    }
    SUBCASE("converged runs end with a near psd iterate") {
        StopCriteria stop;
        stop.max_iterations = 60;
        const auto logs =
            conekit::cutting_plane(conekit::erdos_renyi(10, 0.5, 3), Approx::SDB, stop);
        REQUIRE(!logs.empty());
        CHECK(logs.back().lambda_min >= -1e-6);
        CHECK(logs.back().bound >= 5.0 - 1e-6); // alpha of this graph is 5
    }
}

TEST_CASE("cutting plane error carries the partial log") {
    std::vector<IterationLog> partial(2);
    partial[1].iteration = 1;
    partial[1].bound = 3.5;
    const conekit::CuttingPlaneError err("midway", partial);
    CHECK(std::string(err.what()) == "midway");
    REQUIRE(err.partial_log.size() == 2);
    CHECK(err.partial_log[1].bound == 3.5);
}

TEST_CASE("relative gap") {
    CHECK(conekit::gap(5.0, 5.0) == 0.0);
    CHECK(conekit::gap(0.0, 5.0) == 100.0);
    CHECK(conekit::gap(4.0, 5.0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(conekit::gap(6.0, 5.0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(conekit::gap(1.0, -2.0) == doctest::Approx(150.0).epsilon(1e-12));
    CHECK_THROWS_AS(conekit::gap(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(conekit::gap(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(conekit::gap(1.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("iteration logs serialize and parse") {
    std::vector<IterationLog> logs(2);
    logs[0].iteration = 0;
    logs[0].bound = 8.0;
    logs[0].lambda_min = -0.25;
    logs[0].cuts_added = 2;
    logs[0].elapsed_seconds = 0.125;
    logs[1].iteration = 1;
    logs[1].bound = 7.4062500000000107;
    logs[1].lambda_min = -3.5e-7;
    logs[1].cuts_added = 0;
    logs[1].elapsed_seconds = 0.25;

    SUBCASE("csv text is frozen for clean values") {
        const std::string csv = conekit::logs_to_csv(logs);
        CHECK(csv.rfind("iter,bound,lambda_min,cuts_added,elapsed_s\n"
                        "0,8,-0.25,2,0.125\n",
                        0) == 0);
    }
    SUBCASE("csv round-trip is exact") {
        const auto back = conekit::logs_from_csv(conekit::logs_to_csv(logs));
        REQUIRE(back.size() == logs.size());
        for (size_t k = 0; k < logs.size(); ++k) {
            CHECK(back[k].iteration == logs[k].iteration);
            CHECK(back[k].bound == logs[k].bound);
            CHECK(back[k].lambda_min == logs[k].lambda_min);
            CHECK(back[k].cuts_added == logs[k].cuts_added);
            CHECK(back[k].elapsed_seconds == logs[k].elapsed_seconds);
        }
    }
    SUBCASE("csv round-trips a real run exactly") {
        StopCriteria stop;
        stop.max_iterations = 4;
        const auto run =
            conekit::cutting_plane(conekit::erdos_renyi(8, 0.5, 2), Approx::DD, stop);
        const auto back = conekit::logs_from_csv(conekit::logs_to_csv(run));
        REQUIRE(back.size() == run.size());
        for (size_t k = 0; k < run.size(); ++k) {
            CHECK(back[k].bound == run[k].bound);
            CHECK(back[k].lambda_min == run[k].lambda_min);
            CHECK(back[k].elapsed_seconds == run[k].elapsed_seconds);
        }
    }
    SUBCASE("json carries the same keys") {
        const auto arr = nlohmann::json::parse(conekit::logs_to_json(logs));
        REQUIRE(arr.is_array());
        REQUIRE(arr.size() == 2);
        CHECK(arr[0]["iter"] == 0);
        CHECK(arr[0]["bound"] == 8.0);
        CHECK(arr[0]["lambda_min"] == -0.25);
        CHECK(arr[0]["cuts_added"] == 2);
        CHECK(arr[0]["elapsed_s"] == 0.125);
        CHECK(arr[1]["bound"].get<double>() == logs[1].bound);
    }
    SUBCASE("carriage returns and blank lines are tolerated") {
        const auto back = conekit::logs_from_csv(
            "iter,bound,lambda_min,cuts_added,elapsed_s\r\n\r\n0,8,-0.25,2,0.125\r\n");
        REQUIRE(back.size() == 1);
        CHECK(back[0].bound == 8.0);
    }
    SUBCASE("malformed csv raises with the line number") {
        CHECK_THROWS_AS(conekit::logs_from_csv(""), ParseError);
        CHECK_THROWS_AS(conekit::logs_from_csv("wrong,header\n"), ParseError);
        try {
            conekit::logs_from_csv("iter,bound,lambda_min,cuts_added,elapsed_s\n1,2,3\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
        const std::string header = "iter,bound,lambda_min,cuts_added,elapsed_s\n";
        CHECK_THROWS_AS(conekit::logs_from_csv(header + "x,2,3,4,5\n"), ParseError);
        CHECK_THROWS_AS(conekit::logs_from_csv(header + "1.5,2,3,4,5\n"), ParseError);
        CHECK_THROWS_AS(conekit::logs_from_csv(header + "1,zz,3,4,5\n"), ParseError);
        CHECK_THROWS_AS(conekit::logs_from_csv(header + "1,inf,3,4,5\n"), ParseError);
        CHECK_THROWS_AS(conekit::logs_from_csv(header + "1,2,3,4,5,6\n"), ParseError);
    }
}
