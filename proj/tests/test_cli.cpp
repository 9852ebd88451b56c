#include "doctest.h"

#include "conekit/graphio.hpp"
#include "conekit/lp.hpp"
#include "conekit/stableset.hpp"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const char* cli_path() {
    return CONEKIT_CLI_PATH;
}

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("conekit-cli-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string("\"") + cli_path() + "\" " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("gen-graph writes deterministic dimacs files") {
    const fs::path f1 = work_dir() / "g1.col";
    const fs::path f2 = work_dir() / "g2.col";
    const RunResult a = run("gen-graph --er 12,0.5,7 --out " + f1.string());
    const RunResult b = run("gen-graph --er 12,0.5,7 --out " + f2.string());
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(slurp(f1) == slurp(f2));

    const conekit::Graph expect = conekit::erdos_renyi(12, 0.5, 7);
    char head[64];
    std::snprintf(head, sizeof head, "n 12 m %d\n", expect.num_edges());
    CHECK(a.out == head);

    const conekit::Graph parsed = conekit::parse_dimacs(slurp(f1));
    CHECK(parsed.n == expect.n);
    CHECK(parsed.edges == expect.edges);

    SUBCASE("failures exit with code 2") {
        CHECK(run("gen-graph --er 12,0.5 --out " + f1.string()).code == 2);
        CHECK(run("gen-graph --er 12,x,1 --out " + f1.string()).code == 2);
        const RunResult bad =
            run("gen-graph --er 5,0.5,1 --out /nonexistent-dir-zz/g.col");
        CHECK(bad.code == 2);
        CHECK(contains(bad.err, "error:"));
    }
}

TEST_CASE("solve reports bounds and writes logs") {
    const fs::path k5 = work_dir() / "k5.col";
    conekit::Graph g;
    g.n = 5;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            g.edges.emplace_back(i, j);
    spit(k5, conekit::write_dimacs(g));

    SUBCASE("a complete graph settles at one") {
        const fs::path log = work_dir() / "k5.csv";
        const RunResult r = run("solve --method cpdd --dimacs " + k5.string() +
                                " --max-iters 1 --ref-bound 1 --out " + log.string());
        CHECK(r.code == 0);
        CHECK(contains(r.out, "method cpdd\n"));
        CHECK(contains(r.out, "graph n=5 m=10\n"));
        CHECK(contains(r.out, "final bound 1.000000\n"));
        CHECK(contains(r.out, "iterations 1\n"));
        CHECK(contains(r.out, "final gap 0.0000%\n"));

        const auto logs = conekit::logs_from_csv(slurp(log));
        REQUIRE(logs.size() == 1);
        CHECK(logs[0].bound == doctest::Approx(1.0).epsilon(1e-9));

        const auto arr =
            nlohmann::json::parse(slurp(work_dir() / "k5.json"));
        REQUIRE(arr.is_array());
        CHECK(arr.size() == 1);
        CHECK(arr[0]["bound"].get<double>() == logs[0].bound);
    }

    SUBCASE("the json log lands next to non-csv paths too") {
        const fs::path log = work_dir() / "k5log.txt";
        CHECK(run("solve --method cpdd --dimacs " + k5.string() +
                  " --max-iters 1 --out " + log.string())
                  .code == 0);
        CHECK(fs::exists(work_dir() / "k5log.txt.json"));
    }

    SUBCASE("random graph source") {
        const RunResult r = run("solve --method cpsdb --er 8,0.5,2 --max-iters 2");
        CHECK(r.code == 0);
        CHECK(contains(r.out, "method cpsdb\n"));
        CHECK(contains(r.out, "graph n=8"));
    }

    SUBCASE("mps export matches the library rendering") {
        const fs::path mps = work_dir() / "k5.mps";
        const RunResult r =
            run("solve --method cpdd --dimacs " + k5.string() + " --mps " + mps.string());
        CHECK(r.code == 0);
        CHECK(contains(r.out, "wrote "));
        const auto relax = conekit::build_relaxation(g, conekit::Approx::DD);
        CHECK(slurp(mps) == conekit::write_mps(relax.materialize(), "STABLESET"));
    }

    SUBCASE("usage errors exit with code 2") {
        CHECK(run("solve --method cpxx --er 5,0.5,1").code == 2);
        CHECK(run("solve --method cpdd").code == 2);
        CHECK(run("solve --method cpdd --er 5,0.5,1 --dimacs " + k5.string()).code == 2);
        CHECK(run("solve --method cpdd --er 5,0.5,1 --max-iters 0").code == 2);
        CHECK(run("solve --method cpdd --dimacs /missing-file.col").code == 2);
    }
}

TEST_CASE("check evaluates membership tests") {
    const fs::path id2 = work_dir() / "id2.json";
    spit(id2, R"({"n": 2, "upper": [1, 0, 1]})");
    const fs::path ones3 = work_dir() / "ones3.json";
    spit(ones3, R"({"n": 3, "upper": [1, 1, 1, 1, 1, 1]})");
    const fs::path sdd2 = work_dir() / "sdd2.json";
    spit(sdd2, R"({"n": 2, "upper": [1, 2, 5]})");
    const fs::path neg2 = work_dir() / "neg2.json";
    spit(neg2, R"({"n": 2, "upper": [-1, 0, -1]})");

    SUBCASE("verdicts drive the exit code") {
        const RunResult dd = run("check " + id2.string() + " --test dd");
        CHECK(dd.code == 0);
        CHECK(dd.out.rfind("true\n", 0) == 0);
        CHECK(contains(dd.out, "min row margin"));

        const RunResult sdd = run("check " + ones3.string() + " --test sdd");
        CHECK(sdd.code == 1);
        CHECK(sdd.out.rfind("false\n", 0) == 0);

        CHECK(run("check " + sdd2.string() + " --test sdd").code == 0);
        CHECK(run("check " + sdd2.string() + " --test dd").code == 1);

        const RunResult psd = run("check " + ones3.string() + " --test psd");
        CHECK(psd.code == 0);
        CHECK(contains(psd.out, "lambda_min"));
    }

    SUBCASE("cone membership with certificates") {
        const RunResult member = run("check " + id2.string() + " --test cone-dd");
        CHECK(member.code == 0);
        CHECK(member.out.rfind("true\n", 0) == 0);
        CHECK(contains(member.out, "decomposition over"));

        const RunResult outside = run("check " + neg2.string() + " --test cone-sdb");
        CHECK(outside.code == 1);
        CHECK(outside.out.rfind("false\n", 0) == 0);
        CHECK(contains(outside.out, "separating certificate"));
    }

    SUBCASE("bad inputs exit with code 2") {
        const fs::path broken = work_dir() / "broken.json";
        spit(broken, "{ not json");
        CHECK(run("check " + broken.string() + " --test dd").code == 2);
        const fs::path short_upper = work_dir() / "short.json";
        spit(short_upper, R"({"n": 2, "upper": [1, 0]})");
        CHECK(run("check " + short_upper.string() + " --test dd").code == 2);
        CHECK(run("check /missing.json --test dd").code == 2);
        CHECK(run("check " + id2.string() + " --test nope").code == 2);
        CHECK(run("check " + id2.string()).code == 2);
    }
}

TEST_CASE("bases prints the parameter table") {
    const RunResult r = run("bases --n 3");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("n 3 parameters 6 generators 21\n", 0) == 0);
    CHECK(contains(r.out, "alpha"));
    CHECK(contains(r.out, "cos_t3"));
    // alpha = -1 drops the diagonal generators, leaving rank 3 at n = 3.
    CHECK(contains(r.out, "\n            -1      3 "));
    CHECK(contains(r.out, "\n             1      6 "));

    int lines = 0;
    for (char c : r.out)
        lines += c == '\n' ? 1 : 0;
    CHECK(lines == 2 + 6);

    const RunResult pair = run("bases --n 3 --alpha 0.5,-2");
    CHECK(pair.code == 0);
    CHECK(pair.out.rfind("n 3 parameters 2 generators 9\n", 0) == 0);

    CHECK(run("bases --n 0").code == 2);
    CHECK(run("bases --n 3 --alpha x").code == 2);
    CHECK(run("bases --n 3 --alpha 1,1").code == 2);
}

TEST_CASE("report tabulates iteration logs") {
    const fs::path a = work_dir() / "a.csv";
    spit(a,
         "iter,bound,lambda_min,cuts_added,elapsed_s\n"
         "0,10,-0.5,2,0\n"
         "1,8,-0.25,0,1\n");
    const fs::path b = work_dir() / "b.csv";
    spit(b,
         "iter,bound,lambda_min,cuts_added,elapsed_s\n"
         "0,9,-0.1,0,0.5\n");

    const fs::path table = work_dir() / "table.csv";
    const RunResult r = run("report " + a.string() + " " + b.string() +
                            " --at 0.25,2 --ref-bound 8 --out " + table.string());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "t=0.25"));
    CHECK(contains(r.out, "t=2"));
    CHECK(contains(r.out, "a.csv"));
    CHECK(contains(r.out, "b.csv"));
    // a.csv: the t=2 checkpoint falls past the end of the log, so the
    // final bound is carried forward and flagged.
    CHECK(contains(r.out, "8.000000*"));
    CHECK(contains(r.out, "* last bound carried forward"));
    // b.csv starts at 0.5s, so t=0.25 has no value yet.
    CHECK(contains(r.out, "-"));

    const std::string csv = slurp(table);
    CHECK(csv.rfind("log,first,t=0.25,t=2,final,iters,gap_first,gap_final\n", 0) == 0);
    CHECK(contains(csv, "a.csv,10,10,8,8,2,25,0\n"));
    CHECK(contains(csv, "b.csv,9,,9,9,1,12.5,12.5\n"));

    CHECK(run("report /missing.csv").code == 2);
    const fs::path empty = work_dir() / "empty.csv";
    spit(empty, "iter,bound,lambda_min,cuts_added,elapsed_s\n");
    CHECK(run("report " + empty.string()).code == 2);
}

TEST_CASE("top level usage") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    const RunResult help = run("--help");
    CHECK(help.code == 0);
    CHECK(contains(help.out, "gen-graph"));
    CHECK(contains(help.out, "solve"));
}
