#include "conekit/graphio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "conekit/errors.hpp"
#include "conekit/rng.hpp"

namespace conekit {

namespace {

void normalize_edges(Graph& g) {
    for (auto& e : g.edges) {
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
}

void check_vertex_count(int n, const char* who) {
    if (n < 0) throw std::invalid_argument(std::string(who) + ": negative vertex count");
}

} // namespace

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
    check_vertex_count(n, "erdos_renyi");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("erdos_renyi: p must lie in [0, 1]");

    Graph g;
    g.n = n;
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) g.edges.emplace_back(i, j);
    return g;
}

Graph parse_dimacs(const std::string& text) {
    Graph g;
    bool saw_problem = false;
    int declared_edges = 0;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;

        if (tag == "c") continue;

        if (tag == "p") {
            if (saw_problem)
                throw ParseError("duplicate problem line", lineno);
            std::string fmt;
            long n = 0, m = 0;
            if (!(ls >> fmt >> n >> m) || fmt != "edge" || n < 0 || m < 0)
                throw ParseError("malformed problem line, expected 'p edge <n> <m>'", lineno);
            std::string extra;
            if (ls >> extra)
                throw ParseError("trailing tokens on problem line", lineno);
            saw_problem = true;
            g.n = static_cast<int>(n);
            declared_edges = static_cast<int>(m);
            g.edges.reserve(declared_edges);
            continue;
        }

        if (tag == "e") {
            if (!saw_problem)
                throw ParseError("edge before problem line", lineno);
            long a = 0, b = 0;
            if (!(ls >> a >> b))
                throw ParseError("malformed edge line, expected 'e <i> <j>'", lineno);
            std::string extra;
            if (ls >> extra)
                throw ParseError("trailing tokens on edge line", lineno);
            if (a < 1 || a > g.n || b < 1 || b > g.n)
                throw ParseError("edge endpoint out of range", lineno);
            if (a == b)
                throw ParseError("self-loop not allowed", lineno);
            g.edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
            continue;
        }

        throw ParseError("unknown line tag '" + tag + "'", lineno);
    }

    if (!saw_problem)
        throw ParseError("missing problem line", 0);
    normalize_edges(g);
    return g;
}

std::string write_dimacs(const Graph& g) {
    Graph copy = g;
    check_vertex_count(copy.n, "write_dimacs");
    normalize_edges(copy);

    std::string out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "p edge %d %d\n", copy.n, copy.num_edges());
    out += buf;
    for (const auto& e : copy.edges) {
        if (e.first < 0 || e.second >= copy.n)
            throw std::invalid_argument("write_dimacs: edge endpoint out of range");
        std::snprintf(buf, sizeof buf, "e %d %d\n", e.first + 1, e.second + 1);
        out += buf;
    }
    return out;
}

Graph graph_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }

    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw ParseError("expected an object with an integer field 'n'", 0);
    Graph g;
    g.n = j["n"].get<int>();
    check_vertex_count(g.n, "graph_from_json");

    if (j.contains("edges")) {
        if (!j["edges"].is_array())
            throw ParseError("'edges' must be an array of pairs", 0);
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2 ||
                !e[0].is_number_integer() || !e[1].is_number_integer())
                throw ParseError("each edge must be a pair of integers", 0);
            const long a = e[0].get<long>();
            const long b = e[1].get<long>();
            if (a < 1 || a > g.n || b < 1 || b > g.n)
                throw ParseError("edge endpoint out of range", 0);
            if (a == b)
                throw ParseError("self-loop not allowed", 0);
            g.edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
        }
    }
    normalize_edges(g);
    return g;
}

std::string graph_to_json(const Graph& g) {
    Graph copy = g;
    check_vertex_count(copy.n, "graph_to_json");
    normalize_edges(copy);

    nlohmann::json j;
    j["n"] = copy.n;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : copy.edges)
        j["edges"].push_back({e.first + 1, e.second + 1});
    return j.dump();
}

SymMatrix adjacency(const Graph& g) {
    check_vertex_count(g.n, "adjacency");
    SymMatrix a(g.n);
    for (const auto& e : g.edges) {
        if (e.first < 0 || e.first >= g.n || e.second < 0 || e.second >= g.n)
            throw std::invalid_argument("adjacency: edge endpoint out of range");
        if (e.first == e.second)
            throw std::invalid_argument("adjacency: self-loop not allowed");
        a.set(e.first, e.second, 1.0);
    }
    return a;
}

namespace {

// Returns the size of the largest stable set inside `candidates` when
// that beats `best_so_far`; any value <= best_so_far otherwise.
int max_stable(const std::vector<std::uint64_t>& nbr, std::uint64_t candidates,
               int best_so_far) {
    if (candidates == 0) return 0;
    if (__builtin_popcountll(candidates) <= best_so_far) return 0;

    // Branch on a highest-degree candidate: either it is excluded, or it
    // is taken and its whole neighborhood drops out.
    int pick = -1, pick_deg = -1;
    for (std::uint64_t rest = candidates; rest;) {
        const int v = __builtin_ctzll(rest);
        rest &= rest - 1;
        const int deg = __builtin_popcountll(nbr[v] & candidates);
        if (deg > pick_deg) {
            pick_deg = deg;
            pick = v;
        }
    }

    const std::uint64_t bit = std::uint64_t(1) << pick;
    int best = max_stable(nbr, candidates & ~bit, best_so_far);
    const int with_pick =
        1 + max_stable(nbr, candidates & ~(nbr[pick] | bit), std::max(best, best_so_far) - 1);
    return std::max(best, with_pick);
}

} // namespace

int stability_number(const Graph& g) {
    check_vertex_count(g.n, "stability_number");
    if (g.n > 40)
        throw std::invalid_argument("stability_number: exact search capped at 40 vertices");
    if (g.n == 0) return 0;

    std::vector<std::uint64_t> nbr(g.n, 0);
    for (const auto& e : g.edges) {
        if (e.first < 0 || e.first >= g.n || e.second < 0 || e.second >= g.n)
            throw std::invalid_argument("stability_number: edge endpoint out of range");
        if (e.first == e.second)
            throw std::invalid_argument("stability_number: self-loop not allowed");
        nbr[e.first] |= std::uint64_t(1) << e.second;
        nbr[e.second] |= std::uint64_t(1) << e.first;
    }

    const std::uint64_t all =
        g.n == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << g.n) - 1;
    return max_stable(nbr, all, 0);
}

} // namespace conekit
