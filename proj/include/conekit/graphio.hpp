#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "conekit/symmat.hpp"

namespace conekit {

// Simple undirected graph.  Vertices are 0-based internally; every text
// format below speaks 1-based, and the conversion happens only here.
// Edges are stored as (i, j) with i < j, sorted, without duplicates.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    int num_edges() const { return static_cast<int>(edges.size()); }
};

// G(n, p) sample: pairs (i, j), i < j, visited in lexicographic order,
// each kept iff the next uniform [0,1) draw from Rng(seed) is < p.
// Identical (n, p, seed) give identical graphs on every platform.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

// DIMACS text: "c" comments, one "p edge <n> <m>" line, "e <i> <j>"
// edges with 1-based endpoints.  Duplicate edges collapse; self-loops
// and malformed lines raise ParseError with the line number.
Graph parse_dimacs(const std::string& text);
std::string write_dimacs(const Graph& g);

// JSON form: {"n": 5, "edges": [[1,2], [2,5], ...]} with 1-based pairs.
Graph graph_from_json(const std::string& text);
std::string graph_to_json(const Graph& g);

// 0/1 adjacency matrix with zero diagonal.
SymMatrix adjacency(const Graph& g);

// Exact stability number by branch and bound on vertex bitsets: branch
// on a highest-degree remaining vertex, prune with the remaining-vertex
// count.  Guarded to n <= 40.
int stability_number(const Graph& g);

} // namespace conekit
