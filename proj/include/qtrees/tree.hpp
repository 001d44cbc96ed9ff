#pragma once

#include <string>
#include <vector>

#include "qtrees/bassserre.hpp"

namespace qtrees {

/** Undirected finite tree on vertices 0..n-1 with O(depth) path queries. */
struct FiniteTree {
    int n = 0;
    int root = 0;
    std::vector<std::vector<int>> adj;
    std::vector<int> parent; // -1 at the root
    std::vector<int> depth;
    std::vector<std::pair<int, int>> edges; // (parent, child), creation order

    static FiniteTree from_edges(int n, const std::vector<std::pair<int, int>>& edges, int root = 0);
    static FiniteTree from_ball(const bassserre::TreeBall& ball);

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    int dist(int u, int v) const;
    std::vector<int> path(int u, int v) const; // inclusive endpoints
    std::vector<int> leaves() const;
};

} // namespace qtrees
