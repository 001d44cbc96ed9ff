#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtrees/coarse.hpp"
#include "qtrees/report.hpp"
#include "qtrees/tracks.hpp"
#include "qtrees/tree.hpp"

namespace qtrees::quasiedges {

/** Finite tree with a designated boundary set standing in for its end space. */
struct BoundedTree {
    FiniteTree tree;
    std::vector<int> boundary; // sorted, nonempty

    static BoundedTree from_ball(const bassserre::TreeBall& ball); // truncated set, else leaves
    static BoundedTree from_tree(FiniteTree t);                    // boundary = leaves
    static BoundedTree with_boundary(FiniteTree t, std::vector<int> boundary);
};

/** Partition of the boundary into two nonempty parts, stored canonically. */
struct QuasiEdge {
    std::vector<int> o; // sorted; contains the smallest boundary id

    static QuasiEdge of(const BoundedTree& t, const std::vector<int>& side);
    std::vector<int> other(const BoundedTree& t) const;
    bool operator==(const QuasiEdge& q) const { return o == q.o; }
    bool operator<(const QuasiEdge& q) const { return o < q.o; }
};

/** Union of all geodesics between pairs of O; sorted vertex set. */
std::vector<int> hull(const BoundedTree& t, const std::vector<int>& o);

struct CoreInfo {
    std::vector<int> core;   // N1(Hull O) cap N1(Hull O'); may be empty
    long long constant = 0;  // diameter of the core (0 when empty)
    int canonical_point = 0; // smallest core vertex, or the bridging-path midpoint
};

CoreInfo qe_core(const BoundedTree& t, const QuasiEdge& qe);
long long qe_constant(const BoundedTree& t, const QuasiEdge& qe);

/** Edge (index into tree.edges) splitting the boundary exactly as qe, if any. */
std::optional<int> true_edge_partition(const BoundedTree& t, const QuasiEdge& qe);

/** Boundary partitions induced by deleting each edge (where both sides meet the boundary). */
std::vector<QuasiEdge> all_edge_partitions(const BoundedTree& t);

struct VertexMap {
    std::string name;
    std::vector<int> img; // total self map of the tree's vertices
};

/**
 * Image quasi-edge under a vertex self-map: boundary points go to the
 * nearest boundary vertex of their image (ties to the smallest id);
 * contested targets go with the majority of their preimages, ties to O.
 */
QuasiEdge pushforward(const BoundedTree& t, const VertexMap& f, const QuasiEdge& qe);

struct NerveResult {
    std::vector<QuasiEdge> nodes;
    std::vector<std::vector<int>> cores; // core set (or bridging midpoint) per node
    std::vector<int> core_point;         // canonical position in t per node
    std::vector<std::pair<int, int>> edges;
    bool connected = false;
    long long degenerate_skipped = 0;
    bool fit_defined = false;
    coarse::QiFit fit; // node-to-core-point correspondence into t
    Report report() const;
};

/** Nodes joined when their cores are within Hausdorff distance D in t. */
NerveResult nerve_from_quasi_edges(const BoundedTree& t, const std::vector<QuasiEdge>& qes,
                                   long long threshold_d, const std::vector<Rat>& k_grid);

/** Orbit of qe0 under words of length <= L in the generators, then the nerve. */
NerveResult orbit_nerve_graph(const BoundedTree& t, const QuasiEdge& qe0,
                              const std::vector<VertexMap>& generators, int word_len,
                              long long threshold_d, const std::vector<Rat>& k_grid);

struct RetreeOptions {
    int cycle_fill_bound = 12;
    long long cycle_budget = 200000;
    tracks::FamilyOptions family{1, 6, 10000000}; // essential_min, weight_cap, node_budget
    std::vector<Rat> k_grid = {Rat(1), Rat(3, 2), Rat(2), Rat(5, 2), Rat(3)};
};

struct RetreeResult {
    tracks::TriComplex complex;
    int h1 = 0;
    tracks::FamilyResult family;
    tracks::DualGraph dual;
    bool dual_is_tree = false;
    bool fit_defined = false;
    coarse::QiFit fit; // dual-tree nodes into t via core points
    Report report() const;
};

/**
 * Cones off the short cycles of the nerve graph, demands simple
 * connectivity, cuts along a maximal essential track family, and returns
 * the dual graph fitted back to the tree.
 */
RetreeResult retree(const BoundedTree& t, const NerveResult& y1, const RetreeOptions& opts = {});

} // namespace qtrees::quasiedges
