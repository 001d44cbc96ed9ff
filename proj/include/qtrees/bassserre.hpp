#pragma once

#include <string>
#include <vector>

#include "qtrees/gog.hpp"

namespace qtrees::bassserre {

struct TreeVertex {
    int id = 0;
    std::string over;
    int depth = 0;
    bool truncated = false;
};

struct TreeEdge {
    int id = 0;
    int parent = 0;
    int child = 0;
    std::string over_edge;
    int entering_end = 1; // end of the quotient edge attached at the child's quotient vertex
};

/** Finite radius-R portion of a Bass-Serre tree with quotient labels. */
struct TreeBall {
    int root = 0;
    int radius = 0;
    std::vector<TreeVertex> vertices; // id == position
    std::vector<TreeEdge> edges;      // id == position

    std::size_t truncated_count() const;
};

struct ExpandOptions {
    long long vertex_budget = 1000000;
};

/**
 * BFS expansion from a base vertex. Children are created in (edge id,
 * end number, copy number) order, so the result is byte-reproducible.
 * Throws InfiniteIndex when a reachable end has infinite index and
 * BudgetExceeded past the vertex budget. A depth-R vertex is flagged
 * truncated only when the local counts demand more children.
 */
TreeBall expand_ball(const gog::GraphOfGroups& g, const std::string& base, int radius,
                     const ExpandOptions& opts = {});

/** Direct re-check of the local-count invariant; empty result iff it holds. */
std::vector<std::string> validate_ball(const gog::GraphOfGroups& g, const TreeBall& b);

enum class Trichotomy { Bounded, LineLike, Bushy };
std::string to_string(Trichotomy t);

/** Reduces internally, then applies the valence criterion. */
Trichotomy classify_trichotomy(const gog::GraphOfGroups& g);

enum class OracleVerdict { Bounded, LineLike, Bushy, Inconclusive };
std::string to_string(OracleVerdict v);

/** Independent trichotomy oracle driven only by truncated-boundary growth. */
OracleVerdict oracle_classify_by_expansion(const gog::GraphOfGroups& g, int radius,
                                           const ExpandOptions& opts = {});

TreeBall parse_tree(const std::string& text);
std::string serialize_tree(const TreeBall& b);

} // namespace qtrees::bassserre
