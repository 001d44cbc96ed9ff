#pragma once

#include <string>
#include <vector>

#include "qtrees/gog.hpp"
#include "qtrees/matrix.hpp"
#include "qtrees/report.hpp"

namespace qtrees::crossing {

struct DirectionEntry {
    std::string end_id;  // "<edge>:<end#>"
    QMatrix basis_rows;  // rank x n, rows span the image direction
    int rank = 0;
};

/** Directions of the edge-space pattern inside an abelian vertex space. */
struct DirectionPattern {
    int ambient = 0;
    std::vector<DirectionEntry> entries; // in (edge id, end) order
};

DirectionPattern directions_at(const gog::GraphOfGroups& g, const std::string& v);

/**
 * Whether an affine subspace with direction S crosses a hyperplane coset
 * with direction E: true iff S is not contained in E. Requires rank(E)=n-1.
 */
bool crosses(const QMatrix& s_rows, const QMatrix& e_rows);

enum class Summary { Empty, Connected, Disconnected };
std::string to_string(Summary s);

struct SummaryResult {
    Summary verdict = Summary::Empty;
    std::vector<std::string> witness;
    std::size_t hyperplane_direction_count = 0;
    Report report() const;
};

/**
 * Decides connectivity of the (infinite) coset crossing graph from the
 * finite direction data: two distinct hyperplane directions cross, and a
 * lower subspace not inside the single hyperplane direction crosses all
 * of its cosets.
 */
SummaryResult crossing_graph_summary(const gog::GraphOfGroups& g, const std::string& v);

struct OracleOptions {
    long long box_radius = 30;
    int cosets_per_end = 3;
    long long deep_threshold = 5;
    long long budget = 8000000; // box points x sampled cosets
};

struct OracleResult {
    bool conclusive = false;
    std::string reason; // why inconclusive
    bool empty = false;
    bool connected = false;
    std::vector<std::string> nodes;           // hyperplane coset labels
    std::vector<std::pair<int, int>> edges;   // indices into nodes
    Report report() const;
};

/**
 * Materializes finitely many cosets inside a box and decides crossing by
 * deep-side membership, independently of the direction-containment rule.
 */
OracleResult lattice_oracle_crossing_graph(const gog::GraphOfGroups& g, const std::string& v,
                                           const OracleOptions& opts = {});

} // namespace qtrees::crossing
