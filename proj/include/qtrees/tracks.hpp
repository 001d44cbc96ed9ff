#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qtrees/report.hpp"

namespace qtrees::tracks {

/**
 * Triangulated 2-complex: ordered vertex triples with implied edges, plus
 * optional bare (triangle-free) edges. Edges may lie in any number of
 * triangles.
 */
struct TriComplex {
    std::vector<std::string> vertex_ids; // index = vertex number
    std::map<std::string, int> vertex_index;

    struct Tri {
        std::string id;
        std::array<int, 3> v;
    };
    std::vector<Tri> triangles; // sorted by id

    struct Edge {
        int u = 0, v = 0;        // u < v
        std::string bare_id;     // nonempty only for declared bare edges
        std::vector<int> tris;   // triangle indices containing this edge
    };
    std::vector<Edge> edges; // sorted by (u, v)
    std::map<std::pair<int, int>, int> edge_index;

    int edge_of(int a, int b) const;

    static TriComplex build(const std::vector<std::string>& vertices,
                            const std::vector<std::pair<std::string, std::array<std::string, 3>>>& tris,
                            const std::vector<std::pair<std::string, std::pair<std::string, std::string>>>&
                                bare_edges = {});
};

/** Empty result iff triangles have distinct vertices and the complex is connected. */
std::vector<std::string> validate_complex(const TriComplex& c);

/**
 * Normal-coordinate pattern: nonnegative corner coordinates per triangle
 * (indexed like the triangle's vertex order) and weights on bare edges.
 */
struct NormalPattern {
    std::string over = "complex";
    std::vector<std::array<long long, 3>> corners; // per triangle
    std::vector<long long> bare;                   // per edge index; nonzero only on bare edges
};

NormalPattern zero_pattern(const TriComplex& c);
std::vector<std::string> validate_pattern(const TriComplex& c, const NormalPattern& p);

std::vector<long long> edge_weights(const TriComplex& c, const NormalPattern& p);
long long total_weight(const TriComplex& c, const NormalPattern& p);
NormalPattern add_patterns(const TriComplex& c, const NormalPattern& a, const NormalPattern& b);
bool same_coordinates(const NormalPattern& a, const NormalPattern& b);
std::string coordinate_key(const TriComplex& c, const NormalPattern& p);

/** Connected components of the embedded 1-complex, as sub-patterns summing to p. */
std::vector<NormalPattern> pattern_components(const TriComplex& c, const NormalPattern& p);

/** Complement of the pattern: edge segments and triangle regions merged by adjacency. */
struct Complement {
    int n_regions = 0;
    std::vector<int> region_of_vertex;              // complex vertex -> region
    std::vector<std::vector<int>> region_vertices;  // region -> sorted complex vertices
    std::vector<std::vector<int>> segment_region;   // edge -> (w_e + 1) segment regions
};

Complement complement_components(const TriComplex& c, const NormalPattern& p);

struct EssentialCheck {
    int component_count = 0;
    bool non_separating = false; // complement count != 2
    bool essential = false;      // exactly 2 sides, both with >= m vertices
    std::vector<long long> side_vertex_counts;
};

/** Essentiality of a single track in c, ignoring any other tracks. */
EssentialCheck is_essential(const TriComplex& c, const NormalPattern& track, long long m);

struct DualGraph {
    int nodes = 0;
    struct DEdge {
        int a = 0, b = 0;
        int track = 0;
    };
    std::vector<DEdge> edges;
    std::vector<int> flagged_tracks; // tracks bordering != 2 regions
    bool is_tree() const;
};

/** Nodes are complement components; each track joins the regions it borders. */
DualGraph dual_graph(const TriComplex& c, const NormalPattern& p);

/** All connected tracks of total edge weight <= cap, in (weight, lex) order. */
std::vector<NormalPattern> enumerate_tracks(const TriComplex& c, long long weight_cap,
                                            long long node_budget = 10000000);

struct FamilyOptions {
    long long essential_min = 1;
    long long weight_cap = 8;
    long long node_budget = 10000000;
};

struct FamilyResult {
    NormalPattern family;
    std::vector<NormalPattern> tracks;
    long long candidates = 0;
    long long rejected_inessential = 0;
    long long rejected_duplicate = 0;
    long long rejected_relative = 0;
    long long non_separating_seen = 0;
    long long max_final_region_vertices = 0;
    bool all_final_regions_below_min = false;
    Report report(const TriComplex& c) const;
};

/**
 * Greedy maximal family of pairwise disjoint tracks: a candidate is added
 * when it is essential on its own, not a coordinate duplicate, and every
 * family member still borders two regions holding at least the threshold
 * number of vertices after the addition.
 */
FamilyResult maximal_essential_family(const TriComplex& c, const FamilyOptions& opts = {});

/** Rank of H_1 over Q from exact boundary-matrix ranks. */
int h1_rank(const TriComplex& c);

TriComplex parse_cx2(const std::string& text);
std::string serialize_cx2(const TriComplex& c);
NormalPattern parse_npat(const std::string& text, const TriComplex& c);
std::string serialize_npat(const TriComplex& c, const NormalPattern& p);

} // namespace qtrees::tracks
