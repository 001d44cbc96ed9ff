#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtrees/matrix.hpp"

namespace qtrees::gog {

enum class Regime { Abstract, Abelian };

/** Subgroup index: a positive integer or infinity. Absorbing arithmetic. */
class Index {
public:
    Index() : v_(1) {}
    static Index infinite() { Index i; i.v_ = -1; return i; }
    static Index finite(long long v);

    bool is_infinite() const { return v_ < 0; }
    long long value() const;

    Index operator*(const Index& o) const;
    Index operator+(const Index& o) const;
    bool operator==(const Index& o) const { return v_ == o.v_; }
    bool operator!=(const Index& o) const { return v_ != o.v_; }

    std::string str() const { return is_infinite() ? "inf" : std::to_string(v_); }

private:
    long long v_;
};

/** Vertex or edge group: a dimension label (abstract) or a Z^rank (abelian). */
struct GroupSpec {
    int dim = 0;
};

/**
 * Edge-to-vertex injection. Abstract regime carries a declared index;
 * abelian regime carries an integer matrix with n_v rows and n_e columns
 * whose columns are the images of the edge-group basis vectors.
 */
struct InjectionSpec {
    std::optional<Index> declared;
    std::optional<QMatrix> matrix;
};

struct EdgeEnd {
    std::string vertex;
    InjectionSpec inj;
};

struct Edge {
    GroupSpec group;
    EdgeEnd ends[2];

    bool is_loop() const { return ends[0].vertex == ends[1].vertex; }
};

/** Finite decorated multigraph. Loops and parallel edges allowed. */
struct GraphOfGroups {
    Regime regime = Regime::Abstract;
    std::map<std::string, GroupSpec> vertices;
    std::map<std::string, Edge> edges;
};

/** Empty result iff all type invariants hold. Violations are data, not errors. */
std::vector<std::string> validate(const GraphOfGroups& g);

/**
 * DeclaredIndex returns its value. A matrix injection returns |det| when
 * square, INF when n_e < n_v. Throws InvalidInjection if rank-deficient.
 */
Index injection_index(const InjectionSpec& inj, int n_v, int n_e);

/** Index of one end of one edge (end is 0 or 1). */
Index end_index(const GraphOfGroups& g, const Edge& e, int end);

struct ReducedCheck {
    bool reduced = true;
    std::map<std::string, int> surjective_end_counts;
};

/** True iff no vertex has exactly one incident index-1 end (loops count twice). */
ReducedCheck is_reduced(const GraphOfGroups& g);

struct ReduceResult {
    GraphOfGroups graph;
    std::vector<std::string> trace;

    bool has_non_collapsible() const;
};

/**
 * Repeatedly collapses a non-loop edge with an index-1 end at a vertex whose
 * surjective-end count is exactly 1. Re-based ends multiply indices
 * (abstract) or compose matrices (abelian). Loops that keep a vertex
 * non-reduced are flagged NON-COLLAPSIBLE in the trace.
 */
ReduceResult reduce(const GraphOfGroups& g);

/** True iff every end has finite index. */
bool is_geometrically_homogeneous(const GraphOfGroups& g);

/** Sum of incident end indices (loops contribute both ends); INF-absorbing. */
Index tree_valence(const GraphOfGroups& g, const std::string& v);

bool is_connected(const GraphOfGroups& g);

GraphOfGroups parse_gog(const std::string& text);
std::string serialize_gog(const GraphOfGroups& g);

} // namespace qtrees::gog
