#pragma once

#include <map>
#include <string>
#include <vector>

#include "qtrees/crossing.hpp"
#include "qtrees/gog.hpp"
#include "qtrees/report.hpp"

namespace qtrees::rafts {

/** Descending filtration by cell dimension: level i holds all cells of dim >= i. */
struct Filtration {
    int max_dim = 0;
    struct Level {
        int dim;
        std::vector<std::string> vertices;
        std::vector<std::string> edges;
    };
    std::vector<Level> levels; // max_dim down to 0
};

Filtration dimension_filtration(const gog::GraphOfGroups& g);

enum class RaftKind { Point, Bounded, Line, Bushy };
std::string to_string(RaftKind k);

struct Raft {
    int dim = 0;
    std::vector<std::string> vertices;
    std::vector<std::string> edges;
    RaftKind kind = RaftKind::Point;
};

struct RaftsResult {
    std::vector<Raft> rafts;
    std::vector<std::string> raftless; // vertices on no raft
    Report report() const;
};

/**
 * Maximal connected constant-dimension subgraphs all of whose incident
 * but not contained edges have strictly smaller dimension.
 */
RaftsResult find_rafts(const gog::GraphOfGroups& g);

/** Trichotomy of the raft's induced sub-graph-of-groups; single vertices are POINT. */
RaftKind classify_raft(const gog::GraphOfGroups& g, const Raft& raft);

struct CheckResult {
    bool pass = true;
    Report details;
};

/**
 * Condition on abelian vertex groups: incident edge images have strictly
 * smaller rank, and whenever a corank-1 image appears the incident images
 * together span the vertex group. Span is rational span by default; the
 * integral option demands the images generate the full lattice.
 */
CheckResult check_star_condition(const gog::GraphOfGroups& g, bool integral_span = false);

/**
 * Hypotheses of the inhomogeneous rigidity setup: reduced, no line rafts,
 * and a connected-or-empty crossing graph at every point raft. Abstract
 * graphs need caller-supplied crossing summaries for their point rafts.
 */
CheckResult check_raft_hypotheses(const gog::GraphOfGroups& g,
                                  const std::map<std::string, crossing::Summary>* supplied = nullptr);

} // namespace qtrees::rafts
