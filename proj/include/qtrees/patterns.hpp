#pragma once

#include <string>
#include <vector>

#include "qtrees/matrix.hpp"
#include "qtrees/report.hpp"

namespace qtrees::patterns {

/** Ordered family of rational subspaces of Q^n; each matrix holds basis rows. */
struct SubspacePattern {
    int ambient = 0;
    std::vector<std::string> ids;
    std::vector<QMatrix> subspaces;

    std::size_t size() const { return subspaces.size(); }
};

std::vector<std::string> validate_pattern(const SubspacePattern& p);

/** Componentwise canonical bases; equality is decidable entrywise. */
struct ProjectivePattern {
    int ambient = 0;
    std::vector<QMatrix> canonical;

    bool operator==(const ProjectivePattern& o) const {
        return ambient == o.ambient && canonical == o.canonical;
    }
};

ProjectivePattern canonical_projective_pattern(const SubspacePattern& p);

enum class EquivVerdict { Yes, No, ProbablyNo };
std::string to_string(EquivVerdict v);

struct EquivResult {
    EquivVerdict verdict = EquivVerdict::No;
    QMatrix witness; // invertible F with F(W_k) = V_k, YES only
    std::string mode;
    long long trials = 0;
    Report report() const;
};

struct EquivOptions {
    long long grid_limit = 1000000;
    long long random_trials = 200;
    unsigned long long seed = 1;
};

/**
 * Existence of a linear isomorphism carrying each subspace of `from` onto
 * the like-indexed subspace of `to`: solves the containment constraints,
 * then searches the solution space for an invertible element. The grid
 * search is an exact decision (a nonzero polynomial of degree <= n per
 * variable cannot vanish on {0..n}^m); the randomized fallback labels
 * negatives PROBABLY-NO.
 */
EquivResult decide_projective_equivalence(const SubspacePattern& from, const SubspacePattern& to,
                                          const EquivOptions& opts = {});

/** Determinant-formula cross-ratio of four distinct lines [x_i : y_i] in Q^2. */
Rat cross_ratio(const std::vector<std::pair<Rat, Rat>>& lines);
Rat cross_ratio(const SubspacePattern& four_lines);

/** Componentwise image pattern under invertible F, canonicalized. */
SubspacePattern apply_linear(const QMatrix& f, const SubspacePattern& p);

SubspacePattern parse_pat(const std::string& text);
std::string serialize_pat(const SubspacePattern& p);

} // namespace qtrees::patterns
