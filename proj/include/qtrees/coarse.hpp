#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qtrees/matrix.hpp"
#include "qtrees/report.hpp"
#include "qtrees/tree.hpp"

namespace qtrees::coarse {

enum class LatticeMetric { Sup, EuclideanRounded };

/**
 * Finite metric host: either a tree with the path metric or the integer
 * box Z^n cap [-r, r]^n. All distances are exact integers; the rounded
 * Euclidean metric takes the ceiling of the true distance, which keeps
 * the triangle inequality (ceil is subadditive). Comparisons that need
 * finer resolution use exact squared distances.
 */
class Host {
public:
    static Host lattice(int dim, long long radius, LatticeMetric metric);
    static Host tree(FiniteTree t);

    bool is_lattice() const { return !is_tree_; }
    bool is_tree() const { return is_tree_; }
    int dim() const { return dim_; }
    long long box_radius() const { return radius_; }
    LatticeMetric metric() const { return metric_; }
    const FiniteTree& tree_ref() const { return tree_; }

    long long size() const { return size_; }
    long long dist(long long a, long long b) const;
    std::vector<long long> coords(long long id) const;
    long long id_of(const std::vector<long long>& c) const; // -1 outside the box
    void unit_neighbors(long long id, std::vector<long long>& out) const;

    /** d(x, S) for every host point; exact under the host metric. */
    std::vector<long long> distance_transform(const std::vector<long long>& sources) const;

private:
    bool is_tree_ = false;
    int dim_ = 0;
    long long radius_ = 0;
    long long size_ = 0;
    LatticeMetric metric_ = LatticeMetric::Sup;
    FiniteTree tree_;
};

/** Finite subset of a host. Points kept sorted and unique. */
struct PointSet {
    const Host* host = nullptr;
    std::vector<long long> points;

    static PointSet of(const Host& h, std::vector<long long> pts);
    bool empty() const { return points.empty(); }
};

/** Minimal R with A inside N_R(B). Throws EmptyTarget when B is empty. */
Rat containment_radius(const PointSet& a, const PointSet& b);

/** max of the two one-sided radii; throws when either side is empty. */
Rat equiv_radius(const PointSet& a, const PointSet& b);

struct IntersectionRow {
    Rat r;
    long long size = 0;
    bool empty = true;
    Rat radius_to_candidate; // defined when !empty
};

struct IntersectionProfile {
    std::vector<IntersectionRow> rows;                      // in ascending R
    std::vector<std::tuple<Rat, Rat, bool>> stabilization;  // (R0, max radius over R>=R0, saw empty)
    Report report() const;
};

IntersectionProfile coarse_intersection_profile(const PointSet& a, const PointSet& b,
                                                std::vector<Rat> r_list, const PointSet& candidate);

struct StepTable {
    std::vector<std::pair<long long, Rat>> entries; // (distance, value), nondecreasing
};

struct QiFit {
    Rat k = 1;
    Rat c = 0;
    StepTable lower, upper;
};

/** Total map from a sample of one host into another. Pairs sorted by source id. */
struct SampledMap {
    const Host* dom = nullptr;
    const Host* cod = nullptr;
    std::vector<std::pair<long long, long long>> pairs;
};

/**
 * For each K in the grid, the least C making f a (K, C) quasi-isometric
 * embedding on the sample; returns the grid point minimizing C, then K.
 */
QiFit fit_qi_constants(const SampledMap& f, const std::vector<Rat>& k_grid,
                       bool with_tables = false);

/** Same fit over an abstract pair list with caller-supplied metrics. */
QiFit fit_qi_constants_fn(const std::vector<std::pair<long long, long long>>& pairs,
                          const std::function<long long(long long, long long)>& dist_dom,
                          const std::function<long long(long long, long long)>& dist_cod,
                          const std::vector<Rat>& k_grid, bool with_tables = false);

struct CoarseInverse {
    SampledMap g;
    Rat achieved_c;
};

/** Nearest-preimage inverse; ties to the smallest id. Requires a C-dense image. */
CoarseInverse coarse_inverse(const SampledMap& f, const Rat& k, const Rat& c);

struct QuasiActionSample {
    const Host* host = nullptr;
    std::vector<std::string> names;
    std::vector<std::vector<long long>> maps;            // per element, total on host
    std::vector<std::tuple<int, int, int>> composition;  // (i, j, k): g_i g_j = g_k
};

/** Associativity of the partial table where defined; empty iff consistent. */
std::vector<std::string> validate_qa(const QuasiActionSample& qa);

struct QuasiActionCheck {
    bool maps_fit = true;
    bool composition_ok = true;
    Rat worst_upper_defect;  // max over elements/pairs of d(gx,gy) - K d(x,y) - C
    Rat worst_lower_defect;  // max of d(x,y)/K - C - d(gx,gy)
    Rat worst_composition;   // max over table rows/points of d(g(h x), (gh) x)
    Rat cobounded_radius;
    std::vector<std::pair<long long, long long>> properness; // (R, max multiplicity)
    Report report() const;
};

QuasiActionCheck check_quasi_action(const QuasiActionSample& qa, const Rat& k, const Rat& c,
                                    const std::vector<long long>& properness_radii = {0, 1, 2, 3});

struct StabilizerSample {
    std::vector<int> elements; // indices into qa
    bool cobounded_defined = false;
    Rat cobounded_radius;
};

/** Elements moving H within Hausdorff distance A, and their coboundedness on H. */
StabilizerSample stabilizer_sample(const QuasiActionSample& qa, const PointSet& h, const Rat& a);

struct DeepComponents {
    int deep_count = 0;
    std::vector<long long> component_sizes;
    std::vector<bool> deep;
};

/**
 * Components of host minus N_A(S) under unit adjacency; a component is deep
 * when it contains a point whose radius-r host ball stays inside it.
 */
DeepComponents deep_component_count(const Host& host, const PointSet& s, long long a, long long r);

enum class RigidityMode { Weak, Full, Unique, StrongEdge };

struct SpaceSample {
    const Host* host = nullptr;
    std::map<std::string, std::vector<long long>> vertex_spaces;
    std::map<std::string, std::vector<long long>> edge_spaces;
};

struct NamedMap {
    std::string name;
    std::vector<long long> img;
};

Report vertex_rigidity_check(const SpaceSample& sample, const std::vector<NamedMap>& maps,
                             RigidityMode mode);

struct PtsData {
    Host host;
    std::vector<long long> points;
    std::string host_spec;
};

/** file_loader resolves tree-host paths to file contents. */
PtsData parse_pts(const std::string& text,
                  const std::function<std::string(const std::string&)>& file_loader);
std::string serialize_pts(const PtsData& d);

} // namespace qtrees::coarse
