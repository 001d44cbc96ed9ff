#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qtrees/error.hpp"
#include "qtrees/fixtures.hpp"
#include "qtrees/gog.hpp"

using namespace qtrees;
using gog::GraphOfGroups;
using gog::Index;

namespace {

GraphOfGroups fx(const std::string& name) { return gog::parse_gog(fixtures::content(name)); }

// ---- test-side collapse, re-implemented from the definition ----

struct Collapse {
    std::string edge;
    int end; // 0/1, the surjective end at the vertex being removed
};

std::vector<Collapse> admissible(const GraphOfGroups& g) {
    std::vector<Collapse> out;
    auto rc = gog::is_reduced(g);
    for (const auto& [id, e] : g.edges) {
        if (e.is_loop()) continue;
        for (int k = 0; k < 2; ++k) {
            Index idx = gog::end_index(g, e, k);
            if (!idx.is_infinite() && idx.value() == 1 &&
                rc.surjective_end_counts.at(e.ends[k].vertex) == 1)
                out.push_back({id, k});
        }
    }
    return out;
}

GraphOfGroups collapse_once(GraphOfGroups g, const Collapse& c) {
    gog::Edge e = g.edges.at(c.edge);
    std::string removed = e.ends[c.end].vertex;
    std::string survivor = e.ends[1 - c.end].vertex;
    Index j = gog::end_index(g, e, 1 - c.end);
    g.edges.erase(c.edge);
    for (auto& [fid, f] : g.edges)
        for (int k = 0; k < 2; ++k)
            if (f.ends[k].vertex == removed) {
                f.ends[k].vertex = survivor;
                f.ends[k].inj.declared = *f.ends[k].inj.declared * j;
            }
    g.vertices.erase(removed);
    return g;
}

void all_terminal_graphs(const GraphOfGroups& g, std::vector<GraphOfGroups>& out) {
    auto cands = admissible(g);
    if (cands.empty()) {
        out.push_back(g);
        return;
    }
    for (const auto& c : cands) all_terminal_graphs(collapse_once(g, c), out);
}

// brute-force isomorphism of small abstract graphs of groups
bool gog_isomorphic(const GraphOfGroups& a, const GraphOfGroups& b) {
    if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
    std::vector<std::string> av, bv;
    for (const auto& [id, v] : a.vertices) av.push_back(id);
    for (const auto& [id, v] : b.vertices) bv.push_back(id);
    std::sort(bv.begin(), bv.end());
    do {
        bool dims_ok = true;
        std::map<std::string, std::string> phi;
        for (size_t i = 0; i < av.size(); ++i) {
            phi[av[i]] = bv[i];
            if (a.vertices.at(av[i]).dim != b.vertices.at(bv[i]).dim) dims_ok = false;
        }
        if (!dims_ok) continue;
        auto signature = [](const GraphOfGroups& g, const std::map<std::string, std::string>* m) {
            std::multiset<std::string> sig;
            for (const auto& [id, e] : g.edges) {
                std::pair<std::string, std::string> p0{
                    m ? m->at(e.ends[0].vertex) : e.ends[0].vertex, gog::end_index(g, e, 0).str()};
                std::pair<std::string, std::string> p1{
                    m ? m->at(e.ends[1].vertex) : e.ends[1].vertex, gog::end_index(g, e, 1).str()};
                if (p1 < p0) std::swap(p0, p1);
                sig.insert(std::to_string(e.group.dim) + "|" + p0.first + ":" + p0.second + "|" +
                           p1.first + ":" + p1.second);
            }
            return sig;
        };
        if (signature(a, &phi) == signature(b, nullptr)) return true;
    } while (std::next_permutation(bv.begin(), bv.end()));
    return false;
}

} // namespace

TEST_CASE("validate accepts well-formed graphs") {
    GraphOfGroups g;
    g.regime = gog::Regime::Abelian;
    g.vertices["v"] = gog::GroupSpec{2};
    CHECK(gog::validate(g).empty());

    // abelian column (2,4) has full column rank
    GraphOfGroups h;
    h.regime = gog::Regime::Abelian;
    h.vertices["v"] = gog::GroupSpec{2};
    gog::Edge e;
    e.group.dim = 1;
    e.ends[0] = {"v", {std::nullopt, QMatrix::from_rows({{2}, {4}})}};
    e.ends[1] = {"v", {std::nullopt, QMatrix::from_rows({{1}, {0}})}};
    h.edges["e"] = e;
    CHECK(gog::validate(h).empty());
}

TEST_CASE("validate flags dimension and rank violations") {
    GraphOfGroups g;
    g.vertices["v"] = gog::GroupSpec{2};
    g.vertices["w"] = gog::GroupSpec{3};
    gog::Edge e;
    e.group.dim = 3;
    e.ends[0] = {"v", {Index::finite(2), std::nullopt}};
    e.ends[1] = {"w", {Index::finite(2), std::nullopt}};
    g.edges["e"] = e;
    auto v = gog::validate(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("edge dim exceeds vertex dim") != std::string::npos);
}

TEST_CASE("injection index: declared, determinant, infinite") {
    gog::InjectionSpec diag;
    diag.matrix = QMatrix::from_rows({{2, 0}, {0, 3}});
    CHECK(gog::injection_index(diag, 2, 2) == Index::finite(6));

    gog::InjectionSpec one;
    one.matrix = QMatrix::from_rows({{1}});
    CHECK(gog::injection_index(one, 1, 1) == Index::finite(1));

    gog::InjectionSpec column;
    column.matrix = QMatrix::from_rows({{1}, {0}});
    CHECK(gog::injection_index(column, 2, 1).is_infinite());

    gog::InjectionSpec bad;
    bad.matrix = QMatrix::from_rows({{1, 2}, {2, 4}});
    CHECK_THROWS_AS(gog::injection_index(bad, 2, 2), Error);
}

TEST_CASE("injection index matches brute-force coset counting") {
    // frozen case first: diag(2,3) has 6 cosets in a box of radius 4
    CHECK(testoracle::coset_count_in_box({{2, 0}, {0, 3}}, 4) == 6);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> entry(-10, 10);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + static_cast<int>(trial % 3);
        std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
        long long maxe = 0;
        do {
            maxe = 0;
            for (auto& row : m)
                for (auto& x : row) {
                    x = entry(rng);
                    maxe = std::max(maxe, std::llabs(x));
                }
        } while (testoracle::coset_count_in_box(m, 1) == -1); // regenerate singular draws
        gog::InjectionSpec inj;
        inj.matrix = QMatrix::from_rows(m);
        Index idx = gog::injection_index(inj, n, n);
        CHECK(idx.value() == testoracle::coset_count_in_box(m, std::max(2 * maxe, 1LL)));
    }
}

TEST_CASE("is_reduced counts surjective ends per vertex") {
    auto circle = fx("mapping_torus_circle.gog");
    auto rc = gog::is_reduced(circle);
    CHECK(rc.reduced);
    for (const auto& [v, c] : rc.surjective_end_counts) CHECK(c == 2);

    CHECK(!gog::is_reduced(fx("star13.gog")).reduced);

    GraphOfGroups point = fx("point.gog");
    CHECK(gog::is_reduced(point).reduced);
    CHECK(gog::is_reduced(point).surjective_end_counts.at("v") == 0);
}

TEST_CASE("reduce collapses and re-bases with multiplied index") {
    auto g = fx("collapse_path.gog");
    gog::ReduceResult r = gog::reduce(g);
    CHECK(r.graph.vertices.size() == 2); // v collapsed into w
    CHECK(r.graph.vertices.count("w") == 1);
    CHECK(r.graph.vertices.count("u") == 1);
    REQUIRE(r.graph.edges.count("e2") == 1);
    const gog::Edge& e2 = r.graph.edges.at("e2");
    int at_w = e2.ends[0].vertex == "w" ? 0 : 1;
    CHECK(e2.ends[at_w].vertex == "w");
    CHECK(gog::end_index(r.graph, e2, at_w) == Index::finite(15));
    CHECK(!r.has_non_collapsible());
}

TEST_CASE("abelian collapse composes matrices; index multiplicativity by coset count") {
    // abelian realization of the collapse fixture: identity end at v, index-3
    // end at w, extra index-5 end at v
    GraphOfGroups g;
    g.regime = gog::Regime::Abelian;
    g.vertices["u"] = gog::GroupSpec{2};
    g.vertices["v"] = gog::GroupSpec{2};
    g.vertices["w"] = gog::GroupSpec{2};
    gog::Edge e1;
    e1.group.dim = 2;
    e1.ends[0] = {"v", {std::nullopt, QMatrix::identity(2)}};
    e1.ends[1] = {"w", {std::nullopt, QMatrix::from_rows({{1, 0}, {0, 3}})}};
    gog::Edge e2;
    e2.group.dim = 2;
    e2.ends[0] = {"v", {std::nullopt, QMatrix::from_rows({{5, 0}, {0, 1}})}};
    e2.ends[1] = {"u", {std::nullopt, QMatrix::from_rows({{2, 0}, {0, 1}})}};
    g.edges["e1"] = e1;
    g.edges["e2"] = e2;
    REQUIRE(gog::validate(g).empty());

    gog::ReduceResult r = gog::reduce(g);
    REQUIRE(r.graph.edges.count("e2") == 1);
    const gog::Edge& re2 = r.graph.edges.at("e2");
    int at_w = re2.ends[0].vertex == "w" ? 0 : 1;
    Index idx = gog::end_index(r.graph, re2, at_w);
    CHECK(idx == Index::finite(15));

    // the composed matrix really has 15 cosets
    const QMatrix& m = *re2.ends[at_w].inj.matrix;
    std::vector<std::vector<long long>> mm(2, std::vector<long long>(2));
    long long maxe = 1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mm[i][j] = m.at_int(i, j);
            maxe = std::max(maxe, std::llabs(mm[i][j]));
        }
    CHECK(testoracle::coset_count_in_box(mm, 2 * maxe) == 15);
}

TEST_CASE("reduce fixed points and non-collapsible loops") {
    auto circle = fx("mapping_torus_circle.gog");
    gog::ReduceResult r = gog::reduce(circle);
    CHECK(r.trace.empty());
    CHECK(gog::serialize_gog(r.graph) == gog::serialize_gog(circle));

    gog::ReduceResult loop = gog::reduce(fx("noncollapsible_loop.gog"));
    CHECK(loop.graph.edges.size() == 1);
    CHECK(loop.has_non_collapsible());
    CHECK(!gog::is_reduced(loop.graph).reduced);

    // is_reduced(reduce(g)) holds whenever nothing was flagged
    for (const char* name : {"star13.gog", "collapse_path.gog", "zp_zp.gog", "arc5.gog"}) {
        gog::ReduceResult rr = gog::reduce(fx(name));
        if (!rr.has_non_collapsible()) CHECK(gog::is_reduced(rr.graph).reduced);
    }
}

TEST_CASE("reduce is confluent across admissible collapse orders") {
    // chain with several collapsible edges plus a bushy anchor
    GraphOfGroups g;
    g.vertices["a"] = g.vertices["b"] = g.vertices["c"] = g.vertices["d"] = gog::GroupSpec{0};
    auto mk = [&](const std::string& v, const std::string& w, long long i1, long long i2) {
        gog::Edge e;
        e.group.dim = 0;
        e.ends[0] = {v, {Index::finite(i1), std::nullopt}};
        e.ends[1] = {w, {Index::finite(i2), std::nullopt}};
        return e;
    };
    g.edges["e1"] = mk("a", "b", 1, 2);
    g.edges["e2"] = mk("b", "c", 1, 3);
    g.edges["e3"] = mk("c", "d", 1, 5);
    g.edges["e4"] = mk("d", "d", 7, 7);

    std::vector<GraphOfGroups> finals;
    all_terminal_graphs(g, finals);
    REQUIRE(finals.size() > 1);
    gog::ReduceResult lib = gog::reduce(g);
    for (const auto& f : finals) CHECK(gog_isomorphic(f, lib.graph));
}

TEST_CASE("geometric homogeneity and tree valence") {
    CHECK(gog::is_geometrically_homogeneous(fx("zp_zp.gog")));
    CHECK(gog::is_geometrically_homogeneous(fx("point.gog")));
    CHECK(!gog::is_geometrically_homogeneous(fx("z3_single_plane.gog")));

    auto circle = fx("mapping_torus_circle.gog");
    CHECK(gog::tree_valence(circle, "a") == Index::finite(2));
    CHECK(gog::tree_valence(fx("zp_zp.gog"), "v") == Index::finite(5));
    CHECK(gog::tree_valence(fx("z3_single_plane.gog"), "v").is_infinite());

    auto tripod = fx("tripod222.gog");
    CHECK(gog::tree_valence(tripod, "c") == Index::finite(6));
    CHECK(gog::tree_valence(tripod, "x") == Index::finite(2));
}

TEST_CASE("gog parse and serialize round trip") {
    for (const auto& f : fixtures::all()) {
        if (f.name.size() < 4 || f.name.substr(f.name.size() - 4) != ".gog") continue;
        GraphOfGroups g = gog::parse_gog(f.content);
        CHECK(gog::validate(g).empty());
        CHECK(gog::serialize_gog(g) == f.content);
        CHECK(gog::serialize_gog(gog::parse_gog(gog::serialize_gog(g))) == gog::serialize_gog(g));
    }
}

TEST_CASE("gog parse errors carry line numbers") {
    try {
        gog::parse_gog("gog v1 abstract\nvertex v dim=0\nedge e ends=v,v dim=0 idx=1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(gog::parse_gog("gog v2 abstract\n"), ParseError);
    // inf index parses
    GraphOfGroups g = gog::parse_gog(
        "gog v1 abstract\nvertex v dim=1\nvertex w dim=1\nedge e ends=v,w dim=1 idx=inf,2\n");
    CHECK(gog::end_index(g, g.edges.at("e"), 0).is_infinite());
    // malformed abelian rows
    CHECK_THROWS_AS(
        gog::parse_gog("gog v1 abelian\nvertex v rank=2\nedge e ends=v,v rank=1 m1=1;0;0 m2=1;0\n"),
        ParseError);
}
