#include <doctest.h>

#include "qtrees/bassserre.hpp"
#include "qtrees/error.hpp"
#include "qtrees/fixtures.hpp"
#include "qtrees/gog.hpp"

using namespace qtrees;
using bassserre::OracleVerdict;
using bassserre::TreeBall;
using bassserre::Trichotomy;

namespace {

gog::GraphOfGroups fx(const std::string& name) { return gog::parse_gog(fixtures::content(name)); }

// closed form for the (p,p) amalgam ball size, p >= 3
long long amalgam_ball_size(long long p, int d) {
    long long pw = 1;
    for (int i = 0; i < d; ++i) pw *= p - 1;
    return 1 + p * (pw - 1) / (p - 2);
}

} // namespace

TEST_CASE("expand_ball on the order-5 amalgam") {
    auto g = fx("zp_zp.gog");
    TreeBall b = bassserre::expand_ball(g, "v", 2);
    CHECK(b.vertices.size() == 26); // 1 + 5 + 20
    CHECK(bassserre::validate_ball(g, b).empty());

    TreeBall b4 = bassserre::expand_ball(g, "v", 4);
    CHECK(bassserre::validate_ball(g, b4).empty());
    // boundary sizes by depth: 5, 20, 80, 320
    std::vector<long long> per_depth(5, 0);
    for (const auto& v : b4.vertices)
        if (v.truncated) ++per_depth[v.depth];
    CHECK(per_depth[4] == 320);
    CHECK(b4.vertices.size() == 426);
}

TEST_CASE("expand_ball trivial and line cases") {
    TreeBall point = bassserre::expand_ball(fx("point.gog"), "v", 5);
    CHECK(point.vertices.size() == 1);
    CHECK(point.truncated_count() == 0);

    TreeBall line = bassserre::expand_ball(fx("circle_two_edges.gog"), "v", 3);
    CHECK(line.vertices.size() == 7);
    CHECK(line.truncated_count() == 2);
    CHECK(bassserre::validate_ball(fx("circle_two_edges.gog"), line).empty());
}

TEST_CASE("expand_ball refuses infinite indices and tiny budgets") {
    CHECK_THROWS_AS(bassserre::expand_ball(fx("z3_single_plane.gog"), "v", 2), Error);
    bassserre::ExpandOptions opts;
    opts.vertex_budget = 10;
    CHECK_THROWS_AS(bassserre::expand_ball(fx("zp_zp.gog"), "v", 3, opts), Error);
}

TEST_CASE("amalgam ball sizes follow the valence growth law") {
    for (long long p : {3LL, 5LL}) {
        auto g = p == 3 ? fx("z3_z3.gog") : fx("zp_zp.gog");
        for (int d = 0; d <= 5; ++d) {
            TreeBall b = bassserre::expand_ball(g, "v", d);
            CHECK(static_cast<long long>(b.vertices.size()) == amalgam_ball_size(p, d));
        }
    }
}

TEST_CASE("classify_trichotomy across the corpus") {
    CHECK(bassserre::classify_trichotomy(fx("point.gog")) == Trichotomy::Bounded);
    CHECK(bassserre::classify_trichotomy(fx("star13.gog")) == Trichotomy::Bounded);
    CHECK(bassserre::classify_trichotomy(fx("mapping_torus_arc.gog")) == Trichotomy::LineLike);
    CHECK(bassserre::classify_trichotomy(fx("mapping_torus_circle.gog")) == Trichotomy::LineLike);
    CHECK(bassserre::classify_trichotomy(fx("loop_hnn11.gog")) == Trichotomy::LineLike);
    CHECK(bassserre::classify_trichotomy(fx("zp_zp.gog")) == Trichotomy::Bushy);
    CHECK(bassserre::classify_trichotomy(fx("noncollapsible_loop.gog")) == Trichotomy::Bushy);
    CHECK(bassserre::classify_trichotomy(fx("collapse_path.gog")) == Trichotomy::Bushy);
}

TEST_CASE("oracle verdicts on the named examples") {
    CHECK(bassserre::oracle_classify_by_expansion(fx("point.gog"), 4) == OracleVerdict::Bounded);
    CHECK(bassserre::oracle_classify_by_expansion(fx("circle_two_edges.gog"), 5) ==
          OracleVerdict::LineLike);
    CHECK(bassserre::oracle_classify_by_expansion(fx("zp_zp.gog"), 4) == OracleVerdict::Bushy);
}

TEST_CASE("classification agrees with the expansion oracle on every finite fixture") {
    for (const auto& f : fixtures::all()) {
        if (f.name.size() < 4 || f.name.substr(f.name.size() - 4) != ".gog") continue;
        auto g = gog::parse_gog(f.content);
        if (!gog::is_geometrically_homogeneous(g)) continue;
        Trichotomy t = bassserre::classify_trichotomy(g);
        OracleVerdict o = bassserre::oracle_classify_by_expansion(g, 4);
        if (o == OracleVerdict::Inconclusive) continue;
        CHECK(bassserre::to_string(t) == bassserre::to_string(o));

        // reduction preserves the classification
        CHECK(bassserre::to_string(bassserre::classify_trichotomy(gog::reduce(g).graph)) ==
              bassserre::to_string(t));
    }
}

TEST_CASE("bushy boundary growth is monotone") {
    auto g = fx("two_loops.gog");
    std::vector<std::size_t> trunc;
    for (int r = 1; r <= 4; ++r) trunc.push_back(bassserre::expand_ball(g, "v", r).truncated_count());
    for (size_t i = 1; i < trunc.size(); ++i) CHECK(trunc[i] >= trunc[i - 1]);
}

TEST_CASE("tree serialization round trip") {
    auto g = fx("zp_zp.gog");
    TreeBall b = bassserre::expand_ball(g, "v", 2);
    std::string text = bassserre::serialize_tree(b);
    TreeBall b2 = bassserre::parse_tree(text);
    CHECK(bassserre::serialize_tree(b2) == text);
    CHECK(b2.vertices.size() == b.vertices.size());
    CHECK(b2.radius == 2);

    CHECK_THROWS_AS(bassserre::parse_tree("tree v1\nv 0 depth=0 over=v\n"), ParseError);
}
