#include <doctest.h>

#include "qtrees/crossing.hpp"
#include "qtrees/error.hpp"
#include "qtrees/fixtures.hpp"
#include "qtrees/gog.hpp"

using namespace qtrees;
using crossing::Summary;

namespace {

gog::GraphOfGroups fx(const std::string& name) { return gog::parse_gog(fixtures::content(name)); }

QMatrix rows(const std::vector<std::vector<long long>>& r) { return QMatrix::from_rows(r); }

} // namespace

TEST_CASE("crosses is direction containment against a hyperplane") {
    QMatrix e12 = rows({{1, 0, 0}, {0, 1, 0}});
    CHECK(crossing::crosses(rows({{0, 0, 1}}), e12));
    CHECK(!crossing::crosses(rows({{1, 0, 0}}), e12));
    CHECK(crossing::crosses(rows({{1, 0, 1}}), e12));
    CHECK_THROWS_AS(crossing::crosses(rows({{1, 0, 0}}), rows({{1, 0, 0}})), Error);
}

TEST_CASE("crosses is symmetric and detects equality on hyperplane pairs") {
    QMatrix xy = rows({{1, 0, 0}, {0, 1, 0}});
    QMatrix yz = rows({{0, 1, 0}, {0, 0, 1}});
    QMatrix xy2 = rows({{2, 0, 0}, {0, 3, 0}}); // same direction as xy
    CHECK(crossing::crosses(xy, yz));
    CHECK(crossing::crosses(yz, xy));
    CHECK(!crossing::crosses(xy, xy2));
    CHECK(!crossing::crosses(xy2, xy));
}

TEST_CASE("crossing summary on the corpus") {
    CHECK(crossing::crossing_graph_summary(fx("z3_three_planes.gog"), "v").verdict ==
          Summary::Connected);
    CHECK(crossing::crossing_graph_summary(fx("z3_single_plane.gog"), "v").verdict ==
          Summary::Disconnected);
    CHECK(crossing::crossing_graph_summary(fx("z3_mixed_crosser.gog"), "v").verdict ==
          Summary::Connected);
    CHECK(crossing::crossing_graph_summary(fx("z3_plane_inner_axis.gog"), "v").verdict ==
          Summary::Disconnected);
    CHECK(crossing::crossing_graph_summary(fx("z3_rank1_only.gog"), "v").verdict == Summary::Empty);
    CHECK(crossing::crossing_graph_summary(fx("z2_two_lines.gog"), "v").verdict ==
          Summary::Connected);
    CHECK(crossing::crossing_graph_summary(fx("z2_parallel_lines.gog"), "v").verdict ==
          Summary::Disconnected);
    CHECK_THROWS_AS(crossing::crossing_graph_summary(fx("zp_zp.gog"), "v"), Error);
}

TEST_CASE("lattice oracle agrees with the summary on every conclusive fixture") {
    crossing::OracleOptions opts;
    opts.box_radius = 12;
    opts.cosets_per_end = 3;
    opts.deep_threshold = 3;
    const char* names[] = {"z3_three_planes.gog", "z3_single_plane.gog", "z3_mixed_crosser.gog",
                           "z3_plane_inner_axis.gog", "z3_rank1_only.gog", "z2_two_lines.gog",
                           "z2_parallel_lines.gog", "inhom_path.gog"};
    for (const char* name : names) {
        auto g = fx(name);
        crossing::SummaryResult s = crossing::crossing_graph_summary(g, "v");
        crossing::OracleResult o = crossing::lattice_oracle_crossing_graph(g, "v", opts);
        INFO(name);
        REQUIRE(o.conclusive);
        CHECK(o.empty == (s.verdict == Summary::Empty));
        if (!o.empty) CHECK(o.connected == (s.verdict == Summary::Connected));
    }
}

TEST_CASE("oracle crossing is invariant under coset translation") {
    // the same pair of transverse planes sampled at shifted cosets must
    // stay connected, and parallel planes stay disconnected
    crossing::OracleOptions near_opts;
    near_opts.box_radius = 10;
    near_opts.cosets_per_end = 3;
    near_opts.deep_threshold = 2;
    crossing::OracleOptions far_opts = near_opts;
    far_opts.deep_threshold = 3; // changes the sampled shifts

    for (const char* name : {"z3_three_planes.gog", "z2_parallel_lines.gog"}) {
        auto g = fx(name);
        crossing::OracleResult a = crossing::lattice_oracle_crossing_graph(g, "v", near_opts);
        crossing::OracleResult b = crossing::lattice_oracle_crossing_graph(g, "v", far_opts);
        REQUIRE(a.conclusive);
        REQUIRE(b.conclusive);
        CHECK(a.connected == b.connected);
    }
}

TEST_CASE("oracle budget guard") {
    crossing::OracleOptions opts;
    opts.box_radius = 12;
    opts.budget = 10;
    CHECK_THROWS_AS(crossing::lattice_oracle_crossing_graph(fx("z3_three_planes.gog"), "v", opts),
                    Error);
}
