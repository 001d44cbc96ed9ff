#include <doctest.h>

#include <set>

#include "qtrees/error.hpp"
#include "qtrees/fixtures.hpp"
#include "qtrees/gog.hpp"
#include "qtrees/rafts.hpp"

using namespace qtrees;
using rafts::RaftKind;

namespace {

gog::GraphOfGroups fx(const std::string& name) { return gog::parse_gog(fixtures::content(name)); }

// direct re-check of the raft definition
bool raft_condition_holds(const gog::GraphOfGroups& g, const rafts::Raft& r) {
    std::set<std::string> vs(r.vertices.begin(), r.vertices.end());
    std::set<std::string> es(r.edges.begin(), r.edges.end());
    for (const auto& v : r.vertices)
        if (g.vertices.at(v).dim != r.dim) return false;
    for (const auto& e : r.edges)
        if (g.edges.at(e).group.dim != r.dim) return false;
    for (const auto& v : r.vertices)
        for (const auto& [eid, e] : g.edges) {
            if (e.ends[0].vertex != v && e.ends[1].vertex != v) continue;
            if (!es.count(eid) && e.group.dim >= r.dim) return false;
        }
    return true;
}

} // namespace

TEST_CASE("dimension filtration of the descending path") {
    auto g = fx("inhom_path.gog");
    rafts::Filtration f = rafts::dimension_filtration(g);
    CHECK(f.max_dim == 3);
    REQUIRE(f.levels.size() == 4);
    CHECK(f.levels[0].vertices == std::vector<std::string>{"v"});
    CHECK(f.levels[0].edges.empty());
    CHECK(f.levels[1].vertices == std::vector<std::string>{"v", "w"});
    CHECK(f.levels[1].edges == std::vector<std::string>{"e"});
    CHECK(f.levels[2].vertices == std::vector<std::string>{"u", "v", "w"});
    CHECK(f.levels[2].edges == std::vector<std::string>{"e", "f"});
    CHECK(f.levels[3].vertices.size() == 3);

    // homogeneous graph: the top level is everything
    auto h = fx("homog_bushy_abelian.gog");
    rafts::Filtration fh = rafts::dimension_filtration(h);
    CHECK(fh.levels[0].vertices.size() == h.vertices.size());
    CHECK(fh.levels[0].edges.size() == h.edges.size());

    gog::GraphOfGroups single;
    single.regime = gog::Regime::Abelian;
    single.vertices["v"] = gog::GroupSpec{2};
    rafts::Filtration fs = rafts::dimension_filtration(single);
    CHECK(fs.levels[0].vertices == std::vector<std::string>{"v"});
}

TEST_CASE("find_rafts on the descending path finds one point raft") {
    auto g = fx("inhom_path.gog");
    rafts::RaftsResult r = rafts::find_rafts(g);
    REQUIRE(r.rafts.size() == 1);
    CHECK(r.rafts[0].dim == 3);
    CHECK(r.rafts[0].vertices == std::vector<std::string>{"v"});
    CHECK(r.rafts[0].kind == RaftKind::Point);
    CHECK(r.raftless == std::vector<std::string>{"u", "w"});
    for (const auto& raft : r.rafts) CHECK(raft_condition_holds(g, raft));
}

TEST_CASE("homogeneous bushy graph is a single bushy raft") {
    auto g = fx("homog_bushy_abelian.gog");
    rafts::RaftsResult r = rafts::find_rafts(g);
    REQUIRE(r.rafts.size() == 1);
    CHECK(r.rafts[0].kind == RaftKind::Bushy);
    CHECK(r.rafts[0].vertices.size() == 2);
    CHECK(r.rafts[0].edges.size() == 1);
    CHECK(r.raftless.empty());
    CHECK(raft_condition_holds(g, r.rafts[0]));
}

TEST_CASE("two same-rank vertices joined by a same-rank edge form one raft") {
    // rank-2 pair with a rank-2 edge, plus a hanging rank-1 edge
    auto g = gog::parse_gog(
        "gog v1 abelian\n"
        "vertex a rank=2\n"
        "vertex b rank=2\n"
        "vertex u rank=1\n"
        "edge e ends=a,b rank=2 m1=1,0;0,2 m2=1,0;0,2\n"
        "edge f ends=a,u rank=1 m1=1;0 m2=3\n");
    rafts::RaftsResult r = rafts::find_rafts(g);
    REQUIRE(r.rafts.size() == 1);
    CHECK(r.rafts[0].vertices == std::vector<std::string>{"a", "b"});
    CHECK(r.rafts[0].edges == std::vector<std::string>{"e"});
    CHECK(raft_condition_holds(g, r.rafts[0]));

    // rafts are pairwise disjoint across the corpus
    for (const auto& f : fixtures::all()) {
        if (f.name.size() < 4 || f.name.substr(f.name.size() - 4) != ".gog") continue;
        auto gg = gog::parse_gog(f.content);
        rafts::RaftsResult rr = rafts::find_rafts(gg);
        std::set<std::string> seen;
        for (const auto& raft : rr.rafts) {
            CHECK(raft_condition_holds(gg, raft));
            for (const auto& v : raft.vertices) CHECK(seen.insert(v).second);
        }
    }
}

TEST_CASE("raft classification: point, line, bushy") {
    auto line = fx("line_raft.gog");
    rafts::RaftsResult r = rafts::find_rafts(line);
    REQUIRE(r.rafts.size() == 1);
    CHECK(r.rafts[0].kind == RaftKind::Line);

    auto inhom = fx("inhom_path.gog");
    CHECK(rafts::find_rafts(inhom).rafts[0].kind == RaftKind::Point);

    CHECK(rafts::find_rafts(fx("homog_bushy_abelian.gog")).rafts[0].kind == RaftKind::Bushy);
}

TEST_CASE("star condition on the stated examples") {
    CHECK(rafts::check_star_condition(fx("z3_three_planes.gog")).pass);
    CHECK(!rafts::check_star_condition(fx("z3_single_plane.gog")).pass);
    CHECK(rafts::check_star_condition(fx("z3_rank1_only.gog")).pass);
    CHECK(rafts::check_star_condition(fx("z3_mixed_crosser.gog")).pass);
    CHECK_THROWS_AS(rafts::check_star_condition(fx("zp_zp.gog")), Error);

    // the three coordinate planes span integrally as well
    CHECK(rafts::check_star_condition(fx("z3_three_planes.gog"), true).pass);

    // rational span without integral span: doubled line bases
    auto g = gog::parse_gog(
        "gog v1 abelian\n"
        "vertex u rank=2\n"
        "vertex v rank=2\n"
        "edge e1 ends=v,u rank=1 m1=2;0 m2=2;0\n"
        "edge e2 ends=v,u rank=1 m1=0;2 m2=0;2\n");
    CHECK(rafts::check_star_condition(g, false).pass);
    CHECK(!rafts::check_star_condition(g, true).pass);
}

TEST_CASE("raft hypotheses checker") {
    CHECK(rafts::check_raft_hypotheses(fx("z3_three_planes.gog")).pass);
    CHECK(rafts::check_raft_hypotheses(fx("z3_mixed_crosser.gog")).pass);
    CHECK(rafts::check_raft_hypotheses(fx("z3_rank1_only.gog")).pass);
    CHECK(rafts::check_raft_hypotheses(fx("homog_bushy_abelian.gog")).pass);

    rafts::CheckResult line = rafts::check_raft_hypotheses(fx("line_raft.gog"));
    CHECK(!line.pass);
    CHECK(line.details.text().find("NO-LINE-RAFTS") != std::string::npos);

    rafts::CheckResult disc = rafts::check_raft_hypotheses(fx("z3_single_plane.gog"));
    CHECK(!disc.pass);
    CHECK(disc.details.text().find("CROSSING-DISCONNECTED") != std::string::npos);

    // non-reduced input fails before anything else
    rafts::CheckResult nr = rafts::check_raft_hypotheses(fx("star13.gog"),
                                                         nullptr);
    CHECK(!nr.pass);
    CHECK(nr.details.value_of("reduced") == "false");

    // abstract graphs need supplied summaries for their point rafts
    auto zp = fx("zp_zp.gog");
    CHECK(rafts::check_raft_hypotheses(zp).pass); // bushy raft, no point rafts

    auto mixed = gog::parse_gog(
        "gog v1 abstract\n"
        "vertex v dim=2\n"
        "vertex w dim=1\n"
        "edge e ends=v,w dim=1 idx=inf,2\n"
        "edge f ends=v,w dim=1 idx=inf,3\n");
    CHECK_THROWS_AS(rafts::check_raft_hypotheses(mixed), Error);
    std::map<std::string, crossing::Summary> supplied{{"v", crossing::Summary::Connected},
                                                      {"w", crossing::Summary::Empty}};
    CHECK(rafts::check_raft_hypotheses(mixed, &supplied).pass);
}

TEST_CASE("star condition pass implies crossing-connected point rafts on the corpus") {
    for (const auto& f : fixtures::all()) {
        if (f.name.size() < 4 || f.name.substr(f.name.size() - 4) != ".gog") continue;
        auto g = gog::parse_gog(f.content);
        if (g.regime != gog::Regime::Abelian) continue;
        if (!rafts::check_star_condition(g).pass) continue;
        if (!gog::is_reduced(g).reduced) continue;
        rafts::CheckResult r = rafts::check_raft_hypotheses(g);
        CHECK(r.details.text().find("CROSSING-DISCONNECTED") == std::string::npos);
    }
}
