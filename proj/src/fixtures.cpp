#include "qtrees/fixtures.hpp"

#include "qtrees/error.hpp"

namespace qtrees::fixtures {

bassserre::TreeBall regular_ball(int degree, int depth) {
    bassserre::TreeBall b;
    b.radius = depth;
    b.vertices.push_back(bassserre::TreeVertex{0, "v", 0, false});
    std::vector<int> frontier{0};
    for (int d = 1; d <= depth; ++d) {
        std::vector<int> next;
        for (int parent : frontier) {
            int kids = parent == 0 ? degree : degree - 1;
            for (int k = 0; k < kids; ++k) {
                int id = static_cast<int>(b.vertices.size());
                b.vertices.push_back(bassserre::TreeVertex{id, "v", d, d == depth});
                b.edges.push_back(
                    bassserre::TreeEdge{static_cast<int>(b.edges.size()), parent, id, "e", 1});
                next.push_back(id);
            }
        }
        frontier = std::move(next);
    }
    return b;
}

namespace {

std::vector<Fixture> make_corpus() {
    std::vector<Fixture> fx;
    auto add = [&](const std::string& name, const std::string& prov, const std::string& content) {
        fx.push_back(Fixture{name, prov, content});
    };

    // ----- abstract graphs of groups -----
    add("point.gog", "one vertex, no edges; the bounded case",
        "gog v1 abstract\n"
        "vertex v dim=0\n");

    add("star13.gog", "single edge with a surjective end; collapses to a point",
        "gog v1 abstract\n"
        "vertex v dim=0\n"
        "vertex w dim=0\n"
        "edge e ends=v,w dim=0 idx=1,3\n");

    add("z3_z3.gog", "order-3 amalgam model: two vertices, one edge, both indices 3",
        "gog v1 abstract\n"
        "vertex v dim=0\n"
        "vertex w dim=0\n"
        "edge e ends=v,w dim=0 idx=3,3\n");

    add("zp_zp.gog", "order-5 amalgam model: two vertices, one edge, both indices 5",
        "gog v1 abstract\n"
        "vertex v dim=0\n"
        "vertex w dim=0\n"
        "edge e ends=v,w dim=0 idx=5,5\n");

    add("mapping_torus_circle.gog", "circle of three index-1 edges; line-like",
        "gog v1 abstract\n"
        "vertex a dim=1\n"
        "vertex b dim=1\n"
        "vertex c dim=1\n"
        "edge e1 ends=a,b dim=1 idx=1,1\n"
        "edge e2 ends=b,c dim=1 idx=1,1\n"
        "edge e3 ends=c,a dim=1 idx=1,1\n");

    add("loop_hnn11.gog", "one loop with two surjective ends; line-like mapping torus",
        "gog v1 abstract\n"
        "vertex v dim=1\n"
        "edge e ends=v,v dim=1 idx=1,1\n");

    add("mapping_torus_arc.gog", "arc with index-2 endpoint ends and index-1 interior ends",
        "gog v1 abstract\n"
        "vertex a dim=1\n"
        "vertex b dim=1\n"
        "vertex c dim=1\n"
        "edge e1 ends=a,b dim=1 idx=2,1\n"
        "edge e2 ends=b,c dim=1 idx=1,2\n");

    add("arc5.gog", "longer arc form of the line-like case",
        "gog v1 abstract\n"
        "vertex a dim=1\n"
        "vertex b dim=1\n"
        "vertex c dim=1\n"
        "vertex d dim=1\n"
        "vertex e dim=1\n"
        "edge e1 ends=a,b dim=1 idx=2,1\n"
        "edge e2 ends=b,c dim=1 idx=1,1\n"
        "edge e3 ends=c,d dim=1 idx=1,1\n"
        "edge e4 ends=d,e dim=1 idx=1,2\n");

    add("circle_two_edges.gog", "two vertices joined by two index-1 edges; line-like circle",
        "gog v1 abstract\n"
        "vertex v dim=1\n"
        "vertex w dim=1\n"
        "edge e1 ends=v,w dim=1 idx=1,1\n"
        "edge e2 ends=v,w dim=1 idx=1,1\n");

    add("circle4.gog", "four-cycle of index-1 edges",
        "gog v1 abstract\n"
        "vertex a dim=1\n"
        "vertex b dim=1\n"
        "vertex c dim=1\n"
        "vertex d dim=1\n"
        "edge e1 ends=a,b dim=1 idx=1,1\n"
        "edge e2 ends=b,c dim=1 idx=1,1\n"
        "edge e3 ends=c,d dim=1 idx=1,1\n"
        "edge e4 ends=d,a dim=1 idx=1,1\n");

    add("collapse_path.gog", "collapsible edge plus an extra end that re-bases with index 15",
        "gog v1 abstract\n"
        "vertex u dim=0\n"
        "vertex v dim=0\n"
        "vertex w dim=0\n"
        "edge e1 ends=v,w dim=0 idx=1,3\n"
        "edge e2 ends=v,u dim=0 idx=5,2\n");

    add("noncollapsible_loop.gog", "ascending loop with one surjective end; flagged, bushy",
        "gog v1 abstract\n"
        "vertex v dim=1\n"
        "edge e ends=v,v dim=1 idx=1,2\n");

    add("bs23_loop.gog", "loop with indices 2 and 3; bushy",
        "gog v1 abstract\n"
        "vertex v dim=1\n"
        "edge e ends=v,v dim=1 idx=2,3\n");

    add("two_loops.gog", "wedge of two loops; bushy",
        "gog v1 abstract\n"
        "vertex v dim=0\n"
        "edge e1 ends=v,v dim=0 idx=2,2\n"
        "edge e2 ends=v,v dim=0 idx=3,3\n");

    add("tripod222.gog", "three index-2 edges from a center; bushy",
        "gog v1 abstract\n"
        "vertex c dim=0\n"
        "vertex x dim=0\n"
        "vertex y dim=0\n"
        "vertex z dim=0\n"
        "edge e1 ends=c,x dim=0 idx=2,2\n"
        "edge e2 ends=c,y dim=0 idx=2,2\n"
        "edge e3 ends=c,z dim=0 idx=2,2\n");

    // ----- abelian graphs of groups -----
    add("z3_three_planes.gog", "two rank-3 vertices sharing three coordinate-plane images; spans",
        "gog v1 abelian\n"
        "vertex u rank=3\n"
        "vertex v rank=3\n"
        "edge e1 ends=v,u rank=2 m1=1,0;0,1;0,0 m2=1,0;0,1;0,0\n"
        "edge e2 ends=v,u rank=2 m1=0,0;1,0;0,1 m2=0,0;1,0;0,1\n"
        "edge e3 ends=v,u rank=2 m1=1,0;0,0;0,1 m2=1,0;0,0;0,1\n");

    add("z3_single_plane.gog", "rank-3 vertex with one plane image only; fails the span clause",
        "gog v1 abelian\n"
        "vertex v rank=3\n"
        "edge e ends=v,v rank=2 m1=1,0;0,1;0,0 m2=1,0;0,1;0,0\n");

    add("z3_mixed_crosser.gog", "one plane direction plus a transverse line image",
        "gog v1 abelian\n"
        "vertex u rank=3\n"
        "vertex v rank=3\n"
        "edge e1 ends=v,v rank=2 m1=1,0;0,1;0,0 m2=1,0;0,1;0,0\n"
        "edge e2 ends=v,u rank=1 m1=0;0;1 m2=1;0;0\n");

    add("z3_plane_inner_axis.gog", "plane direction plus a line inside it; no crosser",
        "gog v1 abelian\n"
        "vertex u rank=3\n"
        "vertex v rank=3\n"
        "edge e1 ends=v,v rank=2 m1=1,0;0,1;0,0 m2=1,0;0,1;0,0\n"
        "edge e2 ends=v,u rank=1 m1=1;0;0 m2=1;0;0\n");

    add("z3_rank1_only.gog", "rank-3 vertices with only line images; empty crossing graph",
        "gog v1 abelian\n"
        "vertex u rank=3\n"
        "vertex v rank=3\n"
        "edge e1 ends=v,u rank=1 m1=1;0;0 m2=1;0;0\n"
        "edge e2 ends=v,u rank=1 m1=0;1;0 m2=0;1;0\n");

    add("z2_two_lines.gog", "rank-2 vertices sharing two distinct line images",
        "gog v1 abelian\n"
        "vertex u rank=2\n"
        "vertex v rank=2\n"
        "edge e1 ends=v,u rank=1 m1=1;0 m2=1;0\n"
        "edge e2 ends=v,u rank=1 m1=0;1 m2=0;1\n");

    add("z2_parallel_lines.gog", "rank-2 vertices sharing two parallel line images; disconnected",
        "gog v1 abelian\n"
        "vertex u rank=2\n"
        "vertex v rank=2\n"
        "edge e1 ends=v,u rank=1 m1=1;0 m2=1;0\n"
        "edge e2 ends=v,u rank=1 m1=1;0 m2=1;0\n");

    add("line_raft.gog", "unimodular loop raft of rank 2 with a hanging line edge",
        "gog v1 abelian\n"
        "vertex u rank=1\n"
        "vertex v rank=2\n"
        "edge e ends=v,v rank=2 m1=1,0;0,1 m2=1,0;0,1\n"
        "edge f ends=v,u rank=1 m1=1;0 m2=2\n");

    add("inhom_path.gog", "descending path of ranks 3,2,1 with one point raft",
        "gog v1 abelian\n"
        "vertex u rank=1\n"
        "vertex v rank=3\n"
        "vertex w rank=2\n"
        "edge e ends=v,w rank=2 m1=1,0;0,1;0,0 m2=1,0;0,2\n"
        "edge f ends=w,u rank=1 m1=1;0 m2=3\n");

    add("homog_bushy_abelian.gog", "homogeneous rank-2 graph with indices 2 and 3; bushy raft",
        "gog v1 abelian\n"
        "vertex v rank=2\n"
        "vertex w rank=2\n"
        "edge e ends=v,w rank=2 m1=1,0;0,2 m2=1,0;0,3\n");

    // ----- 2-complexes and patterns -----
    add("single_triangle.cx2", "one triangle",
        "cx2 v1\n"
        "v a\n"
        "v b\n"
        "v c\n"
        "t t1 a b c\n");

    add("single_corner.npat", "one corner arc at the first vertex",
        "npat v1 over=single_triangle\n"
        "corner t1 1,0,0\n");

    add("hexagon_disk.cx2", "disk: hexagon coned to a center vertex",
        "cx2 v1\n"
        "v c\n"
        "v r1\n"
        "v r2\n"
        "v r3\n"
        "v r4\n"
        "v r5\n"
        "v r6\n"
        "t t1 c r1 r2\n"
        "t t2 c r2 r3\n"
        "t t3 c r3 r4\n"
        "t t4 c r4 r5\n"
        "t t5 c r5 r6\n"
        "t t6 c r6 r1\n");

    add("hexagon_core.npat", "closed track encircling the center of the hexagon disk",
        "npat v1 over=hexagon_disk\n"
        "corner t1 1,0,0\n"
        "corner t2 1,0,0\n"
        "corner t3 1,0,0\n"
        "corner t4 1,0,0\n"
        "corner t5 1,0,0\n"
        "corner t6 1,0,0\n");

    add("annulus6.cx2", "triangulated annulus on two rim triangles' worth of vertices",
        "cx2 v1\n"
        "v i1\n"
        "v i2\n"
        "v i3\n"
        "v o1\n"
        "v o2\n"
        "v o3\n"
        "t t1 o1 o2 i1\n"
        "t t2 o2 i2 i1\n"
        "t t3 o2 o3 i2\n"
        "t t4 o3 i3 i2\n"
        "t t5 o3 o1 i3\n"
        "t t6 o1 i1 i3\n");

    add("annulus_cut.npat", "arc crossing the annulus from outer to inner rim",
        "npat v1 over=annulus6\n"
        "corner t1 0,1,0\n"
        "corner t2 0,0,1\n");

    add("annulus_core_circle.npat", "closed track parallel to the annulus core",
        "npat v1 over=annulus6\n"
        "corner t1 0,0,1\n"
        "corner t2 1,0,0\n"
        "corner t3 0,0,1\n"
        "corner t4 1,0,0\n"
        "corner t5 0,0,1\n"
        "corner t6 1,0,0\n");

    add("strip4.cx2", "strip of four triangles",
        "cx2 v1\n"
        "v a\n"
        "v b\n"
        "v c\n"
        "v d\n"
        "v e\n"
        "v f\n"
        "t t1 a b d\n"
        "t t2 b e d\n"
        "t t3 b c e\n"
        "t t4 c f e\n");

    add("strip_two_cuts.npat", "two disjoint transversal arcs in the strip",
        "npat v1 over=strip4\n"
        "corner t1 1,0,0\n"
        "corner t4 0,1,0\n");

    add("wedge_disks.cx2", "two triangles sharing one vertex",
        "cx2 v1\n"
        "v a\n"
        "v b\n"
        "v c\n"
        "v d\n"
        "v e\n"
        "t t1 a b c\n"
        "t t2 a d e\n");

    // ----- line patterns -----
    add("lines_0inf12.pat", "four lines with slopes 0, inf, 1, 2; cross-ratio 1/2",
        "pat v1 n=2\n"
        "sub l1 rows=1,0\n"
        "sub l2 rows=0,1\n"
        "sub l3 rows=1,1\n"
        "sub l4 rows=1,2\n");

    add("lines_0inf13.pat", "four lines with slopes 0, inf, 1, 3; cross-ratio 1/3",
        "pat v1 n=2\n"
        "sub l1 rows=1,0\n"
        "sub l2 rows=0,1\n"
        "sub l3 rows=1,1\n"
        "sub l4 rows=1,3\n");

    // ----- trees and point sets -----
    add("trivalent_ball_4.tree", "radius-4 ball of the 3-regular tree",
        bassserre::serialize_tree(regular_ball(3, 4)));

    add("axis_points.pts", "the x-axis inside a small planar box",
        [] {
            std::string s = "pts v1 host=lattice:2:10:sup\n";
            for (int x = -10; x <= 10; ++x) s += "p " + std::to_string(x) + " 0\n";
            return s;
        }());

    return fx;
}

} // namespace

const std::vector<Fixture>& all() {
    static const std::vector<Fixture> corpus = make_corpus();
    return corpus;
}

const std::string& content(const std::string& name) {
    for (const auto& f : all())
        if (f.name == name) return f.content;
    throw Error("UnknownFixture", "no fixture named " + name);
}

} // namespace qtrees::fixtures
