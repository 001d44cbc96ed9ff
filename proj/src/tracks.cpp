#include "qtrees/tracks.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "qtrees/error.hpp"
#include "qtrees/matrix.hpp"

namespace qtrees::tracks {

int TriComplex::edge_of(int a, int b) const {
    auto it = edge_index.find({std::min(a, b), std::max(a, b)});
    if (it == edge_index.end()) throw Error("BadComplex", "no such edge");
    return it->second;
}

TriComplex TriComplex::build(
    const std::vector<std::string>& vertices,
    const std::vector<std::pair<std::string, std::array<std::string, 3>>>& tris,
    const std::vector<std::pair<std::string, std::pair<std::string, std::string>>>& bare_edges) {
    TriComplex c;
    for (const auto& v : vertices) {
        if (c.vertex_index.count(v)) throw Error("BadComplex", "duplicate vertex " + v);
        c.vertex_index[v] = static_cast<int>(c.vertex_ids.size());
        c.vertex_ids.push_back(v);
    }
    auto vid = [&](const std::string& v) {
        auto it = c.vertex_index.find(v);
        if (it == c.vertex_index.end()) throw Error("BadComplex", "unknown vertex " + v);
        return it->second;
    };
    std::vector<std::pair<std::string, std::array<int, 3>>> raw;
    for (const auto& [id, tv] : tris) raw.push_back({id, {vid(tv[0]), vid(tv[1]), vid(tv[2])}});
    std::sort(raw.begin(), raw.end());
    for (size_t i = 1; i < raw.size(); ++i)
        if (raw[i].first == raw[i - 1].first) throw Error("BadComplex", "duplicate triangle id");
    for (const auto& [id, tv] : raw) c.triangles.push_back(Tri{id, tv});

    auto add_edge = [&](int a, int b, const std::string& bare_id) {
        if (a == b) throw Error("BadComplex", "degenerate edge");
        std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        auto it = c.edge_index.find(key);
        if (it == c.edge_index.end()) {
            c.edge_index[key] = static_cast<int>(c.edges.size());
            c.edges.push_back(Edge{key.first, key.second, bare_id, {}});
            return static_cast<int>(c.edges.size()) - 1;
        }
        if (!bare_id.empty()) throw Error("BadComplex", "bare edge duplicates a triangle edge");
        return it->second;
    };
    for (size_t t = 0; t < c.triangles.size(); ++t) {
        const auto& v = c.triangles[t].v;
        if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
            throw Error("BadComplex", "triangle vertices must be distinct");
        for (auto [a, b] : {std::pair{v[0], v[1]}, std::pair{v[1], v[2]}, std::pair{v[0], v[2]}})
            c.edges[add_edge(a, b, "")].tris.push_back(static_cast<int>(t));
    }
    for (const auto& [id, uv] : bare_edges) add_edge(vid(uv.first), vid(uv.second), id);

    // re-sort edges by (u, v) and rebuild indices
    std::vector<Edge> sorted = c.edges;
    std::sort(sorted.begin(), sorted.end(),
              [](const Edge& a, const Edge& b) { return std::pair{a.u, a.v} < std::pair{b.u, b.v}; });
    c.edge_index.clear();
    for (size_t i = 0; i < sorted.size(); ++i) c.edge_index[{sorted[i].u, sorted[i].v}] = static_cast<int>(i);
    c.edges = std::move(sorted);
    for (auto& e : c.edges) e.tris.clear();
    for (size_t t = 0; t < c.triangles.size(); ++t) {
        const auto& v = c.triangles[t].v;
        for (auto [a, b] : {std::pair{v[0], v[1]}, std::pair{v[1], v[2]}, std::pair{v[0], v[2]}})
            c.edges[c.edge_of(a, b)].tris.push_back(static_cast<int>(t));
    }
    return c;
}

std::vector<std::string> validate_complex(const TriComplex& c) {
    std::vector<std::string> out;
    if (c.vertex_ids.empty()) {
        out.push_back("complex has no vertices");
        return out;
    }
    for (const auto& t : c.triangles)
        if (t.v[0] == t.v[1] || t.v[1] == t.v[2] || t.v[0] == t.v[2])
            out.push_back("triangle " + t.id + ": vertices not distinct");
    // connectivity over the 1-skeleton
    std::vector<int> seen(c.vertex_ids.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    size_t n = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& e : c.edges) {
            int other = -1;
            if (e.u == v) other = e.v;
            if (e.v == v) other = e.u;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                ++n;
                q.push(other);
            }
        }
    }
    if (n != c.vertex_ids.size()) out.push_back("complex is not connected");
    return out;
}

NormalPattern zero_pattern(const TriComplex& c) {
    NormalPattern p;
    p.corners.assign(c.triangles.size(), {0, 0, 0});
    p.bare.assign(c.edges.size(), 0);
    return p;
}

namespace {

// weight a triangle induces on its side {a, b}: sum of the two corner coords
long long side_weight(const TriComplex::Tri& t, const std::array<long long, 3>& x, int a, int b) {
    long long w = 0;
    for (int i = 0; i < 3; ++i)
        if (t.v[i] == a || t.v[i] == b) w += x[i];
    return w;
}

} // namespace

std::vector<std::string> validate_pattern(const TriComplex& c, const NormalPattern& p) {
    std::vector<std::string> out;
    if (p.corners.size() != c.triangles.size() || p.bare.size() != c.edges.size()) {
        out.push_back("pattern shape does not match the complex");
        return out;
    }
    for (size_t t = 0; t < c.triangles.size(); ++t)
        for (int i = 0; i < 3; ++i)
            if (p.corners[t][i] < 0)
                out.push_back("triangle " + c.triangles[t].id + ": negative corner coordinate");
    for (size_t e = 0; e < c.edges.size(); ++e) {
        const auto& edge = c.edges[e];
        if (!edge.tris.empty() && p.bare[e] != 0)
            out.push_back("edge in a triangle carries a bare weight");
        if (edge.tris.empty() && p.bare[e] < 0) out.push_back("negative bare weight");
        long long w = -1;
        for (int t : edge.tris) {
            long long wt = side_weight(c.triangles[t], p.corners[t], edge.u, edge.v);
            if (w < 0)
                w = wt;
            else if (w != wt)
                out.push_back("edge (" + c.vertex_ids[edge.u] + "," + c.vertex_ids[edge.v] +
                              "): induced weights disagree across triangles");
        }
    }
    return out;
}

std::vector<long long> edge_weights(const TriComplex& c, const NormalPattern& p) {
    std::vector<long long> w(c.edges.size(), 0);
    for (size_t e = 0; e < c.edges.size(); ++e) {
        const auto& edge = c.edges[e];
        if (edge.tris.empty())
            w[e] = p.bare[e];
        else
            w[e] = side_weight(c.triangles[edge.tris[0]], p.corners[edge.tris[0]], edge.u, edge.v);
    }
    return w;
}

long long total_weight(const TriComplex& c, const NormalPattern& p) {
    auto w = edge_weights(c, p);
    return std::accumulate(w.begin(), w.end(), 0LL);
}

NormalPattern add_patterns(const TriComplex& c, const NormalPattern& a, const NormalPattern& b) {
    NormalPattern s = a;
    for (size_t t = 0; t < c.triangles.size(); ++t)
        for (int i = 0; i < 3; ++i) s.corners[t][i] += b.corners[t][i];
    for (size_t e = 0; e < c.edges.size(); ++e) s.bare[e] += b.bare[e];
    return s;
}

bool same_coordinates(const NormalPattern& a, const NormalPattern& b) {
    return a.corners == b.corners && a.bare == b.bare;
}

std::string coordinate_key(const TriComplex& c, const NormalPattern& p) {
    std::string k;
    for (size_t t = 0; t < c.triangles.size(); ++t)
        for (int i = 0; i < 3; ++i) k += std::to_string(p.corners[t][i]) + ",";
    for (size_t e = 0; e < c.edges.size(); ++e)
        if (c.edges[e].tris.empty()) k += std::to_string(p.bare[e]) + ",";
    return k;
}

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

struct Embedding {
    std::vector<long long> off; // per edge: first point id
    long long n_points = 0;
    std::vector<long long> weights;
    int n_comps = 0;
    std::vector<int> comp_of_point;
    std::vector<NormalPattern> sub;                              // canonical order
    std::vector<std::vector<std::pair<int, long long>>> points;  // per comp: (edge, idx)
};

// point id of the j-th point (1-based) counted from vertex `from` on edge e
long long point_from(const TriComplex& c, const std::vector<long long>& off,
                     const std::vector<long long>& w, int e, int from, long long j) {
    return c.edges[e].u == from ? off[e] + (j - 1) : off[e] + (w[e] - j);
}

std::vector<long long> pattern_signature(const TriComplex& c, const NormalPattern& p) {
    std::vector<long long> s;
    for (size_t t = 0; t < c.triangles.size(); ++t)
        for (int i = 0; i < 3; ++i) s.push_back(p.corners[t][i]);
    for (size_t e = 0; e < c.edges.size(); ++e)
        if (c.edges[e].tris.empty()) s.push_back(p.bare[e]);
    return s;
}

Embedding embed(const TriComplex& c, const NormalPattern& p) {
    auto violations = validate_pattern(c, p);
    if (!violations.empty()) throw Error("BadPattern", violations.front());

    Embedding em;
    em.weights = edge_weights(c, p);
    em.off.assign(c.edges.size(), 0);
    for (size_t e = 0; e < c.edges.size(); ++e) {
        em.off[e] = em.n_points;
        em.n_points += em.weights[e];
    }

    UnionFind uf(static_cast<size_t>(em.n_points));
    for (size_t t = 0; t < c.triangles.size(); ++t) {
        const auto& tri = c.triangles[t];
        const auto& x = p.corners[t];
        // the j-th corner arc joins the j-th points from the corner on its two sides
        for (int i = 0; i < 3; ++i) {
            int a = tri.v[i];
            int others[2];
            int oi = 0;
            for (int j = 0; j < 3; ++j)
                if (j != i) others[oi++] = tri.v[j];
            int e1 = c.edge_of(a, others[0]);
            int e2 = c.edge_of(a, others[1]);
            for (long long j = 1; j <= x[i]; ++j)
                uf.unite(static_cast<int>(point_from(c, em.off, em.weights, e1, a, j)),
                         static_cast<int>(point_from(c, em.off, em.weights, e2, a, j)));
        }
    }

    // collect classes
    std::map<int, int> class_to_tmp;
    std::vector<NormalPattern> tmp_sub;
    std::vector<std::vector<std::pair<int, long long>>> tmp_points;
    auto tmp_of = [&](int cls) {
        auto it = class_to_tmp.find(cls);
        if (it != class_to_tmp.end()) return it->second;
        int id = static_cast<int>(tmp_sub.size());
        class_to_tmp[cls] = id;
        tmp_sub.push_back(zero_pattern(c));
        tmp_points.emplace_back();
        return id;
    };

    em.comp_of_point.assign(static_cast<size_t>(em.n_points), -1);
    for (size_t e = 0; e < c.edges.size(); ++e)
        for (long long idx = 0; idx < em.weights[e]; ++idx) {
            long long pt = em.off[e] + idx;
            int id = tmp_of(uf.find(static_cast<int>(pt)));
            em.comp_of_point[pt] = id;
            tmp_points[id].emplace_back(static_cast<int>(e), idx);
            if (c.edges[e].tris.empty()) tmp_sub[id].bare[e] += 1;
        }
    for (size_t t = 0; t < c.triangles.size(); ++t) {
        const auto& tri = c.triangles[t];
        const auto& x = p.corners[t];
        for (int i = 0; i < 3; ++i) {
            int a = tri.v[i];
            int other = tri.v[i == 0 ? 1 : 0];
            int e1 = c.edge_of(a, other);
            for (long long j = 1; j <= x[i]; ++j) {
                long long pt = point_from(c, em.off, em.weights, e1, a, j);
                tmp_sub[em.comp_of_point[pt]].corners[t][i] += 1;
            }
        }
    }

    // canonical component order: (total weight, coordinate signature)
    std::vector<int> order(tmp_sub.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::pair<long long, std::vector<long long>>> keys;
    keys.reserve(tmp_sub.size());
    for (const auto& s : tmp_sub) keys.emplace_back(total_weight(c, s), pattern_signature(c, s));
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (keys[a].first != keys[b].first) return keys[a].first < keys[b].first;
        return keys[a].second < keys[b].second;
    });
    std::vector<int> rank(tmp_sub.size());
    for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
    em.n_comps = static_cast<int>(tmp_sub.size());
    em.sub.resize(tmp_sub.size());
    em.points.resize(tmp_sub.size());
    for (size_t i = 0; i < tmp_sub.size(); ++i) {
        em.sub[rank[i]] = std::move(tmp_sub[i]);
        em.points[rank[i]] = std::move(tmp_points[i]);
    }
    for (auto& cp : em.comp_of_point)
        if (cp >= 0) cp = rank[cp];
    return em;
}

} // namespace

std::vector<NormalPattern> pattern_components(const TriComplex& c, const NormalPattern& p) {
    return embed(c, p).sub;
}

Complement complement_components(const TriComplex& c, const NormalPattern& p) {
    auto violations = validate_pattern(c, p);
    if (!violations.empty()) throw Error("BadPattern", violations.front());
    std::vector<long long> w = edge_weights(c, p);

    const long long nv = static_cast<long long>(c.vertex_ids.size());
    std::vector<long long> seg_off(c.edges.size());
    long long nodes = nv;
    for (size_t e = 0; e < c.edges.size(); ++e) {
        seg_off[e] = nodes;
        nodes += w[e] + 1;
    }
    // triangle regions: per corner its x_i bands, then one central region
    std::vector<std::array<long long, 4>> tri_off(c.triangles.size()); // [corner0, corner1, corner2, central]
    for (size_t t = 0; t < c.triangles.size(); ++t) {
        for (int i = 0; i < 3; ++i) {
            tri_off[t][i] = nodes;
            nodes += p.corners[t][i];
        }
        tri_off[t][3] = nodes;
        nodes += 1;
    }

    UnionFind uf(static_cast<size_t>(nodes));
    for (size_t e = 0; e < c.edges.size(); ++e) {
        uf.unite(static_cast<int>(c.edges[e].u), static_cast<int>(seg_off[e]));
        uf.unite(static_cast<int>(c.edges[e].v), static_cast<int>(seg_off[e] + w[e]));
    }
    for (size_t t = 0; t < c.triangles.size(); ++t) {
        const auto& tri = c.triangles[t];
        const auto& x = p.corners[t];
        for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
            int vp = tri.v[i], vq = tri.v[j];
            int e = c.edge_of(vp, vq);
            for (long long s = 0; s <= w[e]; ++s) {
                // s counted from vp
                long long region;
                if (s < x[i])
                    region = tri_off[t][i] + s;
                else if (w[e] - s < x[j])
                    region = tri_off[t][j] + (w[e] - s);
                else
                    region = tri_off[t][3];
                long long seg = c.edges[e].u == vp ? seg_off[e] + s : seg_off[e] + (w[e] - s);
                uf.unite(static_cast<int>(seg), static_cast<int>(region));
            }
        }
    }

    Complement out;
    std::map<int, int> class_to_region;
    auto region_of = [&](long long node) {
        int cls = uf.find(static_cast<int>(node));
        auto it = class_to_region.find(cls);
        if (it != class_to_region.end()) return it->second;
        int id = static_cast<int>(class_to_region.size());
        class_to_region[cls] = id;
        return id;
    };
    // fix region ids by scanning nodes in order
    for (long long nd = 0; nd < nodes; ++nd) region_of(nd);
    out.n_regions = static_cast<int>(class_to_region.size());
    out.region_of_vertex.resize(nv);
    out.region_vertices.assign(out.n_regions, {});
    for (long long v = 0; v < nv; ++v) {
        int r = region_of(v);
        out.region_of_vertex[v] = r;
        out.region_vertices[r].push_back(static_cast<int>(v));
    }
    out.segment_region.resize(c.edges.size());
    for (size_t e = 0; e < c.edges.size(); ++e) {
        out.segment_region[e].resize(w[e] + 1);
        for (long long s = 0; s <= w[e]; ++s)
            out.segment_region[e][s] = region_of(seg_off[e] + s);
    }
    return out;
}

EssentialCheck is_essential(const TriComplex& c, const NormalPattern& track, long long m) {
    Complement comp = complement_components(c, track);
    EssentialCheck out;
    out.component_count = comp.n_regions;
    out.non_separating = comp.n_regions != 2;
    for (const auto& rv : comp.region_vertices)
        out.side_vertex_counts.push_back(static_cast<long long>(rv.size()));
    if (comp.n_regions == 2)
        out.essential = out.side_vertex_counts[0] >= m && out.side_vertex_counts[1] >= m;
    return out;
}

bool DualGraph::is_tree() const {
    if (static_cast<int>(edges.size()) != nodes - 1) return false;
    UnionFind uf(static_cast<size_t>(nodes));
    for (const auto& e : edges) uf.unite(e.a, e.b);
    int roots = 0;
    for (int i = 0; i < nodes; ++i)
        if (uf.find(i) == i) ++roots;
    return roots == 1;
}

DualGraph dual_graph(const TriComplex& c, const NormalPattern& p) {
    Embedding em = embed(c, p);
    Complement comp = complement_components(c, p);

    DualGraph g;
    g.nodes = comp.n_regions;
    for (int ti = 0; ti < em.n_comps; ++ti) {
        std::vector<int> regions;
        for (const auto& [e, idx] : em.points[ti]) {
            regions.push_back(comp.segment_region[e][idx]);
            regions.push_back(comp.segment_region[e][idx + 1]);
        }
        std::sort(regions.begin(), regions.end());
        regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
        if (regions.size() == 2)
            g.edges.push_back(DualGraph::DEdge{regions[0], regions[1], ti});
        else
            g.flagged_tracks.push_back(ti);
    }
    return g;
}

std::vector<NormalPattern> enumerate_tracks(const TriComplex& c, long long weight_cap,
                                            long long node_budget) {
    const int ne = static_cast<int>(c.edges.size());
    std::vector<std::array<int, 3>> tri_edges(c.triangles.size());
    for (size_t t = 0; t < c.triangles.size(); ++t) {
        const auto& v = c.triangles[t].v;
        tri_edges[t] = {c.edge_of(v[0], v[1]), c.edge_of(v[1], v[2]), c.edge_of(v[0], v[2])};
    }

    std::vector<std::pair<std::vector<long long>, NormalPattern>> found;
    std::vector<long long> w(ne, -1); // -1 undecided
    std::vector<char> in_b(ne, 0);
    long long nodes_used = 0;

    std::function<void(int, long long)> dfs = [&](int start, long long used) {
        if (++nodes_used > node_budget) throw Error("BudgetExceeded", "track enumeration budget");
        int next = -1;
        for (int e = 0; e < ne; ++e)
            if (in_b[e] && w[e] < 0) {
                next = e;
                break;
            }
        if (next < 0) {
            // closed: all triangles touching the support are fully decided
            NormalPattern p = zero_pattern(c);
            for (size_t t = 0; t < c.triangles.size(); ++t) {
                long long s01 = std::max(w[tri_edges[t][0]], 0LL);
                long long s12 = std::max(w[tri_edges[t][1]], 0LL);
                long long s02 = std::max(w[tri_edges[t][2]], 0LL);
                long long x0 = s01 + s02 - s12, x1 = s01 + s12 - s02, x2 = s02 + s12 - s01;
                if (x0 < 0 || x1 < 0 || x2 < 0 || x0 % 2 || x1 % 2 || x2 % 2) return; // not normal
                p.corners[t] = {x0 / 2, x1 / 2, x2 / 2};
            }
            for (int e = 0; e < ne; ++e)
                if (c.edges[e].tris.empty() && w[e] > 0) p.bare[e] = w[e];
            Embedding em = embed(c, p);
            if (em.n_comps != 1) return;
            found.emplace_back(pattern_signature(c, p), p);
            return;
        }

        // admissible weights for `next` from its fully-decided triangles
        long long lo = 0, hi = weight_cap - used;
        int parity = -1;
        for (int t : c.edges[next].tris) {
            long long a = -1, b = -1;
            for (int e : tri_edges[t]) {
                if (e == next) continue;
                if (a < 0)
                    a = w[e];
                else
                    b = w[e];
            }
            if (a < 0 || b < 0) continue; // sibling still undecided
            lo = std::max(lo, std::llabs(a - b));
            hi = std::min(hi, a + b);
            int par = static_cast<int>((a + b) % 2);
            if (parity >= 0 && parity != par) return; // contradictory demands
            parity = par;
        }
        for (long long v = lo; v <= hi; ++v) {
            if (parity >= 0 && v % 2 != parity) continue;
            if (v > 0 && next < start) continue; // keep `start` the minimal support edge
            w[next] = v;
            std::vector<int> marked;
            if (v > 0)
                for (int t : c.edges[next].tris)
                    for (int e : tri_edges[t])
                        if (!in_b[e]) {
                            in_b[e] = 1;
                            marked.push_back(e);
                        }
            dfs(start, used + v);
            for (int e : marked) in_b[e] = 0;
            w[next] = -1;
        }
    };

    for (int start = 0; start < ne; ++start) {
        for (long long v0 = 1; v0 <= weight_cap; ++v0) {
            std::fill(w.begin(), w.end(), -1);
            std::fill(in_b.begin(), in_b.end(), 0);
            w[start] = v0;
            in_b[start] = 1;
            std::vector<int> marked;
            for (int t : c.edges[start].tris)
                for (int e : tri_edges[t])
                    if (!in_b[e]) {
                        in_b[e] = 1;
                        marked.push_back(e);
                    }
            dfs(start, v0);
            for (int e : marked) in_b[e] = 0;
            w[start] = -1;
            in_b[start] = 0;
        }
    }

    std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
        long long wa = total_weight(c, a.second), wb = total_weight(c, b.second);
        if (wa != wb) return wa < wb;
        return a.first < b.first;
    });
    found.erase(std::unique(found.begin(), found.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                found.end());
    std::vector<NormalPattern> out;
    out.reserve(found.size());
    for (auto& [sig, p] : found) out.push_back(std::move(p));
    return out;
}

Report FamilyResult::report(const TriComplex& c) const {
    Report rep;
    rep.add("tracks", tracks.size());
    for (size_t i = 0; i < tracks.size(); ++i)
        rep.add("track." + std::to_string(i) + ".coords", coordinate_key(c, tracks[i]));
    rep.add("candidates", candidates);
    rep.add("rejected_inessential", rejected_inessential);
    rep.add("rejected_duplicate", rejected_duplicate);
    rep.add("rejected_relative", rejected_relative);
    rep.add("non_separating_seen", non_separating_seen);
    rep.add("max_final_region_vertices", max_final_region_vertices);
    rep.add("all_final_regions_below_min", all_final_regions_below_min);
    return rep;
}

FamilyResult maximal_essential_family(const TriComplex& c, const FamilyOptions& opts) {
    auto violations = validate_complex(c);
    if (!violations.empty()) throw Error("BadComplex", violations.front());

    FamilyResult res;
    res.family = zero_pattern(c);
    std::vector<NormalPattern> candidates = enumerate_tracks(c, opts.weight_cap, opts.node_budget);
    res.candidates = static_cast<long long>(candidates.size());

    for (const NormalPattern& tau : candidates) {
        EssentialCheck ess = is_essential(c, tau, opts.essential_min);
        if (ess.non_separating) ++res.non_separating_seen;
        if (!ess.essential) {
            ++res.rejected_inessential;
            continue;
        }
        bool dup = false;
        for (const auto& t : res.tracks)
            if (same_coordinates(t, tau)) dup = true;
        if (dup) {
            ++res.rejected_duplicate;
            continue;
        }

        NormalPattern sum = add_patterns(c, res.family, tau);
        Embedding em = embed(c, sum);
        Complement comp = complement_components(c, sum);
        bool ok = true;
        for (const NormalPattern& sigma : res.tracks) {
            int found = -1;
            for (int i = 0; i < em.n_comps && found < 0; ++i)
                if (same_coordinates(em.sub[i], sigma)) found = i;
            if (found < 0) {
                ok = false; // summands merged; treat as a failed addition
                break;
            }
            std::vector<int> regions;
            for (const auto& [e, idx] : em.points[found]) {
                regions.push_back(comp.segment_region[e][idx]);
                regions.push_back(comp.segment_region[e][idx + 1]);
            }
            std::sort(regions.begin(), regions.end());
            regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
            if (regions.size() != 2 ||
                static_cast<long long>(comp.region_vertices[regions[0]].size()) < opts.essential_min ||
                static_cast<long long>(comp.region_vertices[regions[1]].size()) < opts.essential_min) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++res.rejected_relative;
            continue;
        }
        res.family = sum;
        res.tracks.push_back(tau);
    }

    Complement fin = complement_components(c, res.family);
    res.all_final_regions_below_min = true;
    for (const auto& rv : fin.region_vertices) {
        res.max_final_region_vertices =
            std::max(res.max_final_region_vertices, static_cast<long long>(rv.size()));
        if (static_cast<long long>(rv.size()) >= opts.essential_min)
            res.all_final_regions_below_min = false;
    }
    return res;
}

int h1_rank(const TriComplex& c) {
    auto violations = validate_complex(c);
    if (!violations.empty()) throw Error("BadComplex", violations.front());
    const int nv = static_cast<int>(c.vertex_ids.size());
    const int ne = static_cast<int>(c.edges.size());
    const int nt = static_cast<int>(c.triangles.size());

    QMatrix d1(nv, ne);
    for (int e = 0; e < ne; ++e) {
        d1.at(c.edges[e].u, e) = -1;
        d1.at(c.edges[e].v, e) = 1;
    }
    QMatrix d2(ne, nt);
    for (int t = 0; t < nt; ++t) {
        const auto& v = c.triangles[t].v;
        // boundary (v0,v1) + (v1,v2) - (v0,v2), each against the stored orientation
        auto put = [&](int a, int b, int sign) {
            int e = c.edge_of(a, b);
            int s = a < b ? sign : -sign;
            d2.at(e, t) += s;
        };
        put(v[0], v[1], 1);
        put(v[1], v[2], 1);
        put(v[0], v[2], -1);
    }
    return (ne - d1.rank()) - d2.rank();
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

} // namespace

TriComplex parse_cx2(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    std::vector<std::string> vertices;
    std::vector<std::pair<std::string, std::array<std::string, 3>>> tris;
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> bare;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (!header) {
            if (toks.size() != 2 || toks[0] != "cx2" || toks[1] != "v1")
                throw ParseError(lineno, "expected 'cx2 v1'");
            header = true;
            continue;
        }
        if (toks[0] == "v" && toks.size() == 2) {
            vertices.push_back(toks[1]);
        } else if (toks[0] == "t" && toks.size() == 5) {
            tris.push_back({toks[1], {toks[2], toks[3], toks[4]}});
        } else if (toks[0] == "e" && toks.size() == 4) {
            bare.push_back({toks[1], {toks[2], toks[3]}});
        } else {
            throw ParseError(lineno, "unknown or malformed directive '" + toks[0] + "'");
        }
    }
    if (!header) throw ParseError(1, "missing cx2 header");
    try {
        return TriComplex::build(vertices, tris, bare);
    } catch (const Error& e) {
        throw ParseError(lineno, e.what());
    }
}

std::string serialize_cx2(const TriComplex& c) {
    std::string out = "cx2 v1\n";
    std::vector<std::string> vs = c.vertex_ids;
    std::sort(vs.begin(), vs.end());
    for (const auto& v : vs) out += "v " + v + "\n";
    for (const auto& t : c.triangles)
        out += "t " + t.id + " " + c.vertex_ids[t.v[0]] + " " + c.vertex_ids[t.v[1]] + " " +
               c.vertex_ids[t.v[2]] + "\n";
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> bare;
    for (const auto& e : c.edges)
        if (!e.bare_id.empty()) bare.push_back({e.bare_id, {c.vertex_ids[e.u], c.vertex_ids[e.v]}});
    std::sort(bare.begin(), bare.end());
    for (const auto& [id, uv] : bare) out += "e " + id + " " + uv.first + " " + uv.second + "\n";
    return out;
}

NormalPattern parse_npat(const std::string& text, const TriComplex& c) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    NormalPattern p = zero_pattern(c);
    std::map<std::string, int> tri_of;
    for (size_t t = 0; t < c.triangles.size(); ++t) tri_of[c.triangles[t].id] = static_cast<int>(t);
    std::map<std::string, int> bare_of;
    for (size_t e = 0; e < c.edges.size(); ++e)
        if (!c.edges[e].bare_id.empty()) bare_of[c.edges[e].bare_id] = static_cast<int>(e);

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (!header) {
            if (toks.size() != 3 || toks[0] != "npat" || toks[1] != "v1" || toks[2].rfind("over=", 0) != 0)
                throw ParseError(lineno, "expected 'npat v1 over=<id>'");
            p.over = toks[2].substr(5);
            header = true;
            continue;
        }
        if (toks[0] == "corner" && toks.size() == 3) {
            auto it = tri_of.find(toks[1]);
            if (it == tri_of.end()) throw ParseError(lineno, "unknown triangle '" + toks[1] + "'");
            std::array<long long, 3> x{};
            std::string cell;
            int xi = 0;
            for (char ch : toks[2] + ",") {
                if (ch == ',') {
                    if (xi >= 3) throw ParseError(lineno, "corner needs three coordinates");
                    try {
                        x[xi++] = std::stoll(cell);
                    } catch (const std::exception&) {
                        throw ParseError(lineno, "bad coordinate '" + cell + "'");
                    }
                    cell.clear();
                } else
                    cell += ch;
            }
            if (xi != 3) throw ParseError(lineno, "corner needs three coordinates");
            p.corners[it->second] = x;
        } else if (toks[0] == "bare" && toks.size() == 3) {
            auto it = bare_of.find(toks[1]);
            if (it == bare_of.end()) throw ParseError(lineno, "unknown bare edge '" + toks[1] + "'");
            try {
                p.bare[it->second] = std::stoll(toks[2]);
            } catch (const std::exception&) {
                throw ParseError(lineno, "bad weight '" + toks[2] + "'");
            }
        } else {
            throw ParseError(lineno, "unknown or malformed directive '" + toks[0] + "'");
        }
    }
    if (!header) throw ParseError(1, "missing npat header");
    return p;
}

std::string serialize_npat(const TriComplex& c, const NormalPattern& p) {
    std::string out = "npat v1 over=" + p.over + "\n";
    for (size_t t = 0; t < c.triangles.size(); ++t)
        out += "corner " + c.triangles[t].id + " " + std::to_string(p.corners[t][0]) + "," +
               std::to_string(p.corners[t][1]) + "," + std::to_string(p.corners[t][2]) + "\n";
    std::vector<std::pair<std::string, long long>> bare;
    for (size_t e = 0; e < c.edges.size(); ++e)
        if (!c.edges[e].bare_id.empty()) bare.push_back({c.edges[e].bare_id, p.bare[e]});
    std::sort(bare.begin(), bare.end());
    for (const auto& [id, w] : bare) out += "bare " + id + " " + std::to_string(w) + "\n";
    return out;
}

} // namespace qtrees::tracks
