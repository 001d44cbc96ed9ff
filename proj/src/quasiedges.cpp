#include "qtrees/quasiedges.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "qtrees/error.hpp"

namespace qtrees::quasiedges {

BoundedTree BoundedTree::from_ball(const bassserre::TreeBall& ball) {
    FiniteTree t = FiniteTree::from_ball(ball);
    std::vector<int> boundary;
    for (const auto& v : ball.vertices)
        if (v.truncated) boundary.push_back(v.id);
    if (boundary.empty()) boundary = t.leaves();
    return with_boundary(std::move(t), std::move(boundary));
}

BoundedTree BoundedTree::from_tree(FiniteTree t) {
    std::vector<int> boundary = t.leaves();
    return with_boundary(std::move(t), std::move(boundary));
}

BoundedTree BoundedTree::with_boundary(FiniteTree t, std::vector<int> boundary) {
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    if (boundary.empty()) throw Error("BadBoundary", "boundary set is empty");
    for (int b : boundary)
        if (b < 0 || b >= t.n) throw Error("BadBoundary", "boundary vertex outside tree");
    BoundedTree bt;
    bt.tree = std::move(t);
    bt.boundary = std::move(boundary);
    return bt;
}

QuasiEdge QuasiEdge::of(const BoundedTree& t, const std::vector<int>& side) {
    std::set<int> bset(t.boundary.begin(), t.boundary.end());
    std::set<int> s(side.begin(), side.end());
    for (int x : s)
        if (!bset.count(x)) throw Error("BadQuasiEdge", "side contains a non-boundary vertex");
    if (s.empty() || s.size() == bset.size())
        throw Error("BadQuasiEdge", "both sides must be nonempty");
    QuasiEdge q;
    if (s.count(t.boundary.front()))
        q.o.assign(s.begin(), s.end());
    else
        for (int b : t.boundary)
            if (!s.count(b)) q.o.push_back(b);
    return q;
}

std::vector<int> QuasiEdge::other(const BoundedTree& t) const {
    std::set<int> s(o.begin(), o.end());
    std::vector<int> out;
    for (int b : t.boundary)
        if (!s.count(b)) out.push_back(b);
    return out;
}

std::vector<int> hull(const BoundedTree& t, const std::vector<int>& o) {
    if (o.empty()) throw Error("EmptyTarget", "hull of an empty set");
    const FiniteTree& tr = t.tree;
    std::vector<int> in_o(tr.n, 0);
    for (int x : o) in_o[x] = 1;

    // subtree counts of o-vertices, children processed before parents
    std::vector<int> order(tr.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return tr.depth[a] > tr.depth[b]; });
    std::vector<int> cnt(tr.n, 0);
    for (int v : order) {
        cnt[v] += in_o[v];
        if (tr.parent[v] >= 0) cnt[tr.parent[v]] += cnt[v];
    }
    int total = cnt[tr.root];

    std::vector<int> out;
    for (int v = 0; v < tr.n; ++v) {
        if (in_o[v]) {
            out.push_back(v);
            continue;
        }
        int directions = total - cnt[v] > 0 ? 1 : 0;
        for (int w : tr.adj[v])
            if (w != tr.parent[v] && cnt[w] > 0) ++directions;
        if (directions >= 2) out.push_back(v);
    }
    return out;
}

namespace {

std::vector<int> neighborhood1(const FiniteTree& t, const std::vector<int>& s) {
    std::vector<char> in(t.n, 0);
    for (int v : s) {
        in[v] = 1;
        for (int w : t.adj[v]) in[w] = 1;
    }
    std::vector<int> out;
    for (int v = 0; v < t.n; ++v)
        if (in[v]) out.push_back(v);
    return out;
}

} // namespace

CoreInfo qe_core(const BoundedTree& t, const QuasiEdge& qe) {
    std::vector<int> h1 = hull(t, qe.o);
    std::vector<int> h2 = hull(t, qe.other(t));
    std::vector<int> n1 = neighborhood1(t.tree, h1);
    std::vector<int> n2 = neighborhood1(t.tree, h2);
    CoreInfo info;
    std::set_intersection(n1.begin(), n1.end(), n2.begin(), n2.end(), std::back_inserter(info.core));

    if (!info.core.empty()) {
        info.canonical_point = info.core.front();
        for (size_t i = 0; i < info.core.size(); ++i)
            for (size_t j = i + 1; j < info.core.size(); ++j)
                info.constant = std::max(info.constant,
                                         static_cast<long long>(t.tree.dist(info.core[i], info.core[j])));
        return info;
    }

    // hulls are far apart: constant 0, position at the bridging path midpoint
    std::vector<char> in1(t.tree.n, 0), in2(t.tree.n, 0);
    for (int v : h1) in1[v] = 1;
    for (int v : h2) in2[v] = 1;
    std::vector<int> par(t.tree.n, -2);
    std::queue<int> q;
    for (int v : h1) {
        par[v] = -1;
        q.push(v);
    }
    int hit = -1;
    while (!q.empty() && hit < 0) {
        int v = q.front();
        q.pop();
        if (in2[v]) {
            hit = v;
            break;
        }
        for (int w : t.tree.adj[v])
            if (par[w] == -2) {
                par[w] = v;
                if (in2[w]) {
                    hit = w;
                    break;
                }
                q.push(w);
            }
    }
    std::vector<int> path;
    for (int v = hit; v >= 0; v = par[v]) path.push_back(v);
    std::reverse(path.begin(), path.end()); // from hull1 to hull2
    info.canonical_point = path[path.size() / 2];
    info.constant = 0;
    return info;
}

long long qe_constant(const BoundedTree& t, const QuasiEdge& qe) { return qe_core(t, qe).constant; }

namespace {

// boundary vertices lying in the child-side subtree of each tree edge
std::vector<int> boundary_below(const BoundedTree& t, int child) {
    std::vector<int> out;
    for (int b : t.boundary) {
        int v = b;
        while (v != -1 && t.tree.depth[v] > t.tree.depth[child]) v = t.tree.parent[v];
        if (v == child) out.push_back(b);
    }
    return out;
}

} // namespace

std::optional<int> true_edge_partition(const BoundedTree& t, const QuasiEdge& qe) {
    std::vector<int> other = qe.other(t);
    for (size_t e = 0; e < t.tree.edges.size(); ++e) {
        std::vector<int> below = boundary_below(t, t.tree.edges[e].second);
        if (below == qe.o || below == other) return static_cast<int>(e);
    }
    return std::nullopt;
}

std::vector<QuasiEdge> all_edge_partitions(const BoundedTree& t) {
    std::vector<QuasiEdge> out;
    std::set<QuasiEdge> seen;
    for (size_t e = 0; e < t.tree.edges.size(); ++e) {
        std::vector<int> below = boundary_below(t, t.tree.edges[e].second);
        if (below.empty() || below.size() == t.boundary.size()) continue;
        QuasiEdge q = QuasiEdge::of(t, below);
        if (seen.insert(q).second) out.push_back(q);
    }
    return out;
}

QuasiEdge pushforward(const BoundedTree& t, const VertexMap& f, const QuasiEdge& qe) {
    if (static_cast<int>(f.img.size()) != t.tree.n)
        throw Error("BadMap", "vertex map is not total");
    auto beta = [&](int x) {
        int fx = f.img[x];
        int best = -1, best_d = 1 << 30;
        for (int b : t.boundary) {
            int d = t.tree.dist(fx, b);
            if (d < best_d || (d == best_d && b < best)) {
                best_d = d;
                best = b;
            }
        }
        return best;
    };

    std::vector<int> other = qe.other(t);
    std::map<int, std::pair<int, int>> votes; // target -> (count from O, count from O')
    for (int x : qe.o) ++votes[beta(x)].first;
    for (int x : other) ++votes[beta(x)].second;

    std::vector<int> side;
    for (const auto& [b, v] : votes)
        if (v.first > 0 && (v.second == 0 || v.first >= v.second)) side.push_back(b);
    if (side.empty() || side.size() == t.boundary.size())
        throw Error("DegeneratePushforward", "image partition collapsed to one side");
    return QuasiEdge::of(t, side);
}

Report NerveResult::report() const {
    Report rep;
    rep.add("nodes", nodes.size());
    rep.add("edges", edges.size());
    rep.add("connected", connected);
    rep.add("degenerate_skipped", degenerate_skipped);
    if (fit_defined) {
        rep.add("fit.K", rat_str(fit.k));
        rep.add("fit.C", rat_str(fit.c));
    }
    return rep;
}

NerveResult nerve_from_quasi_edges(const BoundedTree& t, const std::vector<QuasiEdge>& qes,
                                   long long threshold_d, const std::vector<Rat>& k_grid) {
    NerveResult res;
    std::set<QuasiEdge> seen;
    for (const auto& q : qes)
        if (seen.insert(q).second) res.nodes.push_back(q);

    for (const auto& q : res.nodes) {
        CoreInfo info = qe_core(t, q);
        if (info.core.empty()) info.core = {info.canonical_point};
        res.cores.push_back(info.core);
        res.core_point.push_back(info.canonical_point);
    }

    auto hausdorff = [&](const std::vector<int>& a, const std::vector<int>& b) {
        long long h = 0;
        for (int x : a) {
            long long best = 1 << 30;
            for (int y : b) best = std::min(best, static_cast<long long>(t.tree.dist(x, y)));
            h = std::max(h, best);
        }
        for (int y : b) {
            long long best = 1 << 30;
            for (int x : a) best = std::min(best, static_cast<long long>(t.tree.dist(x, y)));
            h = std::max(h, best);
        }
        return h;
    };
    for (size_t i = 0; i < res.nodes.size(); ++i)
        for (size_t j = i + 1; j < res.nodes.size(); ++j)
            if (hausdorff(res.cores[i], res.cores[j]) <= threshold_d)
                res.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));

    // connectivity and graph metric on the largest component
    const int n = static_cast<int>(res.nodes.size());
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : res.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::queue<int> q;
        q.push(s);
        comp[s] = ncomp;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = ncomp;
                    q.push(w);
                }
        }
        ++ncomp;
    }
    res.connected = ncomp == 1;
    std::vector<int> comp_size(ncomp, 0);
    for (int v = 0; v < n; ++v) ++comp_size[comp[v]];
    int big = 0;
    for (int ci = 1; ci < ncomp; ++ci)
        if (comp_size[ci] > comp_size[big]) big = ci;
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
        if (comp[v] == big) members.push_back(v);

    if (members.size() >= 2) {
        // BFS distances within the component
        std::map<int, std::map<int, long long>> gdist;
        for (int s : members) {
            std::map<int, long long> d;
            std::queue<int> q;
            q.push(s);
            d[s] = 0;
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (int w : adj[v])
                    if (!d.count(w)) {
                        d[w] = d[v] + 1;
                        q.push(w);
                    }
            }
            gdist[s] = std::move(d);
        }
        std::vector<std::pair<long long, long long>> pairs;
        for (int v : members) pairs.emplace_back(v, res.core_point[v]);
        res.fit = coarse::fit_qi_constants_fn(
            pairs, [&](long long a, long long b) { return gdist[static_cast<int>(a)][static_cast<int>(b)]; },
            [&](long long a, long long b) { return t.tree.dist(static_cast<int>(a), static_cast<int>(b)); },
            k_grid);
        res.fit_defined = true;
    }
    return res;
}

NerveResult orbit_nerve_graph(const BoundedTree& t, const QuasiEdge& qe0,
                              const std::vector<VertexMap>& generators, int word_len,
                              long long threshold_d, const std::vector<Rat>& k_grid) {
    std::vector<QuasiEdge> orbit{qe0};
    std::set<QuasiEdge> seen{qe0};
    long long degenerate = 0;
    size_t level_begin = 0;
    for (int len = 1; len <= word_len; ++len) {
        size_t level_end = orbit.size();
        for (size_t i = level_begin; i < level_end; ++i)
            for (const auto& g : generators) {
                try {
                    QuasiEdge img = pushforward(t, g, orbit[i]);
                    if (seen.insert(img).second) orbit.push_back(img);
                } catch (const Error& e) {
                    if (std::string(e.code()) == "DegeneratePushforward")
                        ++degenerate;
                    else
                        throw;
                }
            }
        level_begin = level_end;
    }
    NerveResult res = nerve_from_quasi_edges(t, orbit, threshold_d, k_grid);
    res.degenerate_skipped = degenerate;
    return res;
}

Report RetreeResult::report() const {
    Report rep;
    rep.add("h1", h1);
    rep.add("complex_vertices", complex.vertex_ids.size());
    rep.add("complex_triangles", complex.triangles.size());
    rep.add("family_tracks", family.tracks.size());
    rep.add("dual_nodes", dual.nodes);
    rep.add("dual_edges", dual.edges.size());
    rep.add("dual_is_tree", dual_is_tree);
    if (fit_defined) {
        rep.add("fit.K", rat_str(fit.k));
        rep.add("fit.C", rat_str(fit.c));
    }
    return rep;
}

namespace {

// simple cycles up to the given length; each cycle starts at its minimal
// vertex and is reported once (second vertex smaller than the last)
std::vector<std::vector<int>> short_cycles(int n, const std::vector<std::pair<int, int>>& edges,
                                           int max_len, long long budget) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<char> used(n, 0);
    long long steps = 0;

    std::function<void(int, int)> dfs = [&](int start, int v) {
        if (++steps > budget) throw Error("BudgetExceeded", "cycle enumeration budget");
        for (int w : adj[v]) {
            if (w == start && path.size() >= 3) {
                if (path[1] < path.back()) cycles.push_back(path);
                continue;
            }
            if (w <= start || used[w] || static_cast<int>(path.size()) >= max_len) continue;
            used[w] = 1;
            path.push_back(w);
            dfs(start, w);
            path.pop_back();
            used[w] = 0;
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        std::fill(used.begin(), used.end(), 0);
        used[s] = 1;
        dfs(s, s);
    }
    return cycles;
}

} // namespace

RetreeResult retree(const BoundedTree& t, const NerveResult& y1, const RetreeOptions& opts) {
    if (!y1.connected && y1.nodes.size() > 1)
        throw Error("Disconnected", "nerve graph must be connected");

    const int n = static_cast<int>(y1.nodes.size());
    std::vector<std::vector<int>> cycles =
        short_cycles(n, y1.edges, opts.cycle_fill_bound, opts.cycle_budget);

    std::vector<std::string> vertices;
    for (int i = 0; i < n; ++i) vertices.push_back("n" + std::to_string(i));
    std::vector<std::pair<std::string, std::array<std::string, 3>>> tris;
    std::set<std::pair<int, int>> covered;
    for (size_t k = 0; k < cycles.size(); ++k) {
        std::string cone = "c" + std::to_string(k);
        vertices.push_back(cone);
        const auto& cyc = cycles[k];
        for (size_t i = 0; i < cyc.size(); ++i) {
            int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
            covered.insert({std::min(a, b), std::max(a, b)});
            tris.push_back({"t" + std::to_string(k) + "_" + std::to_string(i),
                            {cone, "n" + std::to_string(a), "n" + std::to_string(b)}});
        }
    }
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> bare;
    for (size_t e = 0; e < y1.edges.size(); ++e) {
        auto [a, b] = y1.edges[e];
        if (!covered.count({std::min(a, b), std::max(a, b)}))
            bare.push_back({"y" + std::to_string(e),
                            {"n" + std::to_string(std::min(a, b)), "n" + std::to_string(std::max(a, b))}});
    }

    RetreeResult res;
    res.complex = tracks::TriComplex::build(vertices, tris, bare);
    res.h1 = tracks::h1_rank(res.complex);
    if (res.h1 != 0)
        throw Error("H1Nonzero", "nerve complex has h1 rank " + std::to_string(res.h1) +
                                     "; raise the cycle fill bound");

    res.family = tracks::maximal_essential_family(res.complex, opts.family);
    res.dual = tracks::dual_graph(res.complex, res.family.family);
    res.dual_is_tree = res.dual.is_tree();

    // region position: smallest nerve node among its vertices, else the
    // smallest node of a cone's cycle
    tracks::Complement comp = tracks::complement_components(res.complex, res.family.family);
    std::vector<int> region_node(comp.n_regions, -1);
    for (int v = 0; v < static_cast<int>(res.complex.vertex_ids.size()); ++v) {
        const std::string& name = res.complex.vertex_ids[v];
        int node;
        if (name[0] == 'n') {
            node = std::stoi(name.substr(1));
        } else {
            const auto& cyc = cycles[std::stoul(name.substr(1))];
            node = *std::min_element(cyc.begin(), cyc.end());
        }
        int r = comp.region_of_vertex[v];
        if (region_node[r] < 0 || node < region_node[r]) region_node[r] = node;
    }

    if (res.dual.nodes >= 2) {
        std::vector<std::vector<int>> dadj(res.dual.nodes);
        for (const auto& e : res.dual.edges) {
            dadj[e.a].push_back(e.b);
            dadj[e.b].push_back(e.a);
        }
        std::vector<std::vector<long long>> ddist(res.dual.nodes,
                                                  std::vector<long long>(res.dual.nodes, -1));
        for (int s = 0; s < res.dual.nodes; ++s) {
            std::queue<int> q;
            q.push(s);
            ddist[s][s] = 0;
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (int w : dadj[v])
                    if (ddist[s][w] < 0) {
                        ddist[s][w] = ddist[s][v] + 1;
                        q.push(w);
                    }
            }
        }
        std::vector<std::pair<long long, long long>> pairs;
        for (int r = 0; r < res.dual.nodes; ++r)
            pairs.emplace_back(r, y1.core_point[region_node[r]]);
        res.fit = coarse::fit_qi_constants_fn(
            pairs,
            [&](long long a, long long b) {
                long long d = ddist[static_cast<size_t>(a)][static_cast<size_t>(b)];
                if (d < 0) throw Error("Disconnected", "dual graph is not connected");
                return d;
            },
            [&](long long a, long long b) { return t.tree.dist(static_cast<int>(a), static_cast<int>(b)); },
            opts.k_grid);
        res.fit_defined = true;
    }
    return res;
}

} // namespace qtrees::quasiedges
