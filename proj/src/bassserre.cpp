#include "qtrees/bassserre.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "qtrees/error.hpp"

namespace qtrees::bassserre {

using gog::GraphOfGroups;
using gog::Index;

std::size_t TreeBall::truncated_count() const {
    std::size_t n = 0;
    for (const auto& v : vertices)
        if (v.truncated) ++n;
    return n;
}

namespace {

struct Entered {
    std::string edge; // empty at the root
    int end = -1;     // end (0/1) of that edge at this vertex's quotient vertex
};

// New children demanded at a vertex over quotient vertex v entered as given.
long long pending_children(const GraphOfGroups& g, const std::string& v, const Entered& in) {
    long long total = 0;
    for (const auto& [eid, e] : g.edges)
        for (int k = 0; k < 2; ++k) {
            if (e.ends[k].vertex != v) continue;
            Index idx = gog::end_index(g, e, k);
            long long c = idx.value();
            if (in.edge == eid && in.end == k) c -= 1;
            total += c;
        }
    return total;
}

} // namespace

TreeBall expand_ball(const GraphOfGroups& g, const std::string& base, int radius,
                     const ExpandOptions& opts) {
    auto violations = gog::validate(g);
    if (!violations.empty()) throw Error("InvalidGraph", violations.front());
    if (!g.vertices.count(base)) throw Error("BadVertex", "no vertex " + base);
    if (radius < 0) throw Error("BadRadius", "negative radius");

    // Reachability sweep; any reachable infinite end blocks expansion.
    {
        std::map<std::string, bool> seen;
        std::queue<std::string> q;
        q.push(base);
        seen[base] = true;
        while (!q.empty()) {
            std::string v = q.front();
            q.pop();
            for (const auto& [eid, e] : g.edges) {
                if (e.ends[0].vertex != v && e.ends[1].vertex != v) continue;
                for (int k = 0; k < 2; ++k)
                    if (gog::end_index(g, e, k).is_infinite())
                        throw Error("InfiniteIndex", "edge " + eid + " has an infinite-index end");
                for (int k = 0; k < 2; ++k)
                    if (!seen[e.ends[k].vertex]) {
                        seen[e.ends[k].vertex] = true;
                        q.push(e.ends[k].vertex);
                    }
            }
        }
    }

    TreeBall ball;
    ball.radius = radius;
    ball.vertices.push_back(TreeVertex{0, base, 0, false});
    std::vector<Entered> entered(1);

    std::queue<int> frontier;
    frontier.push(0);
    while (!frontier.empty()) {
        int x = frontier.front();
        frontier.pop();
        const TreeVertex xv = ball.vertices[x];
        if (xv.depth == radius) {
            ball.vertices[x].truncated = pending_children(g, xv.over, entered[x]) > 0;
            continue;
        }
        for (const auto& [eid, e] : g.edges)
            for (int k = 0; k < 2; ++k) {
                if (e.ends[k].vertex != xv.over) continue;
                long long count = gog::end_index(g, e, k).value();
                if (entered[x].edge == eid && entered[x].end == k) count -= 1;
                for (long long copy = 0; copy < count; ++copy) {
                    int cid = static_cast<int>(ball.vertices.size());
                    if (cid >= opts.vertex_budget)
                        throw Error("BudgetExceeded", "vertex budget " +
                                                          std::to_string(opts.vertex_budget) + " exceeded");
                    ball.vertices.push_back(TreeVertex{cid, e.ends[1 - k].vertex, xv.depth + 1, false});
                    entered.push_back(Entered{eid, 1 - k});
                    ball.edges.push_back(TreeEdge{static_cast<int>(ball.edges.size()), x, cid, eid, 2 - k});
                    frontier.push(cid);
                }
            }
    }
    return ball;
}

std::vector<std::string> validate_ball(const GraphOfGroups& g, const TreeBall& b) {
    std::vector<std::string> out;
    int n = static_cast<int>(b.vertices.size());
    std::vector<int> parent_edge(n, -1);
    for (const auto& e : b.edges) {
        if (e.parent < 0 || e.parent >= n || e.child < 0 || e.child >= n) {
            out.push_back("edge " + std::to_string(e.id) + ": bad endpoints");
            continue;
        }
        if (parent_edge[e.child] != -1) out.push_back("vertex " + std::to_string(e.child) + ": two parents");
        parent_edge[e.child] = e.id;
        if (b.vertices[e.child].depth != b.vertices[e.parent].depth + 1)
            out.push_back("edge " + std::to_string(e.id) + ": depth mismatch");
    }
    if (static_cast<int>(b.edges.size()) != n - 1 && n > 0)
        out.push_back("not a tree: edge count != vertex count - 1");

    for (const auto& v : b.vertices) {
        if (v.truncated) continue;
        // incident count over (edge, end) must match the injection index,
        // less one for the entering end
        for (const auto& [eid, ge] : g.edges)
            for (int k = 0; k < 2; ++k) {
                if (ge.ends[k].vertex != v.over) continue;
                long long expected = gog::end_index(g, ge, k).value();
                long long seen = 0;
                for (const auto& te : b.edges) {
                    if (te.parent == v.id && te.over_edge == eid && te.entering_end == 2 - k) ++seen;
                    if (te.child == v.id && te.over_edge == eid && te.entering_end == k + 1) ++seen;
                }
                if (seen != expected)
                    out.push_back("vertex " + std::to_string(v.id) + ": end (" + eid + "," +
                                  std::to_string(k + 1) + ") has " + std::to_string(seen) +
                                  " edges, expected " + std::to_string(expected));
            }
    }
    return out;
}

std::string to_string(Trichotomy t) {
    switch (t) {
        case Trichotomy::Bounded: return "BOUNDED";
        case Trichotomy::LineLike: return "LINELIKE";
        case Trichotomy::Bushy: return "BUSHY";
    }
    return "?";
}

std::string to_string(OracleVerdict v) {
    switch (v) {
        case OracleVerdict::Bounded: return "BOUNDED";
        case OracleVerdict::LineLike: return "LINELIKE";
        case OracleVerdict::Bushy: return "BUSHY";
        case OracleVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

Trichotomy classify_trichotomy(const GraphOfGroups& g) {
    auto violations = gog::validate(g);
    if (!violations.empty()) throw Error("InvalidGraph", violations.front());
    if (!gog::is_connected(g)) throw Error("Disconnected", "quotient graph is not connected");

    gog::ReduceResult red = gog::reduce(g);
    const GraphOfGroups& h = red.graph;
    if (h.vertices.size() == 1 && h.edges.empty()) return Trichotomy::Bounded;

    bool all_two = true;
    bool some_big = false;
    for (const auto& [vid, v] : h.vertices) {
        Index val = gog::tree_valence(h, vid);
        if (val.is_infinite() || val.value() >= 3) some_big = true;
        if (val.is_infinite() || val.value() != 2) all_two = false;
    }
    if (some_big) return Trichotomy::Bushy;
    if (all_two) return Trichotomy::LineLike;
    throw Error("Unclassifiable", "reduced graph matches no trichotomy pattern: " + gog::serialize_gog(h));
}

OracleVerdict oracle_classify_by_expansion(const GraphOfGroups& g, int radius,
                                           const ExpandOptions& opts) {
    if (g.vertices.empty()) throw Error("BadVertex", "empty graph");
    const std::string base = g.vertices.begin()->first;

    std::vector<std::size_t> trunc(radius + 1, 0);
    TreeBall full;
    for (int r = 0; r <= radius; ++r) {
        TreeBall b = expand_ball(g, base, r, opts);
        trunc[r] = b.truncated_count();
        if (r == radius) full = std::move(b);
    }

    if (trunc[radius] == 0) return OracleVerdict::Bounded;

    if (radius >= 2) {
        bool line = true;
        for (int r = 2; r <= radius; ++r)
            if (trunc[r] != 2) line = false;
        if (line) return OracleVerdict::LineLike;
    }

    std::vector<int> deg(full.vertices.size(), 0);
    for (const auto& e : full.edges) {
        ++deg[e.parent];
        ++deg[e.child];
    }
    bool branching_interior = false;
    for (const auto& v : full.vertices)
        if (!v.truncated && deg[v.id] >= 3) branching_interior = true;
    bool nondecreasing = true;
    for (int r = 2; r <= radius; ++r)
        if (trunc[r] < trunc[r - 1]) nondecreasing = false;
    if (branching_interior && nondecreasing && trunc[radius] >= 3) return OracleVerdict::Bushy;

    return OracleVerdict::Inconclusive;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

long long parse_ll(const std::string& s, int line) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "bad integer '" + s + "'");
    }
}

} // namespace

TreeBall parse_tree(const std::string& text) {
    TreeBall b;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false, root_seen = false;
    std::vector<TreeVertex> verts;
    std::vector<TreeEdge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (!header) {
            if (toks.size() != 2 || toks[0] != "tree" || toks[1] != "v1")
                throw ParseError(lineno, "expected 'tree v1'");
            header = true;
            continue;
        }
        if (toks[0] == "root") {
            if (toks.size() != 2) throw ParseError(lineno, "root needs an id");
            b.root = static_cast<int>(parse_ll(toks[1], lineno));
            root_seen = true;
        } else if (toks[0] == "v") {
            if (toks.size() < 4) throw ParseError(lineno, "v needs id, depth=, over=");
            TreeVertex v;
            v.id = static_cast<int>(parse_ll(toks[1], lineno));
            for (size_t i = 2; i < toks.size(); ++i) {
                if (toks[i] == "truncated")
                    v.truncated = true;
                else if (toks[i].rfind("depth=", 0) == 0)
                    v.depth = static_cast<int>(parse_ll(toks[i].substr(6), lineno));
                else if (toks[i].rfind("over=", 0) == 0)
                    v.over = toks[i].substr(5);
                else
                    throw ParseError(lineno, "unknown vertex attribute '" + toks[i] + "'");
            }
            verts.push_back(v);
        } else if (toks[0] == "e") {
            if (toks.size() != 5) throw ParseError(lineno, "e needs id, two vertex ids, over=");
            TreeEdge e;
            e.id = static_cast<int>(parse_ll(toks[1], lineno));
            e.parent = static_cast<int>(parse_ll(toks[2], lineno));
            e.child = static_cast<int>(parse_ll(toks[3], lineno));
            if (toks[4].rfind("over=", 0) != 0) throw ParseError(lineno, "edge needs over=<edge>:<end>");
            std::string rest = toks[4].substr(5);
            auto colon = rest.rfind(':');
            if (colon == std::string::npos) throw ParseError(lineno, "edge over needs ':<end#>'");
            e.over_edge = rest.substr(0, colon);
            long long end = parse_ll(rest.substr(colon + 1), lineno);
            if (end != 1 && end != 2) throw ParseError(lineno, "end# must be 1 or 2");
            e.entering_end = static_cast<int>(end);
            edges.push_back(e);
        } else {
            throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (!header) throw ParseError(1, "missing tree header");
    if (!root_seen) throw ParseError(1, "missing root line");

    std::sort(verts.begin(), verts.end(), [](const TreeVertex& a, const TreeVertex& b) { return a.id < b.id; });
    std::sort(edges.begin(), edges.end(), [](const TreeEdge& a, const TreeEdge& b) { return a.id < b.id; });
    for (size_t i = 0; i < verts.size(); ++i)
        if (verts[i].id != static_cast<int>(i)) throw ParseError(1, "vertex ids must be 0..n-1");
    for (size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id != static_cast<int>(i)) throw ParseError(1, "edge ids must be 0..m-1");
    b.vertices = std::move(verts);
    b.edges = std::move(edges);
    for (const auto& v : b.vertices) b.radius = std::max(b.radius, v.depth);
    if (b.root < 0 || b.root >= static_cast<int>(b.vertices.size()))
        throw ParseError(1, "root id out of range");
    return b;
}

std::string serialize_tree(const TreeBall& b) {
    std::string out = "tree v1\n";
    out += "root " + std::to_string(b.root) + "\n";
    for (const auto& v : b.vertices) {
        out += "v " + std::to_string(v.id) + " depth=" + std::to_string(v.depth) + " over=" + v.over;
        if (v.truncated) out += " truncated";
        out += "\n";
    }
    for (const auto& e : b.edges)
        out += "e " + std::to_string(e.id) + " " + std::to_string(e.parent) + " " +
               std::to_string(e.child) + " over=" + e.over_edge + ":" + std::to_string(e.entering_end) +
               "\n";
    return out;
}

} // namespace qtrees::bassserre
