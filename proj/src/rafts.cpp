#include "qtrees/rafts.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "qtrees/bassserre.hpp"
#include "qtrees/error.hpp"
#include "qtrees/lattice.hpp"

namespace qtrees::rafts {

Filtration dimension_filtration(const gog::GraphOfGroups& g) {
    Filtration f;
    for (const auto& [id, v] : g.vertices) f.max_dim = std::max(f.max_dim, v.dim);
    for (int i = f.max_dim; i >= 0; --i) {
        Filtration::Level level;
        level.dim = i;
        for (const auto& [id, v] : g.vertices)
            if (v.dim >= i) level.vertices.push_back(id);
        for (const auto& [id, e] : g.edges)
            if (e.group.dim >= i) level.edges.push_back(id);
        f.levels.push_back(std::move(level));
    }
    return f;
}

std::string to_string(RaftKind k) {
    switch (k) {
        case RaftKind::Point: return "POINT";
        case RaftKind::Bounded: return "BOUNDED";
        case RaftKind::Line: return "LINE";
        case RaftKind::Bushy: return "BUSHY";
    }
    return "?";
}

namespace {

gog::GraphOfGroups induced_subgraph(const gog::GraphOfGroups& g, const Raft& raft) {
    gog::GraphOfGroups h;
    h.regime = g.regime;
    for (const auto& v : raft.vertices) h.vertices[v] = g.vertices.at(v);
    for (const auto& e : raft.edges) h.edges[e] = g.edges.at(e);
    return h;
}

} // namespace

RaftKind classify_raft(const gog::GraphOfGroups& g, const Raft& raft) {
    if (raft.vertices.size() == 1 && raft.edges.empty()) return RaftKind::Point;
    switch (bassserre::classify_trichotomy(induced_subgraph(g, raft))) {
        case bassserre::Trichotomy::Bounded: return RaftKind::Bounded;
        case bassserre::Trichotomy::LineLike: return RaftKind::Line;
        case bassserre::Trichotomy::Bushy: return RaftKind::Bushy;
    }
    return RaftKind::Bounded;
}

RaftsResult find_rafts(const gog::GraphOfGroups& g) {
    RaftsResult res;
    std::set<std::string> on_raft;

    std::set<int> dims;
    for (const auto& [id, v] : g.vertices) dims.insert(v.dim);

    for (auto dit = dims.rbegin(); dit != dims.rend(); ++dit) {
        int n = *dit;
        // constant-dimension subgraph at level n
        std::set<std::string> verts;
        for (const auto& [id, v] : g.vertices)
            if (v.dim == n) verts.insert(id);
        std::map<std::string, std::vector<std::string>> adj;
        std::set<std::string> level_edges;
        for (const auto& [id, e] : g.edges)
            if (e.group.dim == n && verts.count(e.ends[0].vertex) && verts.count(e.ends[1].vertex)) {
                level_edges.insert(id);
                adj[e.ends[0].vertex].push_back(id);
                adj[e.ends[1].vertex].push_back(id);
            }

        std::set<std::string> seen;
        for (const auto& start : verts) {
            if (seen.count(start)) continue;
            std::vector<std::string> comp_v;
            std::set<std::string> comp_e;
            std::queue<std::string> q;
            q.push(start);
            seen.insert(start);
            while (!q.empty()) {
                std::string v = q.front();
                q.pop();
                comp_v.push_back(v);
                for (const auto& eid : adj[v]) {
                    comp_e.insert(eid);
                    const auto& e = g.edges.at(eid);
                    for (int k = 0; k < 2; ++k)
                        if (!seen.count(e.ends[k].vertex)) {
                            seen.insert(e.ends[k].vertex);
                            q.push(e.ends[k].vertex);
                        }
                }
            }
            // every incident edge either belongs to the component or drops dimension
            bool ok = true;
            for (const auto& v : comp_v)
                for (const auto& [eid, e] : g.edges) {
                    if (e.ends[0].vertex != v && e.ends[1].vertex != v) continue;
                    if (comp_e.count(eid)) continue;
                    if (e.group.dim >= n) ok = false;
                }
            if (!ok) continue;
            Raft r;
            r.dim = n;
            std::sort(comp_v.begin(), comp_v.end());
            r.vertices = comp_v;
            r.edges.assign(comp_e.begin(), comp_e.end());
            r.kind = classify_raft(g, r);
            for (const auto& v : comp_v) on_raft.insert(v);
            res.rafts.push_back(std::move(r));
        }
    }

    std::sort(res.rafts.begin(), res.rafts.end(), [](const Raft& a, const Raft& b) {
        if (a.dim != b.dim) return a.dim > b.dim;
        return a.vertices.front() < b.vertices.front();
    });
    for (const auto& [id, v] : g.vertices)
        if (!on_raft.count(id)) res.raftless.push_back(id);
    return res;
}

Report RaftsResult::report() const {
    Report rep;
    rep.add("rafts", rafts.size());
    for (size_t i = 0; i < rafts.size(); ++i) {
        std::string p = "raft." + std::to_string(i);
        rep.add(p + ".dim", rafts[i].dim);
        rep.add(p + ".kind", to_string(rafts[i].kind));
        std::string vs;
        for (const auto& v : rafts[i].vertices) vs += (vs.empty() ? "" : ",") + v;
        rep.add(p + ".vertices", vs);
        std::string es;
        for (const auto& e : rafts[i].edges) es += (es.empty() ? "" : ",") + e;
        rep.add(p + ".edges", es.empty() ? "-" : es);
    }
    std::string rl;
    for (const auto& v : raftless) rl += (rl.empty() ? "" : ",") + v;
    rep.add("raftless", rl.empty() ? "-" : rl);
    return rep;
}

CheckResult check_star_condition(const gog::GraphOfGroups& g, bool integral_span) {
    if (g.regime != gog::Regime::Abelian)
        throw Error("AbstractRegime", "the star condition needs the abelian regime");
    CheckResult res;
    for (const auto& [vid, vspec] : g.vertices) {
        int n = vspec.dim;
        crossing::DirectionPattern p = crossing::directions_at(g, vid);
        std::string verdict = "pass";
        std::string why;

        for (const auto& e : p.entries)
            if (e.rank >= n) {
                verdict = "fail";
                why = "clause(a): image at end " + e.end_id + " has rank " + std::to_string(e.rank) +
                      " >= vertex rank";
                break;
            }

        if (verdict == "pass") {
            bool has_corank1 = false;
            for (const auto& e : p.entries)
                if (e.rank == n - 1) has_corank1 = true;
            if (has_corank1) {
                QMatrix stacked(0, n);
                for (const auto& e : p.entries) stacked = stacked.vconcat(e.basis_rows);
                bool spans;
                if (!integral_span) {
                    spans = stacked.rank() == n;
                } else {
                    std::vector<std::vector<long long>> cols;
                    for (int i = 0; i < stacked.rows(); ++i) {
                        std::vector<long long> c(n);
                        for (int j = 0; j < n; ++j) c[j] = stacked.at_int(i, j);
                        cols.push_back(c);
                    }
                    spans = column_hnf(cols, n).covolume() == 1;
                }
                if (!spans) {
                    verdict = "fail";
                    why = "clause(b): a corank-1 image exists but incident images do not span";
                }
            }
        }
        res.details.add("vertex." + vid, verdict + (why.empty() ? "" : " " + why));
        if (verdict == "fail") res.pass = false;
    }
    res.details.add("star_condition", res.pass ? "pass" : "fail");
    return res;
}

CheckResult check_raft_hypotheses(const gog::GraphOfGroups& g,
                                  const std::map<std::string, crossing::Summary>* supplied) {
    CheckResult res;
    auto violations = gog::validate(g);
    if (!violations.empty()) throw Error("InvalidGraph", violations.front());

    gog::ReducedCheck rc = gog::is_reduced(g);
    res.details.add("reduced", rc.reduced);
    if (!rc.reduced) {
        for (const auto& [vid, c] : rc.surjective_end_counts)
            if (c == 1) res.details.add("fail.REDUCED.vertex", vid);
        res.pass = false;
        res.details.add("raft_hypotheses", "fail");
        return res;
    }

    RaftsResult rafts = find_rafts(g);
    for (size_t i = 0; i < rafts.rafts.size(); ++i) {
        const Raft& r = rafts.rafts[i];
        std::string p = "raft." + std::to_string(i);
        res.details.add(p + ".dim", r.dim);
        res.details.add(p + ".kind", to_string(r.kind));
        if (r.kind == RaftKind::Line) {
            res.details.add(p + ".verdict", "fail NO-LINE-RAFTS");
            res.pass = false;
            continue;
        }
        if (r.kind == RaftKind::Point) {
            const std::string& v = r.vertices.front();
            crossing::Summary s;
            if (g.regime == gog::Regime::Abelian) {
                s = crossing::crossing_graph_summary(g, v).verdict;
            } else {
                if (!supplied || !supplied->count(v))
                    throw Error("MissingSummary",
                                "abstract regime needs a supplied crossing summary for vertex " + v);
                s = supplied->at(v);
            }
            res.details.add(p + ".crossing", crossing::to_string(s));
            if (s == crossing::Summary::Disconnected) {
                res.details.add(p + ".verdict", "fail CROSSING-DISCONNECTED");
                res.pass = false;
            } else {
                res.details.add(p + ".verdict", "ok");
            }
            continue;
        }
        res.details.add(p + ".verdict", "ok");
    }
    res.details.add("raft_hypotheses", res.pass ? "pass" : "fail");
    return res;
}

} // namespace qtrees::rafts
