#include "qtrees/crossing.hpp"

#include <algorithm>
#include <queue>

#include "qtrees/coarse.hpp"
#include "qtrees/error.hpp"
#include "qtrees/lattice.hpp"

namespace qtrees::crossing {

DirectionPattern directions_at(const gog::GraphOfGroups& g, const std::string& v) {
    if (g.regime != gog::Regime::Abelian)
        throw Error("AbstractRegime", "direction data needs the abelian regime");
    auto vit = g.vertices.find(v);
    if (vit == g.vertices.end()) throw Error("BadVertex", "no vertex " + v);

    DirectionPattern p;
    p.ambient = vit->second.dim;
    for (const auto& [eid, e] : g.edges)
        for (int k = 0; k < 2; ++k) {
            if (e.ends[k].vertex != v) continue;
            DirectionEntry d;
            d.end_id = eid + ":" + std::to_string(k + 1);
            d.basis_rows = e.ends[k].inj.matrix->transposed();
            d.rank = d.basis_rows.rank();
            p.entries.push_back(std::move(d));
        }
    return p;
}

bool crosses(const QMatrix& s_rows, const QMatrix& e_rows) {
    int n = e_rows.cols();
    if (s_rows.cols() != n) throw Error("BadMatrix", "ambient dimension mismatch");
    if (e_rows.rank() != n - 1) throw Error("NotHyperplane", "separator direction must have rank n-1");
    return e_rows.vconcat(s_rows).rank() > n - 1;
}

std::string to_string(Summary s) {
    switch (s) {
        case Summary::Empty: return "EMPTY";
        case Summary::Connected: return "CONNECTED";
        case Summary::Disconnected: return "DISCONNECTED";
    }
    return "?";
}

Report SummaryResult::report() const {
    Report rep;
    rep.add("summary", to_string(verdict));
    rep.add("hyperplane_directions", hyperplane_direction_count);
    for (size_t i = 0; i < witness.size(); ++i) rep.add("witness." + std::to_string(i), witness[i]);
    return rep;
}

SummaryResult crossing_graph_summary(const gog::GraphOfGroups& g, const std::string& v) {
    DirectionPattern p = directions_at(g, v);
    int n = p.ambient;

    std::vector<const DirectionEntry*> hyper;
    std::vector<const DirectionEntry*> lower; // ranks 1..n-2
    for (const auto& e : p.entries) {
        if (e.rank == n - 1 && n >= 1) hyper.push_back(&e);
        if (e.rank >= 1 && e.rank <= n - 2) lower.push_back(&e);
    }

    SummaryResult res;
    if (hyper.empty()) {
        res.verdict = Summary::Empty;
        res.witness.push_back("no incident image of rank n-1");
        return res;
    }

    std::vector<QMatrix> dirs;
    std::vector<const DirectionEntry*> dir_rep;
    for (const auto* h : hyper) {
        QMatrix c = h->basis_rows.canonical_row_basis();
        bool seen = false;
        for (const auto& d : dirs)
            if (d == c) seen = true;
        if (!seen) {
            dirs.push_back(c);
            dir_rep.push_back(h);
        }
    }
    res.hyperplane_direction_count = dirs.size();

    if (dirs.size() >= 2) {
        res.verdict = Summary::Connected;
        res.witness.push_back("distinct hyperplane directions at ends " + dir_rep[0]->end_id + " and " +
                              dir_rep[1]->end_id + " cross coset-wise");
        return res;
    }

    const QMatrix& w = dirs[0];
    for (const auto* u : lower) {
        if (w.vconcat(u->basis_rows).rank() > n - 1) {
            res.verdict = Summary::Connected;
            res.witness.push_back("single hyperplane direction at end " + dir_rep[0]->end_id +
                                  "; lower image at end " + u->end_id + " leaves it and crosses every coset");
            return res;
        }
    }

    res.verdict = Summary::Disconnected;
    // exhibit a transversal basis vector: parallel cosets W and W + e_i
    for (int i = 0; i < n; ++i) {
        QMatrix ei(1, n);
        ei.at(0, i) = 1;
        if (w.vconcat(ei).rank() > n - 1) {
            res.witness.push_back("parallel cosets of end " + dir_rep[0]->end_id + " through 0 and e" +
                                  std::to_string(i + 1) + " admit no connecting crosser");
            break;
        }
    }
    return res;
}

Report OracleResult::report() const {
    Report rep;
    rep.add("conclusive", conclusive);
    if (!conclusive) rep.add("reason", reason);
    rep.add("empty", empty);
    if (!empty) rep.add("connected", connected);
    rep.add("nodes", nodes.size());
    rep.add("edges", edges.size());
    for (size_t i = 0; i < nodes.size(); ++i) rep.add("node." + std::to_string(i), nodes[i]);
    for (const auto& [a, b] : edges)
        rep.add("edge." + nodes[a] + "--" + nodes[b], "cross");
    return rep;
}

namespace {

struct SampledCoset {
    std::string label;
    int rank = 0;
    std::vector<long long> points; // host ids
};

// integer points of (shift + rowspan(basis)) inside the box host
std::vector<long long> coset_points(const coarse::Host& host, const ColumnHNF& hnf,
                                    const std::vector<long long>& shift) {
    std::vector<long long> pts;
    int n = host.dim();
    for (long long id = 0; id < host.size(); ++id) {
        std::vector<long long> c = host.coords(id);
        for (int i = 0; i < n; ++i) c[i] -= shift[i];
        if (hnf.contains(c)) pts.push_back(id);
    }
    return pts;
}

} // namespace

OracleResult lattice_oracle_crossing_graph(const gog::GraphOfGroups& g, const std::string& v,
                                           const OracleOptions& opts) {
    DirectionPattern p = directions_at(g, v);
    int n = p.ambient;
    OracleResult res;
    if (n < 1) {
        res.conclusive = true;
        res.empty = true;
        return res;
    }

    coarse::Host host = coarse::Host::lattice(n, opts.box_radius, coarse::LatticeMetric::Sup);

    // sample cosets of every image of rank 1..n-1
    std::vector<SampledCoset> cosets;
    long long spacing = opts.deep_threshold + 3;
    for (const auto& e : p.entries) {
        if (e.rank < 1 || e.rank > n - 1) continue;
        std::vector<std::vector<long long>> cols;
        for (int j = 0; j < e.rank; ++j) {
            std::vector<long long> col(n);
            for (int i = 0; i < n; ++i) col[i] = e.basis_rows.at_int(j, i);
            cols.push_back(col);
        }
        ColumnHNF hnf = column_hnf(cols, n);
        // transversal axis: first basis vector outside the direction
        int axis = -1;
        for (int i = 0; i < n && axis < 0; ++i) {
            std::vector<long long> ei(n, 0);
            ei[i] = 1;
            QMatrix eim(1, n);
            eim.at(0, i) = 1;
            if (e.basis_rows.vconcat(eim).rank() > e.rank) axis = i;
        }
        for (int ci = 0; ci < opts.cosets_per_end; ++ci) {
            long long k = (ci + 1) / 2 * (ci % 2 == 1 ? 1 : -1); // 0, +1, -1, +2, ...
            std::vector<long long> shift(n, 0);
            shift[axis] = k * spacing;
            SampledCoset sc;
            sc.label = e.end_id + "@" + std::to_string(k * spacing);
            sc.rank = e.rank;
            sc.points = coset_points(host, hnf, shift);
            cosets.push_back(std::move(sc));
        }
        if (host.size() * static_cast<long long>(cosets.size()) > opts.budget)
            throw Error("BudgetExceeded", "coset sampling exceeds the oracle budget");
    }

    std::vector<int> hyper_idx;
    std::vector<int> lower_idx;
    for (size_t i = 0; i < cosets.size(); ++i) {
        if (cosets[i].rank == n - 1) hyper_idx.push_back(static_cast<int>(i));
        if (cosets[i].rank <= n - 2) lower_idx.push_back(static_cast<int>(i));
    }
    if (hyper_idx.empty()) {
        res.conclusive = true;
        res.empty = true;
        return res;
    }

    // deep far-zones of each hyperplane coset: the two components of the
    // box minus its unit neighborhood, beyond the depth threshold
    struct Sides {
        bool ok = false;
        std::vector<char> far1, far2; // membership per host id
    };
    std::vector<Sides> sides(cosets.size());
    std::vector<long long> nbr;
    for (int hi : hyper_idx) {
        const auto& E = cosets[hi];
        if (E.points.empty()) {
            res.reason = "hyperplane coset " + E.label + " misses the box";
            return res;
        }
        std::vector<long long> dE = host.distance_transform(E.points);
        std::vector<int> comp(host.size(), -1);
        int ncomp = 0;
        for (long long x = 0; x < host.size(); ++x) {
            if (dE[x] <= 1 || comp[x] >= 0) continue;
            std::queue<long long> q;
            q.push(x);
            comp[x] = ncomp;
            while (!q.empty()) {
                long long y = q.front();
                q.pop();
                host.unit_neighbors(y, nbr);
                for (long long u : nbr)
                    if (dE[u] > 1 && comp[u] < 0) {
                        comp[u] = ncomp;
                        q.push(u);
                    }
            }
            ++ncomp;
        }
        std::vector<char> has_far(ncomp, 0);
        for (long long x = 0; x < host.size(); ++x)
            if (comp[x] >= 0 && dE[x] >= opts.deep_threshold) has_far[comp[x]] = 1;
        std::vector<int> deep_comps;
        for (int c = 0; c < ncomp; ++c)
            if (has_far[c]) deep_comps.push_back(c);
        if (deep_comps.size() != 2) {
            res.reason = "coset " + E.label + " has " + std::to_string(deep_comps.size()) +
                         " deep sides";
            return res;
        }
        Sides s;
        s.ok = true;
        s.far1.assign(host.size(), 0);
        s.far2.assign(host.size(), 0);
        for (long long x = 0; x < host.size(); ++x) {
            if (comp[x] == deep_comps[0] && dE[x] >= opts.deep_threshold) s.far1[x] = 1;
            if (comp[x] == deep_comps[1] && dE[x] >= opts.deep_threshold) s.far2[x] = 1;
        }
        sides[hi] = std::move(s);
    }

    auto crosses_concrete = [&](int si, int hi) {
        const auto& S = cosets[si];
        bool one = false, two = false;
        for (long long x : S.points) {
            if (sides[hi].far1[x]) one = true;
            if (sides[hi].far2[x]) two = true;
        }
        return one && two;
    };

    for (int hi : hyper_idx) res.nodes.push_back(cosets[hi].label);
    for (size_t a = 0; a < hyper_idx.size(); ++a)
        for (size_t b = a + 1; b < hyper_idx.size(); ++b) {
            bool joined = crosses_concrete(hyper_idx[a], hyper_idx[b]) &&
                          crosses_concrete(hyper_idx[b], hyper_idx[a]);
            if (!joined)
                for (int li : lower_idx)
                    if (crosses_concrete(li, hyper_idx[a]) && crosses_concrete(li, hyper_idx[b])) {
                        joined = true;
                        break;
                    }
            if (joined) res.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }

    std::vector<int> parent(res.nodes.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& [a, b] : res.edges) parent[find(a)] = find(b);
    int roots = 0;
    for (size_t i = 0; i < parent.size(); ++i)
        if (find(static_cast<int>(i)) == static_cast<int>(i)) ++roots;
    res.connected = roots == 1;
    res.conclusive = true;
    return res;
}

} // namespace qtrees::crossing
