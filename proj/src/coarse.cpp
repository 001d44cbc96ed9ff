#include "qtrees/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "qtrees/bassserre.hpp"
#include "qtrees/error.hpp"

namespace qtrees::coarse {

namespace {

constexpr long long kFar = (1LL << 60);

long long isqrt_ll(long long q) {
    long long s = static_cast<long long>(std::sqrt(static_cast<double>(q)));
    while (s > 0 && s * s > q) --s;
    while ((s + 1) * (s + 1) <= q) ++s;
    return s;
}

long long ceil_sqrt(long long q) {
    long long s = isqrt_ll(q);
    return s * s == q ? s : s + 1;
}

} // namespace

Host Host::lattice(int dim, long long radius, LatticeMetric metric) {
    if (dim < 1) throw Error("BadHost", "lattice dimension must be >= 1");
    if (radius < 0) throw Error("BadHost", "negative box radius");
    Host h;
    h.is_tree_ = false;
    h.dim_ = dim;
    h.radius_ = radius;
    h.metric_ = metric;
    long long w = 2 * radius + 1;
    long long size = 1;
    for (int i = 0; i < dim; ++i) {
        size *= w;
        if (size > (1LL << 25)) throw Error("BudgetExceeded", "lattice host too large");
    }
    h.size_ = size;
    return h;
}

Host Host::tree(FiniteTree t) {
    Host h;
    h.is_tree_ = true;
    h.size_ = t.n;
    h.tree_ = std::move(t);
    return h;
}

long long Host::dist(long long a, long long b) const {
    if (is_tree_) return tree_.dist(static_cast<int>(a), static_cast<int>(b));
    long long w = 2 * radius_ + 1;
    long long da = a, db = b;
    if (metric_ == LatticeMetric::Sup) {
        long long m = 0;
        for (int i = 0; i < dim_; ++i) {
            long long d = (da % w) - (db % w);
            m = std::max(m, d < 0 ? -d : d);
            da /= w;
            db /= w;
        }
        return m;
    }
    long long q = 0;
    for (int i = 0; i < dim_; ++i) {
        long long d = (da % w) - (db % w);
        q += d * d;
        da /= w;
        db /= w;
    }
    return ceil_sqrt(q);
}

std::vector<long long> Host::coords(long long id) const {
    if (is_tree_) throw Error("BadHost", "tree host has no coordinates");
    long long w = 2 * radius_ + 1;
    std::vector<long long> c(dim_);
    for (int i = 0; i < dim_; ++i) {
        c[i] = id % w - radius_;
        id /= w;
    }
    return c;
}

long long Host::id_of(const std::vector<long long>& c) const {
    if (is_tree_) throw Error("BadHost", "tree host has no coordinates");
    if (static_cast<int>(c.size()) != dim_) throw Error("BadHost", "coordinate arity mismatch");
    long long w = 2 * radius_ + 1;
    long long id = 0, stride = 1;
    for (int i = 0; i < dim_; ++i) {
        if (c[i] < -radius_ || c[i] > radius_) return -1;
        id += (c[i] + radius_) * stride;
        stride *= w;
    }
    return id;
}

void Host::unit_neighbors(long long id, std::vector<long long>& out) const {
    out.clear();
    if (is_tree_) {
        for (int w : tree_.adj[static_cast<int>(id)]) out.push_back(w);
        return;
    }
    long long w = 2 * radius_ + 1;
    long long stride = 1, rest = id;
    for (int i = 0; i < dim_; ++i) {
        long long ci = rest % w;
        if (ci > 0) out.push_back(id - stride);
        if (ci < w - 1) out.push_back(id + stride);
        stride *= w;
        rest /= w;
    }
}

std::vector<long long> Host::distance_transform(const std::vector<long long>& sources) const {
    std::vector<long long> d(size_, kFar);
    if (sources.empty()) return d;

    if (is_tree_) {
        std::queue<long long> q;
        for (long long s : sources) {
            d[s] = 0;
            q.push(s);
        }
        while (!q.empty()) {
            long long v = q.front();
            q.pop();
            for (int u : tree_.adj[static_cast<int>(v)])
                if (d[u] == kFar) {
                    d[u] = d[v] + 1;
                    q.push(u);
                }
        }
        return d;
    }

    long long w = 2 * radius_ + 1;
    if (metric_ == LatticeMetric::Sup) {
        // king-move BFS gives the L_inf distance to the source set
        struct Move {
            long long off;
            std::vector<long long> delta;
        };
        std::vector<Move> moves;
        std::vector<long long> delta(dim_, -1);
        while (true) {
            long long off = 0, stride = 1;
            bool zero = true;
            for (int i = 0; i < dim_; ++i) {
                off += delta[i] * stride;
                stride *= w;
                if (delta[i] != 0) zero = false;
            }
            if (!zero) moves.push_back(Move{off, delta});
            int i = 0;
            for (; i < dim_; ++i) {
                if (delta[i] < 1) {
                    ++delta[i];
                    break;
                }
                delta[i] = -1;
            }
            if (i == dim_) break;
        }
        std::queue<long long> q;
        for (long long s : sources) {
            d[s] = 0;
            q.push(s);
        }
        std::vector<long long> c(dim_);
        while (!q.empty()) {
            long long v = q.front();
            q.pop();
            long long rest = v;
            for (int i = 0; i < dim_; ++i) {
                c[i] = rest % w;
                rest /= w;
            }
            for (const Move& m : moves) {
                bool ok = true;
                for (int i = 0; i < dim_ && ok; ++i) {
                    long long ci = c[i] + m.delta[i];
                    if (ci < 0 || ci >= w) ok = false;
                }
                if (!ok) continue;
                long long u = v + m.off;
                if (d[u] == kFar) {
                    d[u] = d[v] + 1;
                    q.push(u);
                }
            }
        }
        return d;
    }

    // exact squared Euclidean transform by per-axis sweeps, then ceil-sqrt
    std::vector<long long> f(size_, kFar);
    for (long long s : sources) f[s] = 0;
    std::vector<long long> line(w), best(w);
    for (int axis = 0; axis < dim_; ++axis) {
        long long stride = 1;
        for (int i = 0; i < axis; ++i) stride *= w;
        long long lines = size_ / w;
        for (long long li = 0; li < lines; ++li) {
            // base id of this line: interleave li around the axis digit
            long long low = li % stride;
            long long high = li / stride;
            long long base = high * stride * w + low;
            for (long long t = 0; t < w; ++t) line[t] = f[base + t * stride];
            for (long long i = 0; i < w; ++i) {
                long long b = line[i];
                for (long long j = 0; j < w; ++j) {
                    if (line[j] >= kFar) continue;
                    long long cand = line[j] + (i - j) * (i - j);
                    if (cand < b) b = cand;
                }
                best[i] = b;
            }
            for (long long t = 0; t < w; ++t) f[base + t * stride] = best[t];
        }
    }
    for (long long i = 0; i < size_; ++i) d[i] = f[i] >= kFar ? kFar : ceil_sqrt(f[i]);
    return d;
}

PointSet PointSet::of(const Host& h, std::vector<long long> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (long long p : pts)
        if (p < 0 || p >= h.size()) throw Error("BadPointSet", "point outside host");
    PointSet s;
    s.host = &h;
    s.points = std::move(pts);
    return s;
}

namespace {

long long max_min_dist(const PointSet& a, const PointSet& b) {
    long long worst = 0;
    for (long long x : a.points) {
        long long best = kFar;
        for (long long y : b.points) best = std::min(best, a.host->dist(x, y));
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

Rat containment_radius(const PointSet& a, const PointSet& b) {
    if (a.host != b.host) throw Error("HostMismatch", "point sets live on different hosts");
    if (b.empty()) throw Error("EmptyTarget", "coarse containment target is empty");
    return Rat(static_cast<long>(max_min_dist(a, b)));
}

Rat equiv_radius(const PointSet& a, const PointSet& b) {
    if (a.host != b.host) throw Error("HostMismatch", "point sets live on different hosts");
    if (a.empty() || b.empty()) throw Error("EmptyTarget", "coarse equivalence needs nonempty sets");
    return Rat(static_cast<long>(std::max(max_min_dist(a, b), max_min_dist(b, a))));
}

Report IntersectionProfile::report() const {
    Report rep;
    for (const auto& row : rows) {
        std::string p = "R." + rat_str(row.r);
        rep.add(p + ".size", row.size);
        if (row.empty)
            rep.add(p + ".radius", "empty");
        else
            rep.add(p + ".radius", rat_str(row.radius_to_candidate));
    }
    for (const auto& [r0, m, saw_empty] : stabilization) {
        std::string p = "from." + rat_str(r0);
        rep.add(p + ".max_radius", saw_empty && m < 0 ? "empty" : rat_str(m));
        rep.add(p + ".saw_empty", saw_empty);
    }
    return rep;
}

IntersectionProfile coarse_intersection_profile(const PointSet& a, const PointSet& b,
                                                std::vector<Rat> r_list, const PointSet& candidate) {
    if (a.host != b.host || a.host != candidate.host)
        throw Error("HostMismatch", "point sets live on different hosts");
    const Host& host = *a.host;
    std::sort(r_list.begin(), r_list.end());
    r_list.erase(std::unique(r_list.begin(), r_list.end()), r_list.end());

    std::vector<long long> da = host.distance_transform(a.points);
    std::vector<long long> db = host.distance_transform(b.points);

    IntersectionProfile prof;
    for (const Rat& r : r_list) {
        IntersectionRow row;
        row.r = r;
        std::vector<long long> pts;
        for (long long x = 0; x < host.size(); ++x)
            if (Rat(static_cast<long>(da[x])) <= r && Rat(static_cast<long>(db[x])) <= r)
                pts.push_back(x);
        row.size = static_cast<long long>(pts.size());
        row.empty = pts.empty();
        if (!row.empty) row.radius_to_candidate = equiv_radius(PointSet::of(host, pts), candidate);
        prof.rows.push_back(std::move(row));
    }
    for (size_t i = 0; i < prof.rows.size(); ++i) {
        Rat m(-1);
        bool saw_empty = false;
        for (size_t j = i; j < prof.rows.size(); ++j) {
            if (prof.rows[j].empty)
                saw_empty = true;
            else if (prof.rows[j].radius_to_candidate > m)
                m = prof.rows[j].radius_to_candidate;
        }
        prof.stabilization.emplace_back(prof.rows[i].r, m, saw_empty);
    }
    return prof;
}

QiFit fit_qi_constants_fn(const std::vector<std::pair<long long, long long>>& pairs,
                          const std::function<long long(long long, long long)>& dist_dom,
                          const std::function<long long(long long, long long)>& dist_cod,
                          const std::vector<Rat>& k_grid, bool with_tables) {
    if (pairs.size() < 2) throw Error("DomainTooSmall", "need at least two sample points");
    if (k_grid.empty()) throw Error("BadGrid", "empty K grid");
    for (const Rat& k : k_grid)
        if (k < 1) throw Error("BadGrid", "K must be >= 1");

    std::vector<std::pair<long long, long long>> dd; // (dx, dy) per unordered pair
    dd.reserve(pairs.size() * (pairs.size() - 1) / 2);
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = i + 1; j < pairs.size(); ++j)
            dd.emplace_back(dist_dom(pairs[i].first, pairs[j].first),
                            dist_cod(pairs[i].second, pairs[j].second));

    QiFit best;
    bool have = false;
    for (const Rat& k : k_grid) {
        Rat c(0);
        for (const auto& [dx, dy] : dd) {
            Rat rdx(static_cast<long>(dx)), rdy(static_cast<long>(dy));
            Rat upper = rdy - k * rdx;
            Rat lower = rdx / k - rdy;
            if (upper > c) c = upper;
            if (lower > c) c = lower;
        }
        if (!have || c < best.c || (c == best.c && k < best.k)) {
            best.k = k;
            best.c = c;
            have = true;
        }
    }

    if (with_tables) {
        std::vector<long long> ds;
        for (const auto& [dx, dy] : dd) ds.push_back(dx);
        std::sort(ds.begin(), ds.end());
        ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
        for (long long d : ds) {
            long long lo = kFar, hi = 0;
            for (const auto& [dx, dy] : dd) {
                if (dx >= d) lo = std::min(lo, dy);
                if (dx <= d) hi = std::max(hi, dy);
            }
            best.lower.entries.emplace_back(d, Rat(static_cast<long>(lo == kFar ? 0 : lo)));
            best.upper.entries.emplace_back(d, Rat(static_cast<long>(hi)));
        }
    }
    return best;
}

QiFit fit_qi_constants(const SampledMap& f, const std::vector<Rat>& k_grid, bool with_tables) {
    if (!f.dom || !f.cod) throw Error("BadMap", "sampled map lacks hosts");
    const Host* dom = f.dom;
    const Host* cod = f.cod;
    return fit_qi_constants_fn(
        f.pairs, [dom](long long a, long long b) { return dom->dist(a, b); },
        [cod](long long a, long long b) { return cod->dist(a, b); }, k_grid, with_tables);
}

CoarseInverse coarse_inverse(const SampledMap& f, const Rat& k, const Rat& c) {
    if (!f.dom || !f.cod) throw Error("BadMap", "sampled map lacks hosts");
    if (f.pairs.empty()) throw Error("DomainTooSmall", "empty sample");
    const Host& cod = *f.cod;
    const Host& dom = *f.dom;

    for (long long y = 0; y < cod.size(); ++y) {
        long long best = kFar;
        for (const auto& [x, fx] : f.pairs) best = std::min(best, cod.dist(fx, y));
        if (Rat(static_cast<long>(best)) > c)
            throw Error("NotCoarselyDense", "image misses a point by more than C");
    }

    CoarseInverse inv;
    inv.g.dom = f.cod;
    inv.g.cod = f.dom;
    std::map<long long, long long> fmap(f.pairs.begin(), f.pairs.end());
    for (long long y = 0; y < cod.size(); ++y) {
        long long best_x = -1, best_d = kFar;
        for (const auto& [x, fx] : f.pairs) {
            long long d = cod.dist(fx, y);
            if (d < best_d || (d == best_d && x < best_x)) {
                best_d = d;
                best_x = x;
            }
        }
        inv.g.pairs.emplace_back(y, best_x);
    }
    std::map<long long, long long> gmap(inv.g.pairs.begin(), inv.g.pairs.end());

    long long worst = 0;
    for (const auto& [x, fx] : f.pairs) worst = std::max(worst, dom.dist(x, gmap.at(fx)));
    for (const auto& [y, gy] : inv.g.pairs) worst = std::max(worst, cod.dist(y, fmap.at(gy)));
    inv.achieved_c = Rat(static_cast<long>(worst));
    return inv;
}

std::vector<std::string> validate_qa(const QuasiActionSample& qa) {
    std::vector<std::string> out;
    if (!qa.host) {
        out.push_back("missing host");
        return out;
    }
    long long n = qa.host->size();
    if (qa.names.size() != qa.maps.size()) out.push_back("names/maps size mismatch");
    for (size_t i = 0; i < qa.maps.size(); ++i) {
        if (static_cast<long long>(qa.maps[i].size()) != n)
            out.push_back("map " + std::to_string(i) + " is not total");
        else
            for (long long v : qa.maps[i])
                if (v < 0 || v >= n) {
                    out.push_back("map " + std::to_string(i) + " leaves the host");
                    break;
                }
    }
    std::map<std::pair<int, int>, int> table;
    for (const auto& [i, j, k] : qa.composition) {
        int m = static_cast<int>(qa.maps.size());
        if (i < 0 || i >= m || j < 0 || j >= m || k < 0 || k >= m) {
            out.push_back("composition row references missing element");
            continue;
        }
        table[{i, j}] = k;
    }
    for (const auto& [ij, k] : table)
        for (const auto& [jl, m] : table) {
            if (ij.second != jl.first) continue;
            // (i j) l  vs  i (j l)
            auto left = table.find({k, jl.second});
            auto right = table.find({ij.first, m});
            if (left != table.end() && right != table.end() && left->second != right->second)
                out.push_back("composition table not associative at (" + std::to_string(ij.first) +
                              "," + std::to_string(ij.second) + "," + std::to_string(jl.second) + ")");
        }
    return out;
}

Report QuasiActionCheck::report() const {
    Report rep;
    rep.add("maps_fit", maps_fit);
    rep.add("composition_ok", composition_ok);
    rep.add("worst_upper_defect", rat_str(worst_upper_defect));
    rep.add("worst_lower_defect", rat_str(worst_lower_defect));
    rep.add("worst_composition", rat_str(worst_composition));
    rep.add("cobounded_radius", rat_str(cobounded_radius));
    for (const auto& [r, m] : properness)
        rep.add("properness.R" + std::to_string(r), m);
    return rep;
}

QuasiActionCheck check_quasi_action(const QuasiActionSample& qa, const Rat& k, const Rat& c,
                                    const std::vector<long long>& properness_radii) {
    auto violations = validate_qa(qa);
    if (!violations.empty()) throw Error("BadQuasiAction", violations.front());
    const Host& host = *qa.host;
    long long n = host.size();

    QuasiActionCheck out;
    out.worst_upper_defect = Rat(-1);
    out.worst_lower_defect = Rat(-1);
    out.worst_composition = Rat(0);

    for (const auto& m : qa.maps)
        for (long long x = 0; x < n; ++x)
            for (long long y = x + 1; y < n; ++y) {
                Rat dx(static_cast<long>(host.dist(x, y)));
                Rat dy(static_cast<long>(host.dist(m[x], m[y])));
                Rat upper = dy - k * dx - c;
                Rat lower = dx / k - c - dy;
                if (upper > out.worst_upper_defect) out.worst_upper_defect = upper;
                if (lower > out.worst_lower_defect) out.worst_lower_defect = lower;
            }
    out.maps_fit = out.worst_upper_defect <= 0 && out.worst_lower_defect <= 0;

    for (const auto& [i, j, kk] : qa.composition)
        for (long long x = 0; x < n; ++x) {
            Rat d(static_cast<long>(host.dist(qa.maps[i][qa.maps[j][x]], qa.maps[kk][x])));
            if (d > out.worst_composition) out.worst_composition = d;
        }
    out.composition_ok = out.worst_composition <= c;

    long long cob = 0;
    for (long long x = 0; x < n; ++x) {
        long long best = kFar;
        for (const auto& m : qa.maps) best = std::min(best, host.dist(m[0], x));
        cob = std::max(cob, best);
    }
    out.cobounded_radius = Rat(static_cast<long>(cob));

    for (long long r : properness_radii) {
        // ball membership per point
        std::vector<std::vector<long long>> ball(n);
        for (long long x = 0; x < n; ++x)
            for (long long y = 0; y < n; ++y)
                if (host.dist(x, y) <= r) ball[x].push_back(y);
        long long worst = 0;
        std::vector<int> count(static_cast<size_t>(n), 0);
        for (long long x = 0; x < n; ++x) {
            std::fill(count.begin(), count.end(), 0);
            for (size_t gi = 0; gi < qa.maps.size(); ++gi) {
                std::vector<char> hit(n, 0);
                for (long long a : ball[x]) {
                    long long s = qa.maps[gi][a];
                    for (long long y : ball[s]) hit[y] = 1; // d(s,y) <= r
                }
                for (long long y = 0; y < n; ++y)
                    if (hit[y]) ++count[y];
            }
            for (long long y = 0; y < n; ++y) worst = std::max(worst, static_cast<long long>(count[y]));
        }
        out.properness.emplace_back(r, worst);
    }
    return out;
}

StabilizerSample stabilizer_sample(const QuasiActionSample& qa, const PointSet& h, const Rat& a) {
    if (h.empty()) throw Error("EmptyTarget", "stabilizer of an empty set");
    if (h.host != qa.host) throw Error("HostMismatch", "H not on the quasi-action host");
    const Host& host = *qa.host;

    StabilizerSample out;
    for (size_t gi = 0; gi < qa.maps.size(); ++gi) {
        std::vector<long long> img;
        img.reserve(h.points.size());
        for (long long x : h.points) img.push_back(qa.maps[gi][x]);
        if (equiv_radius(PointSet::of(host, img), h) <= a) out.elements.push_back(static_cast<int>(gi));
    }
    if (!out.elements.empty()) {
        long long h0 = h.points.front();
        long long worst = 0;
        for (long long x : h.points) {
            long long best = kFar;
            for (int gi : out.elements) best = std::min(best, host.dist(qa.maps[gi][h0], x));
            worst = std::max(worst, best);
        }
        out.cobounded_defined = true;
        out.cobounded_radius = Rat(static_cast<long>(worst));
    }
    return out;
}

DeepComponents deep_component_count(const Host& host, const PointSet& s, long long a, long long r) {
    if (s.host != &host) throw Error("HostMismatch", "S not on the given host");
    long long n = host.size();

    std::vector<char> excluded(n, 0);
    if (!s.empty()) {
        std::vector<long long> ds = host.distance_transform(s.points);
        for (long long x = 0; x < n; ++x)
            if (ds[x] <= a) excluded[x] = 1;
    }

    std::vector<int> comp(n, -1);
    int ncomp = 0;
    std::vector<long long> nbr;
    for (long long x = 0; x < n; ++x) {
        if (excluded[x] || comp[x] >= 0) continue;
        std::queue<long long> q;
        q.push(x);
        comp[x] = ncomp;
        while (!q.empty()) {
            long long v = q.front();
            q.pop();
            host.unit_neighbors(v, nbr);
            for (long long u : nbr)
                if (!excluded[u] && comp[u] < 0) {
                    comp[u] = ncomp;
                    q.push(u);
                }
        }
        ++ncomp;
    }

    DeepComponents out;
    out.component_sizes.assign(ncomp, 0);
    out.deep.assign(ncomp, false);
    for (long long x = 0; x < n; ++x)
        if (comp[x] >= 0) ++out.component_sizes[comp[x]];

    for (int ci = 0; ci < ncomp; ++ci) {
        std::vector<long long> others;
        for (long long x = 0; x < n; ++x)
            if (comp[x] != ci) others.push_back(x);
        if (others.empty()) {
            out.deep[ci] = true; // the whole host: every ball stays inside
            continue;
        }
        std::vector<long long> du = host.distance_transform(others);
        for (long long x = 0; x < n; ++x)
            if (comp[x] == ci && du[x] > r) {
                out.deep[ci] = true;
                break;
            }
    }
    for (bool d : out.deep)
        if (d) ++out.deep_count;
    return out;
}

Report vertex_rigidity_check(const SpaceSample& sample, const std::vector<NamedMap>& maps,
                             RigidityMode mode) {
    if (!sample.host) throw Error("BadHost", "space sample lacks a host");
    const Host& host = *sample.host;
    Report rep;

    if (mode == RigidityMode::StrongEdge) {
        bool have = false;
        Rat best;
        std::string best_pair;
        for (auto it = sample.edge_spaces.begin(); it != sample.edge_spaces.end(); ++it)
            for (auto jt = std::next(it); jt != sample.edge_spaces.end(); ++jt) {
                Rat r = equiv_radius(PointSet::of(host, it->second), PointSet::of(host, jt->second));
                rep.add("edgepair." + it->first + "." + jt->first + ".radius", rat_str(r));
                if (!have || r < best) {
                    best = r;
                    best_pair = it->first + "." + jt->first;
                    have = true;
                }
            }
        rep.add("min_pair", have ? best_pair : "none");
        if (have) rep.add("min_radius", rat_str(best));
        return rep;
    }

    for (const auto& m : maps) {
        if (static_cast<long long>(m.img.size()) != host.size())
            throw Error("BadMap", "map " + m.name + " is not total");
        for (const auto& [tag, pts] : sample.vertex_spaces) {
            std::vector<long long> img;
            img.reserve(pts.size());
            for (long long x : pts) img.push_back(m.img[x]);
            PointSet image = PointSet::of(host, img);

            std::string best_tag;
            Rat best, second;
            bool have = false, have2 = false;
            for (const auto& [wtag, wpts] : sample.vertex_spaces) {
                PointSet w = PointSet::of(host, wpts);
                Rat r = mode == RigidityMode::Weak ? containment_radius(image, w)
                                                   : equiv_radius(image, w);
                if (!have || r < best) {
                    if (have) {
                        second = best;
                        have2 = true;
                    }
                    best = r;
                    best_tag = wtag;
                    have = true;
                } else if (!have2 || r < second) {
                    second = r;
                    have2 = true;
                }
            }
            std::string p = "map." + m.name + ".vertex." + tag;
            rep.add(p + ".best", best_tag);
            rep.add(p + ".radius", rat_str(best));
            if (mode == RigidityMode::Unique) {
                rep.add(p + ".second", have2 ? rat_str(second) : "none");
                rep.add(p + ".gap", have2 ? rat_str(second - best) : "inf");
            }
        }
    }
    return rep;
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

PtsData parse_pts(const std::string& text,
                  const std::function<std::string(const std::string&)>& file_loader) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    PtsData data;
    std::vector<std::vector<long long>> raw_points;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (!header) {
            if (toks.size() != 3 || toks[0] != "pts" || toks[1] != "v1" ||
                toks[2].rfind("host=", 0) != 0)
                throw ParseError(lineno, "expected 'pts v1 host=<spec>'");
            data.host_spec = toks[2].substr(5);
            auto parts = split_on(data.host_spec, ':');
            if (parts[0] == "lattice") {
                if (parts.size() != 4) throw ParseError(lineno, "lattice host needs lattice:<n>:<r>:<metric>");
                int n = std::stoi(parts[1]);
                long long r = std::stoll(parts[2]);
                LatticeMetric m;
                if (parts[3] == "sup")
                    m = LatticeMetric::Sup;
                else if (parts[3] == "euc")
                    m = LatticeMetric::EuclideanRounded;
                else
                    throw ParseError(lineno, "metric must be sup or euc");
                data.host = Host::lattice(n, r, m);
            } else if (parts[0] == "tree") {
                if (parts.size() != 2) throw ParseError(lineno, "tree host needs tree:<path>");
                if (!file_loader) throw ParseError(lineno, "no loader available for tree host");
                data.host = Host::tree(FiniteTree::from_ball(bassserre::parse_tree(file_loader(parts[1]))));
            } else {
                throw ParseError(lineno, "unknown host kind '" + parts[0] + "'");
            }
            header = true;
            continue;
        }
        if (toks[0] != "p") throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
        std::vector<long long> c;
        for (size_t i = 1; i < toks.size(); ++i) {
            try {
                c.push_back(std::stoll(toks[i]));
            } catch (const std::exception&) {
                throw ParseError(lineno, "bad coordinate '" + toks[i] + "'");
            }
        }
        raw_points.push_back(c);
    }
    if (!header) throw ParseError(1, "missing pts header");
    for (const auto& c : raw_points) {
        if (data.host.is_tree()) {
            if (c.size() != 1) throw ParseError(1, "tree host points are single vertex ids");
            if (c[0] < 0 || c[0] >= data.host.size()) throw ParseError(1, "point outside host");
            data.points.push_back(c[0]);
        } else {
            long long id = data.host.id_of(c);
            if (id < 0) throw ParseError(1, "point outside host box");
            data.points.push_back(id);
        }
    }
    std::sort(data.points.begin(), data.points.end());
    data.points.erase(std::unique(data.points.begin(), data.points.end()), data.points.end());
    return data;
}

std::string serialize_pts(const PtsData& d) {
    std::string out = "pts v1 host=" + d.host_spec + "\n";
    std::vector<long long> pts = d.points;
    std::sort(pts.begin(), pts.end());
    for (long long p : pts) {
        out += "p";
        if (d.host.is_tree()) {
            out += " " + std::to_string(p);
        } else {
            for (long long c : d.host.coords(p)) out += " " + std::to_string(c);
        }
        out += "\n";
    }
    return out;
}

} // namespace qtrees::coarse
