#include "qtrees/gog.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "qtrees/error.hpp"

namespace qtrees::gog {

Index Index::finite(long long v) {
    if (v < 0) throw Error("BadIndex", "negative index");
    Index i;
    i.v_ = v;
    return i;
}

long long Index::value() const {
    if (is_infinite()) throw Error("BadIndex", "infinite index has no value");
    return v_;
}

Index Index::operator*(const Index& o) const {
    if (is_infinite() || o.is_infinite()) return infinite();
    __int128 p = static_cast<__int128>(v_) * o.v_;
    if (p > static_cast<__int128>(1) << 62) throw Error("IndexOverflow", "index product too large");
    return finite(static_cast<long long>(p));
}

Index Index::operator+(const Index& o) const {
    if (is_infinite() || o.is_infinite()) return infinite();
    __int128 s = static_cast<__int128>(v_) + o.v_;
    if (s > static_cast<__int128>(1) << 62) throw Error("IndexOverflow", "index sum too large");
    return finite(static_cast<long long>(s));
}

Index injection_index(const InjectionSpec& inj, int n_v, int n_e) {
    if (inj.declared) return *inj.declared;
    if (!inj.matrix) throw Error("InvalidInjection", "injection carries neither index nor matrix");
    const QMatrix& m = *inj.matrix;
    if (m.rows() != n_v || m.cols() != n_e)
        throw Error("InvalidInjection", "matrix shape does not match group ranks");
    if (m.rank() < n_e) throw Error("InvalidInjection", "matrix is rank-deficient");
    if (n_e < n_v) return Index::infinite();
    Rat d = m.det();
    Int num = abs(d.get_num());
    if (!num.fits_slong_p()) throw Error("IndexOverflow", "determinant too large");
    return Index::finite(num.get_si());
}

Index end_index(const GraphOfGroups& g, const Edge& e, int end) {
    const EdgeEnd& ee = e.ends[end];
    auto it = g.vertices.find(ee.vertex);
    if (it == g.vertices.end()) throw Error("InvalidInjection", "end references missing vertex " + ee.vertex);
    return injection_index(ee.inj, it->second.dim, e.group.dim);
}

std::vector<std::string> validate(const GraphOfGroups& g) {
    std::vector<std::string> out;
    for (const auto& [id, v] : g.vertices)
        if (v.dim < 0) out.push_back("vertex " + id + ": negative dim");
    for (const auto& [id, e] : g.edges) {
        if (e.group.dim < 0) out.push_back("edge " + id + ": negative dim");
        for (int k = 0; k < 2; ++k) {
            const EdgeEnd& ee = e.ends[k];
            std::string where = "edge " + id + " end " + std::to_string(k + 1);
            auto vit = g.vertices.find(ee.vertex);
            if (vit == g.vertices.end()) {
                out.push_back(where + ": references missing vertex " + ee.vertex);
                continue;
            }
            if (e.group.dim > vit->second.dim)
                out.push_back(where + ": edge dim exceeds vertex dim");
            if (g.regime == Regime::Abstract) {
                if (!ee.inj.declared || ee.inj.matrix)
                    out.push_back(where + ": abstract regime requires a declared index");
                else if (!ee.inj.declared->is_infinite() && ee.inj.declared->value() < 1)
                    out.push_back(where + ": declared index must be positive");
            } else {
                if (!ee.inj.matrix || ee.inj.declared) {
                    out.push_back(where + ": abelian regime requires a matrix");
                    continue;
                }
                const QMatrix& m = *ee.inj.matrix;
                if (m.rows() != vit->second.dim || m.cols() != e.group.dim)
                    out.push_back(where + ": matrix shape mismatch");
                else if (m.rank() < m.cols())
                    out.push_back(where + ": matrix not injective (column rank deficient)");
            }
        }
    }
    return out;
}

ReducedCheck is_reduced(const GraphOfGroups& g) {
    ReducedCheck rc;
    for (const auto& [id, v] : g.vertices) rc.surjective_end_counts[id] = 0;
    for (const auto& [id, e] : g.edges)
        for (int k = 0; k < 2; ++k) {
            Index idx = end_index(g, e, k);
            if (!idx.is_infinite() && idx.value() == 1) rc.surjective_end_counts[e.ends[k].vertex] += 1;
        }
    for (const auto& [id, c] : rc.surjective_end_counts)
        if (c == 1) rc.reduced = false;
    return rc;
}

bool ReduceResult::has_non_collapsible() const {
    for (const auto& line : trace)
        if (line.rfind("NON-COLLAPSIBLE", 0) == 0) return true;
    return false;
}

namespace {

// Composition of a re-based abelian end: the collapsed edge identifies the
// removed vertex group with the edge group (unimodular M1), which sits in
// the surviving vertex group via M2.
QMatrix compose_rebased(const QMatrix& m2, const QMatrix& m1, const QMatrix& n) {
    auto inv = m1.inverse();
    if (!inv) throw Error("InvalidInjection", "collapsed end matrix not invertible");
    QMatrix r = m2 * (*inv) * n;
    if (!r.integral()) throw Error("InvalidInjection", "re-based matrix not integral");
    return r;
}

} // namespace

ReduceResult reduce(const GraphOfGroups& g) {
    ReduceResult res;
    res.graph = g;
    GraphOfGroups& h = res.graph;

    while (true) {
        ReducedCheck rc = is_reduced(h);
        std::string pick_edge;
        int pick_end = -1;
        for (const auto& [id, e] : h.edges) {
            if (e.is_loop()) continue;
            for (int k = 0; k < 2 && pick_end < 0; ++k) {
                Index idx = end_index(h, e, k);
                if (idx.is_infinite() || idx.value() != 1) continue;
                if (rc.surjective_end_counts.at(e.ends[k].vertex) == 1) {
                    pick_edge = id;
                    pick_end = k;
                }
            }
            if (pick_end >= 0) break;
        }
        if (pick_end < 0) break;

        Edge collapsed = h.edges.at(pick_edge);
        const std::string removed = collapsed.ends[pick_end].vertex;
        const std::string survivor = collapsed.ends[1 - pick_end].vertex;
        Index other_idx = end_index(h, collapsed, 1 - pick_end);
        res.trace.push_back("collapse edge=" + pick_edge + " end=" + std::to_string(pick_end + 1) +
                            " removed=" + removed + " into=" + survivor);

        h.edges.erase(pick_edge);
        for (auto& [fid, f] : h.edges) {
            for (int k = 0; k < 2; ++k) {
                if (f.ends[k].vertex != removed) continue;
                f.ends[k].vertex = survivor;
                if (h.regime == Regime::Abstract) {
                    f.ends[k].inj.declared = *f.ends[k].inj.declared * other_idx;
                } else {
                    f.ends[k].inj.matrix = compose_rebased(*collapsed.ends[1 - pick_end].inj.matrix,
                                                           *collapsed.ends[pick_end].inj.matrix,
                                                           *f.ends[k].inj.matrix);
                }
                res.trace.push_back("rebase edge=" + fid + " end=" + std::to_string(k + 1) +
                                    " at=" + survivor + " index=" + end_index(h, f, k).str());
            }
        }
        h.vertices.erase(removed);
    }

    ReducedCheck rc = is_reduced(h);
    for (const auto& [vid, count] : rc.surjective_end_counts) {
        if (count != 1) continue;
        for (const auto& [eid, e] : h.edges)
            for (int k = 0; k < 2; ++k) {
                if (e.ends[k].vertex != vid) continue;
                Index idx = end_index(h, e, k);
                if (!idx.is_infinite() && idx.value() == 1)
                    res.trace.push_back("NON-COLLAPSIBLE loop=" + eid + " vertex=" + vid);
            }
    }
    return res;
}

bool is_geometrically_homogeneous(const GraphOfGroups& g) {
    for (const auto& [id, e] : g.edges)
        for (int k = 0; k < 2; ++k)
            if (end_index(g, e, k).is_infinite()) return false;
    return true;
}

Index tree_valence(const GraphOfGroups& g, const std::string& v) {
    if (!g.vertices.count(v)) throw Error("BadVertex", "no vertex " + v);
    Index sum = Index::finite(0);
    for (const auto& [id, e] : g.edges)
        for (int k = 0; k < 2; ++k)
            if (e.ends[k].vertex == v) sum = sum + end_index(g, e, k);
    return sum;
}

bool is_connected(const GraphOfGroups& g) {
    if (g.vertices.empty()) return true;
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [id, e] : g.edges) {
        adj[e.ends[0].vertex].push_back(e.ends[1].vertex);
        adj[e.ends[1].vertex].push_back(e.ends[0].vertex);
    }
    std::map<std::string, bool> seen;
    std::queue<std::string> q;
    q.push(g.vertices.begin()->first);
    seen[q.front()] = true;
    size_t n = 1;
    while (!q.empty()) {
        std::string v = q.front();
        q.pop();
        for (const auto& w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                ++n;
                q.push(w);
            }
    }
    return n == g.vertices.size();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
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

Index parse_index(const std::string& s, int line) {
    if (s == "inf") return Index::infinite();
    long long v = parse_ll(s, line);
    if (v < 1) throw ParseError(line, "index must be positive or inf");
    return Index::finite(v);
}

// "r11,r12;r21,r22"; "." denotes a matrix with zero columns.
QMatrix parse_matrix(const std::string& s, int rows_expected, int line) {
    if (s == ".") return QMatrix(rows_expected, 0);
    std::vector<std::vector<long long>> rows;
    for (const auto& row : split(s, ';')) {
        std::vector<long long> r;
        for (const auto& cell : split(row, ',')) r.push_back(parse_ll(cell, line));
        rows.push_back(r);
    }
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i].size() != rows[0].size()) throw ParseError(line, "ragged matrix rows");
    return QMatrix::from_rows(rows);
}

std::string serialize_matrix(const QMatrix& m) {
    if (m.cols() == 0) return ".";
    std::string s;
    for (int i = 0; i < m.rows(); ++i) {
        if (i) s += ";";
        for (int j = 0; j < m.cols(); ++j) {
            if (j) s += ",";
            s += std::to_string(m.at_int(i, j));
        }
    }
    return s;
}

// key=value tokens after the positional ones
std::map<std::string, std::string> keyvals(const std::vector<std::string>& toks, size_t from, int line) {
    std::map<std::string, std::string> kv;
    for (size_t i = from; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + toks[i] + "'");
        std::string k = toks[i].substr(0, eq);
        if (kv.count(k)) throw ParseError(line, "duplicate key '" + k + "'");
        kv[k] = toks[i].substr(eq + 1);
    }
    return kv;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

} // namespace

GraphOfGroups parse_gog(const std::string& text) {
    GraphOfGroups g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (!header_seen) {
            if (toks.size() != 3 || toks[0] != "gog" || toks[1] != "v1" ||
                (toks[2] != "abstract" && toks[2] != "abelian"))
                throw ParseError(lineno, "expected 'gog v1 <abstract|abelian>'");
            g.regime = toks[2] == "abstract" ? Regime::Abstract : Regime::Abelian;
            header_seen = true;
            continue;
        }
        if (toks[0] == "vertex") {
            if (toks.size() < 3) throw ParseError(lineno, "vertex needs id and dim/rank");
            auto kv = keyvals(toks, 2, lineno);
            const char* key = g.regime == Regime::Abstract ? "dim" : "rank";
            if (!kv.count(key)) throw ParseError(lineno, std::string("vertex needs ") + key);
            if (g.vertices.count(toks[1])) throw ParseError(lineno, "duplicate vertex id " + toks[1]);
            long long d = parse_ll(kv[key], lineno);
            if (d < 0) throw ParseError(lineno, "negative dim/rank");
            g.vertices[toks[1]] = GroupSpec{static_cast<int>(d)};
        } else if (toks[0] == "edge") {
            if (toks.size() < 3) throw ParseError(lineno, "edge needs id and attributes");
            auto kv = keyvals(toks, 2, lineno);
            if (!kv.count("ends")) throw ParseError(lineno, "edge needs ends=<v>,<v>");
            auto ends = split(kv["ends"], ',');
            if (ends.size() != 2) throw ParseError(lineno, "edge needs exactly two ends");
            if (g.edges.count(toks[1])) throw ParseError(lineno, "duplicate edge id " + toks[1]);
            Edge e;
            e.ends[0].vertex = ends[0];
            e.ends[1].vertex = ends[1];
            for (int k = 0; k < 2; ++k)
                if (!g.vertices.count(ends[k]))
                    throw ParseError(lineno, "edge references unknown vertex " + ends[k]);
            if (g.regime == Regime::Abstract) {
                if (!kv.count("dim") || !kv.count("idx"))
                    throw ParseError(lineno, "abstract edge needs dim= and idx=");
                long long d = parse_ll(kv["dim"], lineno);
                if (d < 0) throw ParseError(lineno, "negative dim");
                e.group.dim = static_cast<int>(d);
                auto idx = split(kv["idx"], ',');
                if (idx.size() != 2) throw ParseError(lineno, "idx needs two entries");
                e.ends[0].inj.declared = parse_index(idx[0], lineno);
                e.ends[1].inj.declared = parse_index(idx[1], lineno);
            } else {
                if (!kv.count("rank") || !kv.count("m1") || !kv.count("m2"))
                    throw ParseError(lineno, "abelian edge needs rank=, m1= and m2=");
                long long d = parse_ll(kv["rank"], lineno);
                if (d < 0) throw ParseError(lineno, "negative rank");
                e.group.dim = static_cast<int>(d);
                e.ends[0].inj.matrix = parse_matrix(kv["m1"], g.vertices[ends[0]].dim, lineno);
                e.ends[1].inj.matrix = parse_matrix(kv["m2"], g.vertices[ends[1]].dim, lineno);
                for (int k = 0; k < 2; ++k)
                    if (e.ends[k].inj.matrix->rows() != g.vertices[ends[k]].dim ||
                        e.ends[k].inj.matrix->cols() != e.group.dim)
                        throw ParseError(lineno, "matrix m" + std::to_string(k + 1) + " has wrong shape");
            }
            g.edges[toks[1]] = e;
        } else {
            throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (!header_seen) throw ParseError(1, "missing gog header");
    return g;
}

std::string serialize_gog(const GraphOfGroups& g) {
    std::string out = "gog v1 ";
    out += g.regime == Regime::Abstract ? "abstract" : "abelian";
    out += "\n";
    const char* dimkey = g.regime == Regime::Abstract ? "dim" : "rank";
    for (const auto& [id, v] : g.vertices)
        out += "vertex " + id + " " + dimkey + "=" + std::to_string(v.dim) + "\n";
    for (const auto& [id, e] : g.edges) {
        out += "edge " + id + " ends=" + e.ends[0].vertex + "," + e.ends[1].vertex;
        if (g.regime == Regime::Abstract) {
            out += " dim=" + std::to_string(e.group.dim);
            out += " idx=" + e.ends[0].inj.declared->str() + "," + e.ends[1].inj.declared->str();
        } else {
            out += " rank=" + std::to_string(e.group.dim);
            out += " m1=" + serialize_matrix(*e.ends[0].inj.matrix);
            out += " m2=" + serialize_matrix(*e.ends[1].inj.matrix);
        }
        out += "\n";
    }
    return out;
}

} // namespace qtrees::gog
