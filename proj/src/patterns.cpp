#include "qtrees/patterns.hpp"

#include <random>
#include <sstream>

#include "qtrees/error.hpp"

namespace qtrees::patterns {

std::vector<std::string> validate_pattern(const SubspacePattern& p) {
    std::vector<std::string> out;
    if (p.subspaces.empty()) out.push_back("pattern needs at least one subspace");
    if (p.ids.size() != p.subspaces.size()) out.push_back("ids/subspaces size mismatch");
    for (size_t k = 0; k < p.subspaces.size(); ++k) {
        const QMatrix& m = p.subspaces[k];
        std::string where = "subspace " + std::to_string(k);
        if (m.cols() != p.ambient) out.push_back(where + ": ambient mismatch");
        if (m.rows() < 1) out.push_back(where + ": zero subspace");
        else if (m.rank() < m.rows()) out.push_back(where + ": basis rows not independent");
    }
    return out;
}

ProjectivePattern canonical_projective_pattern(const SubspacePattern& p) {
    auto violations = validate_pattern(p);
    if (!violations.empty()) throw Error("BadPattern", violations.front());
    ProjectivePattern out;
    out.ambient = p.ambient;
    for (const QMatrix& m : p.subspaces) out.canonical.push_back(m.canonical_row_basis());
    return out;
}

std::string to_string(EquivVerdict v) {
    switch (v) {
        case EquivVerdict::Yes: return "YES";
        case EquivVerdict::No: return "NO";
        case EquivVerdict::ProbablyNo: return "PROBABLY-NO";
    }
    return "?";
}

Report EquivResult::report() const {
    Report rep;
    rep.add("equivalent", to_string(verdict));
    rep.add("mode", mode);
    rep.add("trials", trials);
    if (verdict == EquivVerdict::Yes) rep.add("F", witness.to_string());
    return rep;
}

namespace {

QMatrix reshape_to_square(const QMatrix& col, int n) {
    QMatrix f(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) f.at(p, q) = col.at(p * n + q, 0);
    return f;
}

bool verify_witness(const QMatrix& f, const SubspacePattern& from, const SubspacePattern& to) {
    QMatrix ft = f.transposed();
    for (size_t k = 0; k < from.subspaces.size(); ++k)
        if ((from.subspaces[k] * ft).canonical_row_basis() != to.subspaces[k].canonical_row_basis())
            return false;
    return true;
}

} // namespace

EquivResult decide_projective_equivalence(const SubspacePattern& from, const SubspacePattern& to,
                                          const EquivOptions& opts) {
    for (const auto& bad : validate_pattern(from)) throw Error("BadPattern", "from: " + bad);
    for (const auto& bad : validate_pattern(to)) throw Error("BadPattern", "to: " + bad);
    if (from.ambient != to.ambient) throw Error("BadPattern", "ambient rank mismatch");
    if (from.size() != to.size()) throw Error("BadPattern", "pattern length mismatch");
    const int n = from.ambient;
    const size_t kk = from.size();

    EquivResult res;
    for (size_t k = 0; k < kk; ++k)
        if (from.subspaces[k].rows() != to.subspaces[k].rows()) {
            res.verdict = EquivVerdict::No;
            res.mode = "dimension";
            return res;
        }

    // containment constraints A_k F B_k = 0 on vec(F)
    std::vector<std::vector<Rat>> rows;
    for (size_t k = 0; k < kk; ++k) {
        QMatrix b = from.subspaces[k].transposed();          // n x d, columns span W_k
        QMatrix a = to.subspaces[k].kernel_basis().transposed(); // rows annihilate V_k
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) {
                std::vector<Rat> row(static_cast<size_t>(n) * n);
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) row[static_cast<size_t>(p) * n + q] = a.at(i, p) * b.at(q, j);
                rows.push_back(std::move(row));
            }
    }
    QMatrix constraints(static_cast<int>(rows.size()), n * n);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < n * n; ++j) constraints.at(static_cast<int>(i), j) = rows[i][j];

    QMatrix kernel = constraints.kernel_basis();
    const int m = kernel.cols();
    if (m == 0) {
        res.verdict = EquivVerdict::No;
        res.mode = "grid";
        return res;
    }

    std::vector<QMatrix> basis;
    for (int j = 0; j < m; ++j) {
        QMatrix col(n * n, 1);
        for (int i = 0; i < n * n; ++i) col.at(i, 0) = kernel.at(i, j);
        basis.push_back(reshape_to_square(col, n));
    }

    auto combine = [&](const std::vector<Rat>& t) {
        QMatrix f(n, n);
        for (int bi = 0; bi < m; ++bi) {
            if (t[bi] == 0) continue;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) f.at(p, q) += t[bi] * basis[bi].at(p, q);
        }
        return f;
    };

    // exact grid decision when affordable
    double grid_size = 1;
    for (int i = 0; i < m && grid_size <= static_cast<double>(opts.grid_limit); ++i)
        grid_size *= n + 1;
    if (grid_size <= static_cast<double>(opts.grid_limit)) {
        std::vector<Rat> t(m, Rat(0));
        std::vector<int> odo(m, 0);
        long long trials = 0;
        while (true) {
            ++trials;
            QMatrix f = combine(t);
            if (f.det() != 0) {
                if (!verify_witness(f, from, to))
                    throw Error("WitnessInvalid", "solution space element fails exact verification");
                res.verdict = EquivVerdict::Yes;
                res.witness = f;
                res.mode = "grid";
                res.trials = trials;
                return res;
            }
            int i = 0;
            for (; i < m; ++i) {
                if (odo[i] < n) {
                    ++odo[i];
                    t[i] = Rat(odo[i]);
                    break;
                }
                odo[i] = 0;
                t[i] = Rat(0);
            }
            if (i == m) break;
        }
        res.verdict = EquivVerdict::No;
        res.mode = "grid";
        res.trials = trials;
        return res;
    }

    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<long long> coef(-(n + 3), n + 3);
    for (long long trial = 1; trial <= opts.random_trials; ++trial) {
        std::vector<Rat> t(m);
        for (int i = 0; i < m; ++i) t[i] = Rat(static_cast<long>(coef(rng)));
        QMatrix f = combine(t);
        if (f.det() != 0) {
            if (!verify_witness(f, from, to))
                throw Error("WitnessInvalid", "solution space element fails exact verification");
            res.verdict = EquivVerdict::Yes;
            res.witness = f;
            res.mode = "random";
            res.trials = trial;
            return res;
        }
    }
    res.verdict = EquivVerdict::ProbablyNo;
    res.mode = "random";
    res.trials = opts.random_trials;
    return res;
}

Rat cross_ratio(const std::vector<std::pair<Rat, Rat>>& lines) {
    if (lines.size() != 4) throw Error("DegeneratePattern", "cross-ratio needs four lines");
    auto d = [&](int i, int j) -> Rat {
        return lines[i].first * lines[j].second - lines[j].first * lines[i].second;
    };
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (d(i, j) == 0) throw Error("DegeneratePattern", "repeated line");
    Rat v = (d(0, 2) * d(1, 3)) / (d(0, 3) * d(1, 2));
    v.canonicalize();
    return v;
}

Rat cross_ratio(const SubspacePattern& p) {
    if (p.ambient != 2 || p.size() != 4) throw Error("DegeneratePattern", "need four lines in Q^2");
    std::vector<std::pair<Rat, Rat>> lines;
    for (const QMatrix& m : p.subspaces) {
        if (m.rows() != 1) throw Error("DegeneratePattern", "subspaces must be lines");
        lines.emplace_back(m.at(0, 0), m.at(0, 1));
    }
    return cross_ratio(lines);
}

SubspacePattern apply_linear(const QMatrix& f, const SubspacePattern& p) {
    if (f.rows() != p.ambient || f.cols() != p.ambient) throw Error("SingularMatrix", "shape mismatch");
    if (f.det() == 0) throw Error("SingularMatrix", "map is not invertible");
    SubspacePattern out;
    out.ambient = p.ambient;
    out.ids = p.ids;
    QMatrix ft = f.transposed();
    for (const QMatrix& m : p.subspaces) out.subspaces.push_back((m * ft).canonical_row_basis());
    return out;
}

SubspacePattern parse_pat(const std::string& text) {
    SubspacePattern p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
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
            if (toks.size() != 3 || toks[0] != "pat" || toks[1] != "v1" || toks[2].rfind("n=", 0) != 0)
                throw ParseError(lineno, "expected 'pat v1 n=<n>'");
            try {
                p.ambient = std::stoi(toks[2].substr(2));
            } catch (const std::exception&) {
                throw ParseError(lineno, "bad ambient rank");
            }
            header = true;
            continue;
        }
        if (toks[0] != "sub" || toks.size() != 3 || toks[2].rfind("rows=", 0) != 0)
            throw ParseError(lineno, "expected 'sub <id> rows=<rows>'");
        std::vector<std::vector<long long>> rows;
        std::string spec = toks[2].substr(5);
        std::string rowbuf;
        auto flush_row = [&]() {
            std::vector<long long> r;
            std::string cell;
            for (char c : rowbuf + ",") {
                if (c == ',') {
                    try {
                        r.push_back(std::stoll(cell));
                    } catch (const std::exception&) {
                        throw ParseError(lineno, "bad entry '" + cell + "'");
                    }
                    cell.clear();
                } else
                    cell += c;
            }
            rows.push_back(r);
            rowbuf.clear();
        };
        for (char c : spec) {
            if (c == ';')
                flush_row();
            else
                rowbuf += c;
        }
        flush_row();
        for (const auto& r : rows)
            if (static_cast<int>(r.size()) != p.ambient) throw ParseError(lineno, "row arity mismatch");
        p.ids.push_back(toks[1]);
        p.subspaces.push_back(QMatrix::from_rows(rows));
    }
    if (!header) throw ParseError(1, "missing pat header");
    return p;
}

std::string serialize_pat(const SubspacePattern& p) {
    std::string out = "pat v1 n=" + std::to_string(p.ambient) + "\n";
    for (size_t k = 0; k < p.subspaces.size(); ++k) {
        out += "sub " + p.ids[k] + " rows=";
        const QMatrix& m = p.subspaces[k];
        for (int i = 0; i < m.rows(); ++i) {
            if (i) out += ";";
            for (int j = 0; j < m.cols(); ++j) {
                if (j) out += ",";
                out += std::to_string(m.at_int(i, j));
            }
        }
        out += "\n";
    }
    return out;
}

} // namespace qtrees::patterns
