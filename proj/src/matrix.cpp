#include "qtrees/matrix.hpp"

#include <algorithm>

#include "qtrees/error.hpp"

namespace qtrees {

std::string rat_str(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return c.get_str();
}

Rat rat_parse(const std::string& s) {
    if (s.empty()) throw Error("BadRational", "empty string");
    for (char ch : s) {
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
            throw Error("BadRational", "bad character in '" + s + "'");
    }
    Rat r;
    if (r.set_str(s, 10) != 0) throw Error("BadRational", "cannot parse '" + s + "'");
    if (r.get_den() == 0) throw Error("BadRational", "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    QMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw Error("BadMatrix", "ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = Rat(static_cast<long>(rows[i][j]));
    }
    return m;
}

QMatrix QMatrix::transposed() const {
    QMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) throw Error("BadMatrix", "dimension mismatch in product");
    QMatrix p(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rat& v = at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < o.cols_; ++j) p.at(i, j) += v * o.at(k, j);
        }
    return p;
}

QMatrix QMatrix::hconcat(const QMatrix& o) const {
    if (rows_ != o.rows_) throw Error("BadMatrix", "row mismatch in hconcat");
    QMatrix m(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) m.at(i, cols_ + j) = o.at(i, j);
    }
    return m;
}

QMatrix QMatrix::vconcat(const QMatrix& o) const {
    if (cols_ != o.cols_) throw Error("BadMatrix", "column mismatch in vconcat");
    QMatrix m(rows_ + o.rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(rows_ + i, j) = o.at(i, j);
    return m;
}

bool QMatrix::is_zero() const {
    for (const Rat& v : a_)
        if (v != 0) return false;
    return true;
}

bool QMatrix::integral() const {
    for (const Rat& v : a_)
        if (v.get_den() != 1) return false;
    return true;
}

long long QMatrix::at_int(int r, int c) const {
    const Rat& v = at(r, c);
    if (v.get_den() != 1) throw Error("BadMatrix", "entry not integral");
    if (!v.get_num().fits_slong_p()) throw Error("BadMatrix", "entry exceeds word size");
    return v.get_num().get_si();
}

QMatrix QMatrix::rref(int* rank_out) const {
    QMatrix m = *this;
    int lead = 0;
    int rank = 0;
    for (int col = 0; col < cols_ && lead < rows_; ++col) {
        int pivot = -1;
        for (int r = lead; r < rows_; ++r)
            if (m.at(r, col) != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        if (pivot != lead)
            for (int j = 0; j < cols_; ++j) std::swap(m.at(pivot, j), m.at(lead, j));
        Rat inv = 1 / m.at(lead, col);
        for (int j = col; j < cols_; ++j) m.at(lead, j) *= inv;
        for (int r = 0; r < rows_; ++r) {
            if (r == lead) continue;
            Rat f = m.at(r, col);
            if (f == 0) continue;
            for (int j = col; j < cols_; ++j) m.at(r, j) -= f * m.at(lead, j);
        }
        ++lead;
        ++rank;
    }
    if (rank_out) *rank_out = rank;
    return m;
}

int QMatrix::rank() const {
    int r = 0;
    rref(&r);
    return r;
}

Rat QMatrix::det() const {
    if (rows_ != cols_) throw Error("BadMatrix", "determinant of non-square matrix");
    QMatrix m = *this;
    Rat d = 1;
    for (int col = 0; col < cols_; ++col) {
        int pivot = -1;
        for (int r = col; r < rows_; ++r)
            if (m.at(r, col) != 0) { pivot = r; break; }
        if (pivot < 0) return Rat(0);
        if (pivot != col) {
            for (int j = 0; j < cols_; ++j) std::swap(m.at(pivot, j), m.at(col, j));
            d = -d;
        }
        d *= m.at(col, col);
        Rat inv = 1 / m.at(col, col);
        for (int r = col + 1; r < rows_; ++r) {
            Rat f = m.at(r, col) * inv;
            if (f == 0) continue;
            for (int j = col; j < cols_; ++j) m.at(r, j) -= f * m.at(col, j);
        }
    }
    return d;
}

std::optional<QMatrix> QMatrix::inverse() const {
    if (rows_ != cols_) throw Error("BadMatrix", "inverse of non-square matrix");
    QMatrix aug = hconcat(identity(rows_)).rref();
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (aug.at(i, j) != (i == j ? 1 : 0)) return std::nullopt;
    QMatrix inv(rows_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < rows_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
    return inv;
}

QMatrix QMatrix::kernel_basis() const {
    int rank = 0;
    QMatrix r = rref(&rank);
    std::vector<int> pivot_col(rank, -1);
    std::vector<bool> is_pivot(cols_, false);
    for (int i = 0; i < rank; ++i)
        for (int col = 0; col < cols_; ++col)
            if (r.at(i, col) != 0) {
                pivot_col[i] = col;
                is_pivot[col] = true;
                break;
            }
    QMatrix k(cols_, cols_ - rank);
    int out = 0;
    for (int col = 0; col < cols_; ++col) {
        if (is_pivot[col]) continue;
        k.at(col, out) = 1;
        for (int i = 0; i < rank; ++i) k.at(pivot_col[i], out) = -r.at(i, col);
        ++out;
    }
    return k;
}

QMatrix QMatrix::canonical_row_basis() const {
    int rank = 0;
    QMatrix r = rref(&rank);
    QMatrix b(rank, cols_);
    for (int i = 0; i < rank; ++i) {
        Int l = 1;
        for (int j = 0; j < cols_; ++j) {
            Int den = r.at(i, j).get_den();
            l = l / gcd(l, den) * den;
        }
        Int g = 0;
        for (int j = 0; j < cols_; ++j) {
            b.at(i, j) = r.at(i, j) * Rat(l);
            b.at(i, j).canonicalize();
            g = gcd(g, b.at(i, j).get_num());
        }
        if (g > 1)
            for (int j = 0; j < cols_; ++j) {
                b.at(i, j) /= Rat(g);
                b.at(i, j).canonicalize();
            }
    }
    return b;
}

std::string QMatrix::to_string() const {
    std::string s;
    for (int i = 0; i < rows_; ++i) {
        if (i) s += ";";
        for (int j = 0; j < cols_; ++j) {
            if (j) s += ",";
            s += rat_str(at(i, j));
        }
    }
    return s;
}

} // namespace qtrees
