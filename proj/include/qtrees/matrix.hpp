#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace qtrees {

using Int = mpz_class;
using Rat = mpq_class;

/** Renders "p" or "p/q" in lowest terms. */
std::string rat_str(const Rat& r);

/** Parses "p" or "p/q". Throws Error("BadRational") on junk. */
Rat rat_parse(const std::string& s);

/**
 * Dense matrix over Q with exact arithmetic. Everything downstream that
 * needs a rank, determinant, kernel or canonical subspace basis goes
 * through this class, so results are exact by construction.
 */
class QMatrix {
public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static QMatrix identity(int n);
    static QMatrix from_rows(const std::vector<std::vector<long long>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Rat& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    bool operator==(const QMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const QMatrix& o) const { return !(*this == o); }

    QMatrix transposed() const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix hconcat(const QMatrix& o) const;
    QMatrix vconcat(const QMatrix& o) const;

    bool is_zero() const;
    bool integral() const;
    /** Numerator of an integral entry; requires integral() and word-sized values. */
    long long at_int(int r, int c) const;

    int rank() const;
    Rat det() const;
    QMatrix rref(int* rank_out = nullptr) const;
    std::optional<QMatrix> inverse() const;

    /** Columns span {x : Ax = 0}. Deterministic (free columns of the RREF). */
    QMatrix kernel_basis() const;

    /**
     * Unique representative of the row space: RREF rescaled so each row is
     * a primitive integer vector with positive leading entry. Two matrices
     * span the same subspace iff their canonical row bases are equal.
     */
    QMatrix canonical_row_basis() const;

    std::string to_string() const;

private:
    int rows_, cols_;
    std::vector<Rat> a_;
};

} // namespace qtrees
