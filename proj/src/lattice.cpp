#include "qtrees/lattice.hpp"

#include <cstdlib>

#include "qtrees/error.hpp"

namespace qtrees {

ColumnHNF column_hnf(std::vector<std::vector<long long>> columns, int n) {
    for (const auto& c : columns)
        if (static_cast<int>(c.size()) != n) throw Error("BadMatrix", "column length mismatch");

    ColumnHNF h;
    h.n = n;
    size_t done = 0; // columns already holding pivots
    for (int row = 0; row < n && done < columns.size(); ++row) {
        // gcd out the row across the remaining columns by Euclid steps
        while (true) {
            size_t best = columns.size();
            for (size_t j = done; j < columns.size(); ++j)
                if (columns[j][row] != 0 &&
                    (best == columns.size() ||
                     std::llabs(columns[j][row]) < std::llabs(columns[best][row])))
                    best = j;
            if (best == columns.size()) break; // row is zero beyond the pivots
            std::swap(columns[done], columns[best]);
            bool reduced_all = true;
            for (size_t j = done + 1; j < columns.size(); ++j) {
                if (columns[j][row] == 0) continue;
                long long q = columns[j][row] / columns[done][row];
                for (int i = 0; i < n; ++i) columns[j][i] -= q * columns[done][i];
                if (columns[j][row] != 0) reduced_all = false;
            }
            if (reduced_all) break;
        }
        if (done < columns.size() && columns[done][row] != 0) {
            if (columns[done][row] < 0)
                for (int i = 0; i < n; ++i) columns[done][i] = -columns[done][i];
            h.pivot_rows.push_back(row);
            ++done;
        }
    }
    columns.resize(done);
    h.cols = std::move(columns);
    return h;
}

bool ColumnHNF::contains(std::vector<long long> x) const {
    if (static_cast<int>(x.size()) != n) throw Error("BadMatrix", "vector length mismatch");
    for (size_t j = 0; j < cols.size(); ++j) {
        int p = pivot_rows[j];
        if (x[p] % cols[j][p] != 0) return false;
        long long q = x[p] / cols[j][p];
        if (q != 0)
            for (int i = 0; i < n; ++i) x[i] -= q * cols[j][i];
    }
    for (long long v : x)
        if (v != 0) return false;
    return true;
}

long long ColumnHNF::covolume() const {
    if (static_cast<int>(cols.size()) != n) return 0;
    long long p = 1;
    for (size_t j = 0; j < cols.size(); ++j) p *= cols[j][pivot_rows[j]];
    return p;
}

} // namespace qtrees
