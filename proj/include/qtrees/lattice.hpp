#pragma once

#include <vector>

namespace qtrees {

/**
 * Column Hermite form of an integer matrix, for exact membership tests in
 * the generated sublattice of Z^n and for its covolume.
 */
struct ColumnHNF {
    int n = 0;
    std::vector<std::vector<long long>> cols; // reduced columns, each length n
    std::vector<int> pivot_rows;              // ascending, one per column

    bool contains(std::vector<long long> x) const;
    /** Product of pivots when the lattice has full rank n; 0 otherwise. */
    long long covolume() const;
};

ColumnHNF column_hnf(std::vector<std::vector<long long>> columns, int n);

} // namespace qtrees
