#include <doctest.h>

#include "qtrees/error.hpp"
#include "qtrees/lattice.hpp"
#include "qtrees/matrix.hpp"

using namespace qtrees;

TEST_CASE("rank and determinant") {
    QMatrix m = QMatrix::from_rows({{2, 0}, {0, 3}});
    CHECK(m.rank() == 2);
    CHECK(m.det() == 6);

    QMatrix r1 = QMatrix::from_rows({{2}, {4}});
    CHECK(r1.rank() == 1);

    QMatrix sing = QMatrix::from_rows({{1, 2}, {2, 4}});
    CHECK(sing.rank() == 1);
    CHECK(sing.det() == 0);
}

TEST_CASE("inverse and product") {
    QMatrix m = QMatrix::from_rows({{1, 1}, {0, 1}});
    auto inv = m.inverse();
    REQUIRE(inv.has_value());
    CHECK((m * *inv) == QMatrix::identity(2));
    CHECK(!QMatrix::from_rows({{1, 2}, {2, 4}}).inverse().has_value());
}

TEST_CASE("kernel basis solves the system") {
    QMatrix m = QMatrix::from_rows({{1, 2, 3}});
    QMatrix k = m.kernel_basis();
    CHECK(k.cols() == 2);
    CHECK((m * k).is_zero());

    CHECK(QMatrix::identity(3).kernel_basis().cols() == 0);
}

TEST_CASE("canonical row basis is scale and basis independent") {
    QMatrix a = QMatrix::from_rows({{2, 4}});
    QMatrix b = QMatrix::from_rows({{1, 2}});
    QMatrix c = QMatrix::from_rows({{-3, -6}});
    CHECK(a.canonical_row_basis() == b.canonical_row_basis());
    CHECK(a.canonical_row_basis() == c.canonical_row_basis());

    QMatrix p1 = QMatrix::from_rows({{1, 0, 1}, {0, 1, 1}});
    QMatrix p2 = QMatrix::from_rows({{1, 1, 2}, {1, -1, 0}});
    CHECK(p1.canonical_row_basis() == p2.canonical_row_basis());
    QMatrix q = QMatrix::from_rows({{1, 0, 0}, {0, 1, 1}});
    CHECK(p1.canonical_row_basis() != q.canonical_row_basis());
}

TEST_CASE("rational parsing") {
    CHECK(rat_str(rat_parse("3/6")) == "1/2");
    CHECK(rat_str(rat_parse("-4")) == "-4");
    CHECK_THROWS_AS(rat_parse("x"), Error);
}

TEST_CASE("column hermite form membership and covolume") {
    ColumnHNF h = column_hnf({{2, 0}, {0, 3}}, 2);
    CHECK(h.covolume() == 6);
    CHECK(h.contains({2, 3}));
    CHECK(h.contains({4, 0}));
    CHECK(!h.contains({1, 0}));

    ColumnHNF line = column_hnf({{1, 2}}, 2);
    CHECK(line.covolume() == 0);
    CHECK(line.contains({3, 6}));
    CHECK(!line.contains({3, 5}));

    // unimodular basis generates everything
    ColumnHNF full = column_hnf({{2, 1}, {1, 1}}, 2);
    CHECK(full.covolume() == 1);
    CHECK(full.contains({0, 1}));
}
