#include <doctest.h>

#include <random>

#include "qtrees/error.hpp"
#include "qtrees/fixtures.hpp"
#include "qtrees/patterns.hpp"

using namespace qtrees;
using namespace qtrees::patterns;

namespace {

SubspacePattern lines(const std::vector<std::pair<long long, long long>>& ls) {
    SubspacePattern p;
    p.ambient = 2;
    for (size_t i = 0; i < ls.size(); ++i) {
        p.ids.push_back("l" + std::to_string(i));
        p.subspaces.push_back(QMatrix::from_rows({{ls[i].first, ls[i].second}}));
    }
    return p;
}

QMatrix random_invertible(std::mt19937_64& rng, int n, long long span) {
    std::uniform_int_distribution<long long> e(-span, span);
    while (true) {
        std::vector<std::vector<long long>> rows(n, std::vector<long long>(n));
        for (auto& r : rows)
            for (auto& x : r) x = e(rng);
        QMatrix m = QMatrix::from_rows(rows);
        if (m.det() != 0) return m;
    }
}

} // namespace

TEST_CASE("canonical projective pattern identifies subspaces") {
    SubspacePattern p;
    p.ambient = 2;
    p.ids = {"a"};
    p.subspaces = {QMatrix::from_rows({{2, 4}})};
    ProjectivePattern c = canonical_projective_pattern(p);
    CHECK(c.canonical[0] == QMatrix::from_rows({{1, 2}}));

    SubspacePattern plane;
    plane.ambient = 3;
    plane.ids = {"p"};
    plane.subspaces = {QMatrix::identity(3)};
    CHECK(canonical_projective_pattern(plane).canonical[0] == QMatrix::identity(3));

    SubspacePattern permuted;
    permuted.ambient = 3;
    permuted.ids = {"p"};
    permuted.subspaces = {QMatrix::from_rows({{0, 1, 1}, {1, 0, 1}})};
    SubspacePattern straight;
    straight.ambient = 3;
    straight.ids = {"p"};
    straight.subspaces = {QMatrix::from_rows({{1, 0, 1}, {0, 1, 1}})};
    CHECK(canonical_projective_pattern(permuted) == canonical_projective_pattern(straight));

    SubspacePattern zero;
    zero.ambient = 2;
    zero.ids = {"z"};
    zero.subspaces = {QMatrix(0, 2)};
    CHECK_THROWS_AS(canonical_projective_pattern(zero), Error);
}

TEST_CASE("cross ratio determinant formula") {
    CHECK(rat_str(cross_ratio(lines({{1, 0}, {0, 1}, {1, 1}, {1, 2}}))) == "1/2");
    CHECK(rat_str(cross_ratio(lines({{1, 0}, {0, 1}, {1, 1}, {1, 3}}))) == "2/3");
    CHECK_THROWS_AS(cross_ratio(lines({{1, 0}, {1, 0}, {1, 1}, {1, 2}})), Error);

    // fixture files carry the same values
    CHECK(rat_str(cross_ratio(parse_pat(fixtures::content("lines_0inf12.pat")))) == "1/2");
    CHECK(rat_str(cross_ratio(parse_pat(fixtures::content("lines_0inf13.pat")))) == "2/3");
}

TEST_CASE("cross ratio is a projective invariant, never 0 or 1") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long long> s(-6, 6);
    for (int trial = 0; trial < 100; ++trial) {
        // four distinct lines
        SubspacePattern p;
        while (true) {
            p = lines({{1, s(rng)}, {s(rng), 1}, {1, s(rng)}, {1, s(rng)}});
            try {
                cross_ratio(p);
                break;
            } catch (const Error&) {
            }
        }
        QMatrix f = random_invertible(rng, 2, 5);
        Rat before = cross_ratio(p);
        Rat after = cross_ratio(apply_linear(f, p));
        CHECK(before == after);
        CHECK(before != 0);
        CHECK(before != 1);
    }
}

TEST_CASE("projective equivalence: identity, cross-ratio mismatch, constructed witness") {
    SubspacePattern p = lines({{1, 0}, {0, 1}, {1, 1}, {1, 2}});
    EquivResult self = decide_projective_equivalence(p, p);
    CHECK(self.verdict == EquivVerdict::Yes);

    SubspacePattern q = lines({{1, 0}, {0, 1}, {1, 1}, {1, 3}});
    EquivResult no = decide_projective_equivalence(p, q);
    CHECK(no.verdict == EquivVerdict::No);
    CHECK(no.mode == "grid");

    std::mt19937_64 rng(23);
    QMatrix f = random_invertible(rng, 2, 4);
    EquivResult yes = decide_projective_equivalence(p, apply_linear(f, p));
    REQUIRE(yes.verdict == EquivVerdict::Yes);
    // returned witness maps each subspace exactly
    SubspacePattern img = apply_linear(yes.witness, p);
    CHECK(canonical_projective_pattern(img) == canonical_projective_pattern(apply_linear(f, p)));
}

TEST_CASE("equivalence matches cross-ratio equality for quadruples of distinct small slopes") {
    // slopes 0, inf, 1, 2 as line vectors
    std::vector<std::pair<long long, long long>> slopes{{1, 0}, {0, 1}, {1, 1}, {1, 2}};
    std::vector<SubspacePattern> quads;
    std::vector<int> idx{0, 1, 2, 3};
    do {
        quads.push_back(lines({slopes[idx[0]], slopes[idx[1]], slopes[idx[2]], slopes[idx[3]]}));
    } while (std::next_permutation(idx.begin(), idx.end()));
    for (const auto& a : quads)
        for (const auto& b : quads) {
            bool same_cr = cross_ratio(a) == cross_ratio(b);
            EquivResult r = decide_projective_equivalence(a, b);
            CHECK((r.verdict == EquivVerdict::Yes) == same_cr);
        }
}

TEST_CASE("dimension vector mismatch is an immediate no") {
    SubspacePattern p;
    p.ambient = 3;
    p.ids = {"a", "b"};
    p.subspaces = {QMatrix::from_rows({{1, 0, 0}}), QMatrix::from_rows({{0, 1, 0}, {0, 0, 1}})};
    SubspacePattern q;
    q.ambient = 3;
    q.ids = {"a", "b"};
    q.subspaces = {QMatrix::from_rows({{1, 0, 0}, {0, 1, 0}}), QMatrix::from_rows({{0, 0, 1}})};
    EquivResult r = decide_projective_equivalence(p, q);
    CHECK(r.verdict == EquivVerdict::No);
    CHECK(r.mode == "dimension");
}

TEST_CASE("apply_linear distributes over composition and rejects singular maps") {
    std::mt19937_64 rng(31);
    SubspacePattern p;
    p.ambient = 3;
    p.ids = {"a", "b"};
    p.subspaces = {QMatrix::from_rows({{1, 1, 0}}), QMatrix::from_rows({{1, 0, 1}, {0, 1, 1}})};
    for (int trial = 0; trial < 20; ++trial) {
        QMatrix f = random_invertible(rng, 3, 3);
        QMatrix g = random_invertible(rng, 3, 3);
        SubspacePattern lhs = apply_linear(f * g, p);
        SubspacePattern rhs = apply_linear(f, apply_linear(g, p));
        CHECK(canonical_projective_pattern(lhs) == canonical_projective_pattern(rhs));
    }
    CHECK_THROWS_AS(apply_linear(QMatrix::from_rows({{1, 2}, {2, 4}}), lines({{1, 0}})), Error);

    // diagonal map sends span{(1,1)} to span{(1,2)}
    SubspacePattern d = apply_linear(QMatrix::from_rows({{1, 0}, {0, 2}}), lines({{1, 1}}));
    CHECK(d.subspaces[0] == QMatrix::from_rows({{1, 2}}));
}

TEST_CASE("random-pattern witnesses verify exactly up to rank 4") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 2 + trial % 3;
        int kk = 1 + trial % 5;
        SubspacePattern p;
        p.ambient = n;
        std::uniform_int_distribution<long long> e(-3, 3);
        for (int k = 0; k < kk; ++k) {
            std::uniform_int_distribution<int> dd(1, n - 1);
            int d = dd(rng);
            QMatrix m(0, n);
            while (m.rows() < d) {
                std::vector<std::vector<long long>> rows(1, std::vector<long long>(n));
                for (auto& x : rows[0]) x = e(rng);
                QMatrix cand = m.vconcat(QMatrix::from_rows(rows));
                if (cand.rank() == cand.rows()) m = cand;
            }
            p.ids.push_back("s" + std::to_string(k));
            p.subspaces.push_back(m);
        }
        QMatrix f = random_invertible(rng, n, 3);
        EquivOptions opts;
        opts.seed = 1000 + trial;
        EquivResult r = decide_projective_equivalence(p, apply_linear(f, p), opts);
        REQUIRE(r.verdict == EquivVerdict::Yes);
        CHECK(canonical_projective_pattern(apply_linear(r.witness, p)) ==
              canonical_projective_pattern(apply_linear(f, p)));
    }
}

TEST_CASE("grid-mode no answers stay no on an independent random sample") {
    SubspacePattern p = lines({{1, 0}, {0, 1}, {1, 1}, {1, 2}});
    SubspacePattern q = lines({{1, 0}, {0, 1}, {1, 1}, {1, 3}});
    EquivResult r = decide_projective_equivalence(p, q);
    REQUIRE(r.verdict == EquivVerdict::No);
    REQUIRE(r.mode == "grid");
    // the randomized path must agree (PROBABLY-NO) when forced off the grid
    EquivOptions opts;
    opts.grid_limit = 0;
    opts.random_trials = 1000;
    opts.seed = 99;
    EquivResult rr = decide_projective_equivalence(p, q, opts);
    CHECK(rr.verdict == EquivVerdict::ProbablyNo);
}

TEST_CASE("pat parse and serialize round trip") {
    for (const char* name : {"lines_0inf12.pat", "lines_0inf13.pat"}) {
        const std::string& text = fixtures::content(name);
        SubspacePattern p = parse_pat(text);
        CHECK(validate_pattern(p).empty());
        CHECK(serialize_pat(p) == text);
    }
    CHECK_THROWS_AS(parse_pat("pat v1 n=2\nsub a rows=1\n"), ParseError);
    CHECK_THROWS_AS(parse_pat("nope\n"), ParseError);
}
