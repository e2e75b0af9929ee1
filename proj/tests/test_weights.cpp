#include <doctest.h>

#include "tango/weights.hpp"
#include "tango/linebundle.hpp"

#include <algorithm>
#include <set>

using namespace tango;

namespace {

// Enumeration oracle for the grade dimension: pairs p < q, p + q = k.
int grade_dim_enumerated(int n, int k) {
    int count = 0;
    for (int p = 0; p <= n; ++p)
        for (int q = p + 1; q <= n; ++q)
            if (p + q == k) ++count;
    return count;
}

GradedWedgeVector vec(int n, std::vector<std::pair<WedgeIndex, long>> entries) {
    GradedWedgeVector v;
    v.n = n;
    for (auto& [idx, c] : entries) v.set(idx, Rat(c));
    return v;
}

} // namespace

TEST_CASE("monomial weights") {
    TangoParams p{3, 1, 1, 0};
    CHECK(weight_of_monomial(p, 0) == 3);
    CHECK(weight_of_monomial(p, 3) == 0);
    TangoParams cascini{3, 1, 1, -1};
    CHECK(weight_of_monomial(cascini, 3) == -3);
    TangoParams flat{4, 2, 2, 2};
    for (int i = 0; i <= 4; ++i) CHECK(weight_of_monomial(flat, i) == 8);
    CHECK_THROWS_AS(weight_of_monomial(p, 4), std::invalid_argument);
    CHECK_THROWS_AS(weight_of_monomial(p, -1), std::invalid_argument);

    SUBCASE("weight of z_{p,q} is additive in the two factors") {
        TangoParams w{5, 3, 2, -1};
        for (int p1 = 0; p1 <= 5; ++p1)
            for (int q1 = p1 + 1; q1 <= 5; ++q1)
                CHECK(weight_of_monomial(w, p1) + weight_of_monomial(w, q1) ==
                      2 * 5 * w.alpha + (p1 + q1) * (w.beta - w.alpha));
    }
}

TEST_CASE("grade dimensions and bases") {
    CHECK(grade_dim(3, 3) == 2);
    CHECK(grade_dim(4, 4) == 2);
    for (int n = 3; n <= 12; ++n) {
        CHECK(grade_dim(n, 1) == 1);
        Int total = 0;
        for (int k = 1; k <= 2 * n - 1; ++k) {
            CHECK(grade_dim(n, k) == grade_dim_enumerated(n, k));
            CHECK(static_cast<int>(grade_basis(n, k).size()) == grade_dim(n, k));
            total += grade_dim(n, k);
        }
        CHECK(total == binom(n + 1, 2));
    }
    CHECK_THROWS_AS(grade_dim(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(grade_dim(3, 6), std::invalid_argument);
}

TEST_CASE("wedge squares of homogeneous vectors") {
    auto z = [](int p, int q) { return WedgeIndex{p, q}; };

    CHECK(wedge_square(vec(3, {{z(0, 3), 1}})).empty());

    auto sq = wedge_square(vec(3, {{z(0, 3), 1}, {z(1, 2), 1}}));
    REQUIRE(sq.size() == 1);
    CHECK(sq.begin()->first == std::pair(z(0, 3), z(1, 2)));
    CHECK(sq.begin()->second == Rat(2));

    auto sq2 = wedge_square(vec(4, {{z(0, 4), 2}, {z(1, 3), -3}}));
    REQUIRE(sq2.size() == 1);
    CHECK(sq2.begin()->second == Rat(-12));

    CHECK_THROWS_AS(wedge_square(vec(3, {{z(0, 1), 1}, {z(0, 2), 1}})),
                    std::invalid_argument);
}

TEST_CASE("decomposability matches vanishing wedge square") {
    auto z = [](int p, int q) { return WedgeIndex{p, q}; };
    CHECK(is_decomposable_homogeneous(vec(3, {{z(1, 2), 5}})));
    CHECK_FALSE(is_decomposable_homogeneous(vec(3, {{z(0, 3), 1}, {z(1, 2), 1}})));
    CHECK(is_decomposable_homogeneous(vec(3, {})));

    // Exhaustive over small-coefficient vectors in every grade of dim <= 3.
    for (int n = 3; n <= 5; ++n) {
        for (int k = 1; k <= 2 * n - 1; ++k) {
            auto basis = grade_basis(n, k);
            if (basis.size() > 3) continue;
            std::vector<long> coeff(basis.size(), 0);
            const long vals[] = {0, 1, -1, 2, -2};
            size_t total = 1;
            for (size_t j = 0; j < basis.size(); ++j) total *= 5;
            for (size_t code = 0; code < total; ++code) {
                size_t c = code;
                GradedWedgeVector v;
                v.n = n;
                int nonzero = 0;
                for (size_t j = 0; j < basis.size(); ++j, c /= 5) {
                    long a = vals[c % 5];
                    if (a != 0) ++nonzero;
                    v.set(basis[j], Rat(a));
                }
                CHECK(is_decomposable_homogeneous(v) == (nonzero <= 1));
                CHECK(is_decomposable_homogeneous(v) == wedge_square(v).empty());
            }
        }
    }
}

TEST_CASE("subspace validation") {
    WSpace w;
    w.n = 3;
    w.functionals[3] = {Rat(1), Rat(-1)};
    auto report = wspace_validate(w);
    CHECK(report.in_family);
    CHECK(report.dim_w == 1);
    CHECK(report.dim_w == binom(4, 2) - 5);

    WSpace bad;
    bad.n = 3;
    bad.functionals[3] = {Rat(1), Rat(0)}; // hyperplane through z_{1,2}
    auto bad_report = wspace_validate(bad);
    CHECK_FALSE(bad_report.in_family);
    CHECK_FALSE(bad_report.hyperplanes_ok);

    WSpace w4;
    w4.n = 4;
    w4.functionals[3] = {Rat(1), Rat(1)};
    w4.functionals[4] = {Rat(1), Rat(2)};
    w4.functionals[5] = {Rat(3), Rat(1)};
    auto r4 = wspace_validate(w4);
    CHECK(r4.in_family);
    CHECK(r4.dim_w == 3);

    SUBCASE("grades outside 3..2n-3 are rejected") {
        WSpace out;
        out.n = 3;
        out.functionals[2] = {Rat(1)};
        CHECK_THROWS_AS(wspace_validate(out), std::invalid_argument);
    }
}

TEST_CASE("no-decomposable evidence") {
    WSpace w;
    w.n = 3;
    w.functionals[3] = {Rat(1), Rat(-1)};
    auto ev = wspace_no_decomposable_check(w, 100, 42);
    CHECK(ev.structural_ok);
    CHECK(ev.randomized_ok);
    CHECK(ev.trials == 100);
    CHECK(ev.seed == 42);

    WSpace w4 = sample_wspace(4, 7);
    CHECK(wspace_validate(w4).in_family);
    auto ev4 = wspace_no_decomposable_check(w4, 100, 7);
    CHECK(ev4.structural_ok);
    CHECK(ev4.randomized_ok);
}

TEST_CASE("complement basis construction") {
    WSpace w;
    w.n = 3;
    w.functionals[3] = {Rat(1), Rat(-1)};
    DWBasis dw = build_dw(w);
    REQUIRE(dw.picks.size() == 5);
    CHECK(dw.picks.at(1) == WedgeIndex{0, 1});
    CHECK(dw.picks.at(2) == WedgeIndex{0, 2});
    CHECK(dw.picks.at(3) == WedgeIndex{0, 3});
    CHECK(dw.picks.at(4) == WedgeIndex{1, 3});
    CHECK(dw.picks.at(5) == WedgeIndex{2, 3});

    WSpace w4 = sample_wspace(4, 3);
    DWBasis dw4 = build_dw(w4);
    CHECK(dw4.picks.size() == 7);
    for (auto& [k, pick] : dw4.picks) CHECK(pick.grade() == k);

    // Complement dimension count.
    CHECK(Int(dw4.picks.size()) + wspace_validate(w4).dim_w == binom(5, 2));
}

TEST_CASE("wedge-square decomposition labels") {
    CHECK(clebsch_gordan_wedge2(3) == std::vector<long>{4, 0});
    CHECK(clebsch_gordan_wedge2(4) == std::vector<long>{6, 2});
    CHECK(clebsch_gordan_wedge2(5) == std::vector<long>{8, 4, 0});
    for (int n = 1; n <= 10; ++n) {
        Int dims = 0;
        for (long label : clebsch_gordan_wedge2(n)) {
            CHECK(label >= 0);
            CHECK(label % 2 == 0);
            dims += label + 1;
        }
        CHECK(dims == binom(n + 1, 2));
    }
}

TEST_CASE("subspace JSON round trip") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        WSpace w = sample_wspace(4, seed);
        WSpace back = wspace_from_json(wspace_to_json(w));
        CHECK(back.n == w.n);
        CHECK(back.functionals == w.functionals);
    }
    CHECK_THROWS(wspace_from_json("not json"));
}
