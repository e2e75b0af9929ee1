#include <doctest.h>

#include "tango/expr.hpp"
#include "tango/linebundle.hpp"

#include <algorithm>
#include <set>

using namespace tango;

namespace {

// All q-subsets / q-multisets of the degree list, summed; enumeration
// oracles for the Wedge / Sym expansions.
void subset_sums(const std::vector<long>& degrees, long q, size_t from, long acc,
                 std::vector<long>& out) {
    if (q == 0) {
        out.push_back(acc);
        return;
    }
    for (size_t j = from; j + static_cast<size_t>(q) <= degrees.size() + 1 && j < degrees.size();
         ++j)
        subset_sums(degrees, q - 1, j + 1, acc + degrees[j], out);
}

void multiset_sums(const std::vector<long>& degrees, long q, size_t from, long acc,
                   std::vector<long>& out) {
    if (q == 0) {
        out.push_back(acc);
        return;
    }
    for (size_t j = from; j < degrees.size(); ++j)
        multiset_sums(degrees, q - 1, j, acc + degrees[j], out);
}

std::vector<long> sorted(std::vector<long> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("defining sequence twist lists") {
    TangoParams w{3, 7, 1, 0};
    CHECK(quotient_middle(w) == std::vector<long>{3, 2, 1, 0});
    CHECK(tango_middle(w) == std::vector<long>{5, 4, 3, 2, 1});

    TangoParams classical{3, 1, 0, 0};
    CHECK(quotient_middle(classical) == std::vector<long>{0, 0, 0, 0});
    CHECK(tango_middle(classical) == std::vector<long>{0, 0, 0, 0, 0});

    TangoParams cascini{3, 7, 1, -1};
    CHECK(quotient_middle(cascini) == std::vector<long>{3, 1, -1, -3});

    TangoParams flat{4, 1, 1, 1};
    CHECK(tango_middle(flat) == std::vector<long>(7, 8));
}

TEST_CASE("ranks") {
    TangoParams p{3, 7, 1, 0};
    CHECK(rank_of(q_bundle(p)) == 3);
    CHECK(rank_of(f_bundle(p)) == 2);
    CHECK(rank_of(sym_q(2, p)) == 6);
    CHECK(rank_of(line(3, 5)) == 1);
    CHECK(rank_of(tensor(q_bundle(p), f_bundle(p))) == 6);
    CHECK(rank_of(direct_sum({q_bundle(p), line(3, 0)})) == 4);

    SUBCASE("power ranks match enumeration") {
        for (long r = 1; r <= 8; ++r) {
            std::vector<long> degrees(static_cast<size_t>(r), 0);
            for (long q = 0; q <= r; ++q) {
                std::vector<long> wedge, sym;
                subset_sums(degrees, q, 0, 0, wedge);
                multiset_sums(degrees, q, 0, 0, sym);
                CHECK(rank_of(wedge_pow_line_sum(3, q, degrees)) == Int(wedge.size()));
                CHECK(rank_of(sym_pow_line_sum(3, q, degrees)) == Int(sym.size()));
                CHECK(binom(r, q) == Int(wedge.size()));
                CHECK(binom(r + q - 1, q) == Int(sym.size()));
            }
        }
    }
}

TEST_CASE("Chern data and slopes") {
    TangoParams w{3, 7, 1, 0};
    CHECK(chern_of(q_bundle(w)).c1() == 13);
    CHECK(c1_quotient(w) == 13);
    CHECK(chern_of(f_bundle(w)).c1() == 9);
    CHECK(c1_tango(w) == 9);
    CHECK(slope_of(f_bundle(w)) == Rat(9, 2));
    CHECK(slope_of(line(3, 4)) == Rat(4));

    TangoParams classical{3, 1, 0, 0};
    CHECK(slope_of(q_bundle(classical)) == Rat(1, 3));

    SUBCASE("c1 of the Tango bundle has the closed form") {
        // 2*c1 = (alpha+beta) * n * (3n-3), integral for every n.
        for (int n = 3; n <= 8; ++n)
            for (long a = 0; a <= 3; ++a)
                for (long b = -a; b <= a; ++b) {
                    TangoParams p{n, 3L * n, a, b};
                    long twice = (a + b) * n * (3 * n - 3);
                    CHECK(twice % 2 == 0);
                    CHECK(c1_tango(p) == twice / 2);
                }
    }

    SUBCASE("Cascini twist lists give slope zero") {
        TangoParams p{4, 9, 2, -2};
        CHECK(c1_tango(p) == 0);
        CHECK(slope_of(f_bundle(p)) == Rat(0));
    }

    SUBCASE("slope is additive under twists") {
        TangoParams p{3, 7, 1, 0};
        for (long m = -4; m <= 4; ++m) {
            CHECK(slope_of(twist(f_bundle(p), m)) == slope_of(f_bundle(p)) + Rat(m));
            CHECK(slope_of(twist(q_bundle(p), m)) == slope_of(q_bundle(p)) + Rat(m));
        }
    }
}

TEST_CASE("normalization") {
    TangoParams p{3, 7, 1, 0};

    auto degrees_of = [](const ExprPtr& e) {
        ExprPtr n = normalize(e);
        REQUIRE(n->kind == ExprKind::LineSum);
        return sorted(n->twists);
    };

    CHECK(degrees_of(wedge_pow_line_sum(3, 2, {5, 4, 3})) == std::vector<long>{7, 8, 9});
    CHECK(degrees_of(sym_pow_line_sum(3, 2, {1, 0})) == std::vector<long>{0, 1, 2});
    CHECK(degrees_of(dual(line(3, 3))) == std::vector<long>{-3});
    CHECK(degrees_of(tensor(line(3, 2), line(3, 3))) == std::vector<long>{5});

    CHECK(key_of(normalize(dual(dual(q_bundle(p))))) == key_of(normalize(q_bundle(p))));
    CHECK(key_of(normalize(twist(twist(q_bundle(p), 2), 3))) ==
          key_of(normalize(twist(q_bundle(p), 5))));

    SUBCASE("idempotent") {
        std::vector<ExprPtr> samples = {
            tensor(q_bundle(p), dual(f_bundle(p))),
            dual(tensor(line_sum(3, {1, 2}), q_bundle(p))),
            twist(wedge_pow_line_sum(3, 2, {3, 1, 0, -2}), 5),
            direct_sum({f_bundle(p), twist(line(3, 1), 2), sym_q(2, p)}),
        };
        for (const auto& e : samples) {
            ExprPtr once = normalize(e);
            CHECK(key_of(normalize(once)) == key_of(once));
        }
    }

    SUBCASE("sym and wedge power expansions match enumeration") {
        std::vector<long> degrees{4, 2, 1, -1};
        for (long q = 1; q <= 3; ++q) {
            std::vector<long> wedge, sym;
            subset_sums(degrees, q, 0, 0, wedge);
            multiset_sums(degrees, q, 0, 0, sym);
            CHECK(degrees_of(wedge_pow_line_sum(3, q, degrees)) == sorted(wedge));
            CHECK(degrees_of(sym_pow_line_sum(3, q, degrees)) == sorted(sym));
        }
    }
}

TEST_CASE("expression keys round trip") {
    TangoParams p{3, 7, 1, 0};
    std::vector<ExprPtr> samples = {
        q_bundle(p),
        f_bundle(p),
        twist(tensor(q_bundle(p), dual(q_bundle(p))), -3),
        tensor(dual(f_bundle(p)), q_bundle(p)),
        wedge_q(2, p),
        sym_q(3, p),
        line_sum(3, {5, 4, 3, 2, 1}),
    };
    for (const auto& e : samples) {
        ExprPtr n = normalize(e);
        CHECK(key_of(expr_from_key(key_of(n))) == key_of(n));
    }
}

TEST_CASE("surface grammar parsing") {
    TangoParams p{3, 7, 1, 0};
    auto same = [&](const std::string& text, const ExprPtr& want) {
        CHECK(key_of(normalize(parse_expr(text, p))) == key_of(normalize(want)));
    };

    same("Q", q_bundle(p));
    same("F", f_bundle(p));
    same("O(-7)", line(3, -7));
    same("Q(2)", twist(q_bundle(p), 2));
    same("Q*", dual(q_bundle(p)));
    same("Q* @ F", tensor(dual(q_bundle(p)), f_bundle(p)));
    same("Q + O(1)", direct_sum({q_bundle(p), line(3, 1)}));
    same("SymQ[2](1)", twist(sym_q(2, p), 1));
    same("Sym[2]{1,0}", sym_pow_line_sum(3, 2, {1, 0}));
    same("Wedge[2]{5,4,3}", wedge_pow_line_sum(3, 2, {5, 4, 3}));
    same("(Q @ F)*(3)", twist(dual(tensor(q_bundle(p), f_bundle(p))), 3));
    same("q @ f", tensor(q_bundle(p), f_bundle(p))); // case-insensitive

    CHECK_THROWS_AS(parse_expr("Q +", p), ParseError);
    CHECK_THROWS_AS(parse_expr("O()", p), ParseError);
    CHECK_THROWS_AS(parse_expr("nonsense", p), ParseError);

    SUBCASE("to_string round trips through the parser") {
        std::vector<ExprPtr> samples = {
            twist(tensor(q_bundle(p), dual(f_bundle(p))), -2),
            direct_sum({line(3, 1), wedge_q(2, p)}),
            sym_q(2, p),
        };
        for (const auto& e : samples) {
            ExprPtr n = normalize(e);
            CHECK(key_of(normalize(parse_expr(to_string(n), p))) == key_of(n));
        }
    }
}
