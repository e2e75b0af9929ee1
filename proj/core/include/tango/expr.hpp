#pragma once

#include "tango/numeric.hpp"
#include "tango/params.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace tango {

// Symbolic bundle expressions on P^n. LineSum is the fully reduced form of
// everything built from line bundles; QBundle / SymQ / FBundle are the
// cokernel atoms that only the chase engine can open up.
enum class ExprKind {
    LineSum,        // direct sum of O(d), degrees in `twists`
    DirectSum,      // kids
    Twist,          // kids[0] twisted by `shift`
    Dual,           // kids[0]^*
    Tensor,         // kids[0] (x) kids[1]
    SymPowLineSum,  // Sym^power of a line sum with degrees `twists`
    WedgePowLineSum,// Wedge^power of same
    QBundle,        // weighted quotient bundle, rank n
    SymQ,           // Sym^power of QBundle
    WedgeQ,         // Wedge^power of QBundle
    FBundle,        // weighted Tango bundle, rank n-1
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    std::vector<long> twists;
    long shift = 0;
    long power = 0;
    TangoParams params; // meaningful for QBundle / SymQ / FBundle only
    std::vector<ExprPtr> kids;
};

// Builders.
ExprPtr line(int n, long d);
ExprPtr line_sum(int n, std::vector<long> degrees);
ExprPtr direct_sum(std::vector<ExprPtr> kids);
ExprPtr twist(ExprPtr e, long m);
ExprPtr dual(ExprPtr e);
ExprPtr tensor(ExprPtr a, ExprPtr b);
ExprPtr sym_pow_line_sum(int n, long q, std::vector<long> degrees);
ExprPtr wedge_pow_line_sum(int n, long q, std::vector<long> degrees);
ExprPtr q_bundle(const TangoParams& p);
ExprPtr sym_q(long q, const TangoParams& p);
ExprPtr wedge_q(long q, const TangoParams& p);
ExprPtr f_bundle(const TangoParams& p);

int ambient_dim(const Expr& e);

// Middle-term twist lists of the two defining sequences.
std::vector<long> quotient_middle(const TangoParams& p); // n*alpha + i*(beta-alpha), i=0..n
std::vector<long> tango_middle(const TangoParams& p);    // 2n*alpha + k*(beta-alpha), k=1..2n-1

// First Chern classes of the two cokernel bundles, as plain twists.
long c1_quotient(const TangoParams& p); // sum of quotient_middle plus gamma
long c1_tango(const TangoParams& p);    // sum of tango_middle minus sum of quotient_middle

struct ChernData {
    Int rank;
    std::vector<Int> chern; // c_0..c_n in the truncated ring Z[h]/(h^{n+1})
    bool full = true;       // false: only c_1 is meaningful beyond degree 0
    const Int& c1() const { return chern.at(1); }
};

Int rank_of(const ExprPtr& e);
ChernData chern_of(const ExprPtr& e);
Rat slope_of(const ExprPtr& e); // c1/rank; throws on rank 0

// Confluent normal form: duals and twists pushed onto atoms, tensors
// distributed over sums and absorbed into line sums, Sym/Wedge powers of
// line sums expanded, sums flattened and sorted. Idempotent.
ExprPtr normalize(const ExprPtr& e);

// Canonical key of a normalized expression; stable across runs, used for
// memoization and the persistent cache.
std::string key_of(const ExprPtr& e);
// Inverse of key_of on normalized expressions.
ExprPtr expr_from_key(const std::string& key);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CLI surface grammar (also accepts '+' for the sum and '@' for the tensor
// operator; '*' is the postfix dual):
//   expr   := term { ("⊕" | "+") term }
//   term   := factor { ("⊗" | "@") factor }
//   factor := atom { "*" | "(" int ")" }
//   atom   := "F" | "Q" | "O" "(" int ")" | "SymQ" "[" int "]" | "WedgeQ" "[" int "]"
//           | "Sym" "[" int "]" "{" ints "}" | "Wedge" "[" int "]" "{" ints "}"
//           | "(" expr ")"
// Keywords are case-insensitive.
ExprPtr parse_expr(const std::string& text, const TangoParams& params);

// Human-readable rendering in the surface grammar.
std::string to_string(const ExprPtr& e);

} // namespace tango
