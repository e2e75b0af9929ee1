#pragma once

#include "tango/expr.hpp"
#include "tango/linebundle.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tango {

// Dimension-chasing engine. Resolves supported expressions to cohomology
// tables by opening the registered short exact sequences and propagating
// dimensions through the induced long exact sequences, with the Euler
// characteristic (computed structurally, never from the table) as a
// permanent cross-check.
//
// Results are memoized per canonical expression key; the memo can be
// persisted to JSON and reloaded, with every reloaded entry re-verified
// against a freshly computed Euler characteristic.
class Engine {
public:
    CohomTable cohomology(const ExprPtr& e, long m = 0);
    Int euler(const ExprPtr& e, long m = 0);

    // Table of e^* (m), for e a line sum, Q, or F.
    CohomTable dual_table(const ExprPtr& e, long m = 0);

    // Kernel-side chase of the dualized defining sequence (the sequence
    // route for duals). Sound but may return intervals where the Serre
    // route is exact; exposed for consistency testing.
    CohomTable dual_table_via_sequence(const ExprPtr& e, long m = 0);

    // Chases an exact resolution T_last -> ... -> T_0 -> target -> 0 by
    // splitting into short exact sequences right to left. Every split is
    // validated by rank and Euler additivity.
    CohomTable chase_resolution(const std::vector<ExprPtr>& terms, const Int& target_rank,
                                const Int& target_euler, int n);

    // Table of (Wedge^q F)(t), via the Koszul-type resolution of the
    // defining sequence of F.
    CohomTable wedge_f_table(const TangoParams& params, long q, long t);

    // Table of (Sym^2 F)(t), via the Koszul-type resolution
    // 0 -> Wedge^2 K -> K (x) E -> Sym^2 E -> Sym^2 (F(gamma)) -> 0
    // with K = Q(-gamma) and E the middle line sum of F.
    CohomTable sym2_f_table(const TangoParams& params, long t);

    // Cache persistence. load_cache returns the number of entries kept;
    // entries failing re-verification are dropped.
    std::string cache_to_json() const;
    size_t load_cache_json(const std::string& text);
    size_t cache_size() const { return memo_.size(); }
    void clear_cache() { memo_.clear(); }

    // Generic solver for the long exact sequence of 0 -> A -> B -> C -> 0
    // with exactly one unknown column; exposed for property tests.
    // Position: 0 = A unknown, 2 = C unknown.
    static CohomTable solve_les(const CohomTable& x, const CohomTable& y, int unknown_pos,
                                const Int& unknown_euler);

    const std::map<std::string, CohomTable>& memo() const { return memo_; }

private:
    CohomTable eval(const ExprPtr& normalized);
    CohomTable eval_atom(const ExprPtr& core, long m);
    // Second, independent route for the same table where one exists
    // (exterior-power pairing into the determinant, composed with Serre
    // duality); intersected with the direct chase to sharpen intervals.
    std::optional<CohomTable> alt_table(const ExprPtr& core, long m);
    Int euler_normalized(const ExprPtr& normalized);

    std::map<std::string, CohomTable> memo_;
    // Keys currently being evaluated; a re-entrant request for one of these
    // falls back to the direct chase so the two-route sharpening cannot
    // recurse forever.
    std::set<std::string> in_flight_;
    int sharpen_depth_ = 0;
};

} // namespace tango
