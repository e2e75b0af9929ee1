#pragma once

#include "tango/numeric.hpp"
#include "tango/params.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <optional>
#include <string>
#include <vector>

namespace tango {

// Basis index of Lambda^2 S^n U: z_{p,q} = v_p ^ v_q with 0 <= p < q <= n,
// where v_p runs over the weight basis of S^n U. Grade k = p + q.
struct WedgeIndex {
    int p = 0;
    int q = 1;
    auto operator<=>(const WedgeIndex&) const = default;
    int grade() const { return p + q; }
};

// Sparse exact-rational vector in Lambda^2 S^n U.
struct GradedWedgeVector {
    int n = 3;
    std::map<WedgeIndex, Rat> coeffs; // zero entries never stored

    void set(WedgeIndex idx, Rat c);
    bool homogeneous_of_grade(int k) const;
    // The single grade carrying all support, if homogeneous; nullopt for 0.
    std::optional<int> grade() const;
};

// Candidate subspace W = direct sum of hyperplanes W_k = ker(phi_k) in the
// graded pieces E_k, one functional per grade k in 3..2n-3, coordinates in
// the z_{p,k-p} basis ordered by increasing p.
struct WSpace {
    int n = 3;
    std::map<int, std::vector<Rat>> functionals;
};

// Complement basis: one z_{p,q} pick per grade k = 1..2n-1.
struct DWBasis {
    int n = 3;
    std::map<int, WedgeIndex> picks;
};

struct WSpaceReport {
    bool dimension_ok = false;       // dim W == C(n+1,2) - (2n-1)
    bool hyperplanes_ok = false;     // every phi_k nonzero on every basis vector
    bool in_family = false;          // both of the above
    Int dim_w;                       // sum over grades of (dim E_k - 1)
    std::vector<std::string> failures;
};

struct NoDecomposableEvidence {
    bool structural_ok = false;   // each W_k free of decomposable elements
    bool randomized_ok = false;   // every sampled mixed vector has w^w != 0
    long trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> failures;
};

// Weight of the basis monomial v_p of S^n U: n*alpha + p*(beta - alpha).
long weight_of_monomial(const TangoParams& params, int p);

// dim E_k = floor((k-1)/2) - max(k-n, 0) + 1 for 1 <= k <= 2n-1.
int grade_dim(int n, int k);

// Basis of E_k: indices z_{p,k-p} with increasing p.
std::vector<WedgeIndex> grade_basis(int n, int k);

// Wedge square of a grade-k homogeneous vector with coefficients a_p on
// z_{p,k-p}: coefficient 2*a_p*a_q on the pairwise basis (p,q), p < q.
// Rejects mixed-grade input.
std::map<std::pair<WedgeIndex, WedgeIndex>, Rat>
wedge_square(const GradedWedgeVector& v);

// Wedge square of an arbitrary (mixed-grade) vector, expressed on the
// sorted 4-index basis of Lambda^4 S^n U.
std::map<std::array<int, 4>, Rat>
wedge_square_mixed(const GradedWedgeVector& v);

// True iff v has at most one nonzero coefficient; equivalent to
// wedge_square(v) == 0 for homogeneous v. Zero counts as decomposable.
bool is_decomposable_homogeneous(const GradedWedgeVector& v);

WSpaceReport wspace_validate(const WSpace& w);

NoDecomposableEvidence wspace_no_decomposable_check(const WSpace& w, long trials,
                                                    std::uint64_t seed);

// Complement picks: first basis vector in the unconstrained grades, the
// smallest-p basis vector elsewhere (legal because phi_k is nonzero on
// every basis vector of a validated W).
DWBasis build_dw(const WSpace& w);

// Highest-weight labels [2(n-1), 2(n-3), ...] of the irreducible pieces of
// Lambda^2 S^n of the standard 2-dimensional representation; dimensions
// (label+1) sum to C(n+1,2).
std::vector<long> clebsch_gordan_wedge2(int n);

// Seeded sampler of a valid WSpace (all functional coordinates nonzero).
WSpace sample_wspace(int n, std::uint64_t seed);

// JSON round-trip: {"n": int, "functionals": {"3": ["1/2", ...], ...}}
// with rationals as "p/q" (or plain integer) strings.
std::string wspace_to_json(const WSpace& w);
WSpace wspace_from_json(const std::string& text);

} // namespace tango
