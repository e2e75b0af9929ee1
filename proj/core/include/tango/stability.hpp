#pragma once

#include "tango/chase.hpp"
#include "tango/expr.hpp"
#include "tango/linebundle.hpp"
#include "tango/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tango {

enum class Verdict { Stable, NotStable, Unknown };

struct Certificate {
    std::string claim;
    std::string evidence;
};

struct StabilityVerdict {
    Verdict verdict = Verdict::Unknown;
    std::vector<Certificate> certificates;
};

struct ThresholdCheck {
    bool sufficient = false;        // gamma > 2n*alpha + (beta - alpha)
    bool necessary_context = false; // gamma > n*alpha
};

struct HoppeEntry {
    long q = 0;
    long norm_twist = 0;
    DimValue h0;
};

struct DestabilizeWitness {
    long norm_twist = 0;
    Int h0_f_twisted;      // > 0, the destabilizing sections
    Int h0_q_section_obst; // h0(Q(-2g+t)), verified 0
};

// Unique integer t with c1(Wedge^q F) + t*rank(Wedge^q F) in (-rank, 0].
long norm_twist(const TangoParams& params, long q);

ThresholdCheck threshold_check(const TangoParams& params);

// h0 of the normalized exterior powers for q = 1..q_max via the engine.
std::vector<HoppeEntry> hoppe_verify(Engine& engine, const TangoParams& params, long q_max);

// Instability certificate in the regime n*alpha < gamma <= 2n*alpha + (beta - alpha):
// a trivial line subbundle of F(t) at the q=1 normalization twist.
std::optional<DestabilizeWitness> destabilize_witness(Engine& engine,
                                                      const TangoParams& params);

// max{e | O(e) is a summand-degree sum of a q-subset of the middle list}
// = 2n*q*alpha + (beta - alpha)*q*(q+1)/2.
long max_line_sub_degree(const TangoParams& params, long q);

StabilityVerdict analyze_stability(Engine& engine, const TangoParams& params);

} // namespace tango
