#pragma once

#include "tango/chase.hpp"
#include "tango/expr.hpp"
#include "tango/params.hpp"

#include <string>
#include <vector>

namespace tango {

enum class IdentityStatus { Holds, Fails, Indeterminate };

struct IdentityCheck {
    std::string name;
    IdentityStatus status = IdentityStatus::Indeterminate;
    std::string detail;
};

// Every dimension entering the deformation bookkeeping of the pair
// (Q, F): endomorphism cohomology, the Quot-scheme dimension dim Y of the
// component containing the defining quotient, the automorphism-orbit
// dimensions dim Sigma / dim Z, and the Kuranishi dimension h1(End F),
// together with the identity verdicts tying them together.
struct DeformationReport {
    TangoParams params;
    DimValue h0_end_q;
    DimValue h1_end_q;
    DimValue h1_end_q_second_route; // independent chase of End Q as a quotient
    DimValue h0_end_q_second_route;
    DimValue h0_qdual_tensor; // h0(Q*(gamma) (x) middle sum)
    DimValue h1_end_f;        // = Kuranishi dimension
    DimValue h1_fdual_tensor; // h1(F*(-gamma) (x) middle sum)
    DimValue h2_fdual_q;      // h2(F*(-2gamma) (x) Q)
    DimValue dim_y;
    DimValue dim_sigma;
    DimValue dim_z;
    DimValue kuranishi_dim;
    bool h1_vanishing = false; // h1(Q(-gamma - e_k)) = 0 for every middle degree
    std::vector<IdentityCheck> identities;

    bool all_identities_hold() const;
};

// h1(Q(-gamma - e_k)) = 0 for every degree e_k of the Tango middle term
// (the Ext^1 vanishing that splits off the middle sum).
bool h1_twisted_q_vanishing(Engine& engine, const TangoParams& params);

// dim Y = h1(End Q) + h0(Q*(gamma) (x) middle sum) - h0(End Q).
DimValue quot_dimension(Engine& engine, const TangoParams& params);

// dim Sigma = h0(F*(-gamma) (x) middle sum).
DimValue sigma_dimension(Engine& engine, const TangoParams& params);

// Kuranishi dimension h1(End F).
DimValue kuranishi_dimension(Engine& engine, const TangoParams& params);

// Chase of 0 -> Q*(-gamma) -> (+) Q*(d_i) -> End Q -> 0, the defining
// sequence of Q tensored with Q*; the independent second route to End Q
// (may be an interval).
CohomTable end_q_second_route(Engine& engine, const TangoParams& params);

DeformationReport smoothness_report(Engine& engine, const TangoParams& params);

std::string deformation_report_to_json(const DeformationReport& report);

} // namespace tango
