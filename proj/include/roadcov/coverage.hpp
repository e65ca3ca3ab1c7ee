#pragma once

#include <vector>

#include "roadcov/geometry.hpp"
#include "roadcov/params.hpp"

namespace roadcov {

// Feasibility window of the beam-spillover construction. Spillover onto the
// neighbouring cell with the worst-case served user requires the inter-mast
// distance to satisfy tan(theta/2)*x^2 - h*x + 2*h^2*tan(theta/2) <= 0,
// giving the root window below; real roots need tan(theta/2) <= 1/(2*sqrt(2)).
struct SpilloverGeometry {
    double d_star = 0.0; // lower inter-mast limit, max(lower root, 2h tan(theta/2))
    double d_hat = 0.0;  // upper root
    bool feasible = true;
    double h = 0.0;
    double half_theta = 0.0;

    // Serving-user position beyond which the beam spills into the
    // neighbouring cell, given inter-mast distance x.
    double d_prime(double x) const;
    // Ground reach of the beam's far edge for a served user at position y.
    double beam_reach(double y) const;
};

SpilloverGeometry spillover_geometry(const SystemParams& p);

struct SpilloverResult {
    double p_g = 0.0;
    SpilloverGeometry geometry;
    bool extrapolated = false; // true when evaluated outside the root window
};

// Probability that a user served in mm-wave lies in the spillover region of
// its neighbouring mast while that mast serves a cell-edge user of its own.
// Outside the feasible beamwidth range the integral is extended over
// [2h tan(theta/2), inf) with the spill reach clamped, and flagged.
SpilloverResult spillover_probability(const SystemParams& p, const QuadratureSpec& spec = {});

struct RatSelection {
    double prob_mm = 0.0;   // closed-form P(mm-wave | LOS small cell)
    double threshold = 0.0; // switch distance between the two bands
    bool degenerate = false; // equal LOS exponents: choice is distance-free
    bool mm_dominates = false; // degenerate case: G0*K_mm > K_mu
    bool mm_beyond = false;  // non-degenerate: mm-wave wins at large distance
};

RatSelection rat_selection(const SystemParams& p);

// Closed-form conditional mm-wave selection probability from the nearest
// own-road SBS law. Throws std::domain_error when the two LOS exponents
// coincide (the comparison is then distance-independent; rat_selection
// reports which band dominates).
double mmwave_selection_probability(const SystemParams& p);

struct AssociationReport {
    double p_ml = 0.0, p_mn = 0.0, p_sl = 0.0, p_sn = 0.0;
    double p_m_given_sl = 0.0; // exact conditional mm share of small-LOS users
    PerClass<double> p_tvr;    // five realizable classes; sums to one
};

// Exact tier selection probabilities: for each candidate class, the joint
// event {nearest candidate at x} * {every competitor's nearest point is
// beyond its power-equivalent radius}, integrated over x. P_SN closes the
// normalization. The factored closed form as printed is available through
// tier_probabilities_printed for the documented comparison.
AssociationReport tier_probabilities(const SystemParams& p, const QuadratureSpec& spec = {});
AssociationReport tier_probabilities_printed(const SystemParams& p,
                                             const QuadratureSpec& spec = {});

// Direct integral for P_SN (normally obtained by complement); test hook.
double p_sn_direct(const SystemParams& p, const QuadratureSpec& spec = {});

// Conditional serving-distance density given association with the
// tier/visibility class of `cls` (both small-LOS RATs share the SL law).
double serving_distance_pdf(const SystemParams& p, ClassId cls, double x,
                            const AssociationReport& report, const QuadratureSpec& spec = {});

// Conditional SINR coverage for a u-wave served class (gamma linear).
double sinr_coverage_mu(const SystemParams& p, ClassId cls, double gamma,
                        const AssociationReport& report, const QuadratureSpec& spec = {});

// Conditional SINR coverage for mm-wave service: exponential tail expansion
// of the integer-shape gamma fading, noise averaged over the serving
// distance, dominant-neighbour interference gated by the spillover
// probability.
double sinr_coverage_mm(const SystemParams& p, double gamma, const AssociationReport& report,
                        double p_g, const QuadratureSpec& spec = {});

struct CoverageCurve {
    std::vector<double> gamma_db;
    PerClass<std::vector<double>> per_class; // conditional coverage per class
    std::vector<double> overall;             // association-weighted mixture
    AssociationReport association;
    double p_g = 0.0;
};

CoverageCurve overall_coverage(const SystemParams& p, const std::vector<double>& gamma_db,
                               const QuadratureSpec& spec = {});

} // namespace roadcov
