#pragma once

#include <functional>

#include "roadcov/numerics.hpp"
#include "roadcov/params.hpp"

namespace roadcov {

// Radially symmetric PGF argument: r in [0, inf) -> [0, 1], pure.
using RadialFunction = std::function<double(double)>;

// Nearest LOS SBS (1-D process on the user's own road, both directions).
double los_sbs_nearest_pdf(double x, const SystemParams& p);
double los_sbs_nearest_cdf(double x, const SystemParams& p);

// Nearest-macro law split by the LOS ball. The LOS branch is left
// unnormalized: it integrates to W1 = P(at least one macro inside the ball).
// The NLOS branch is the conditional law given an empty ball and integrates
// to one on [d_m, inf).
struct MacroNearestLaw {
    double lambda_m = 0.0;
    double d_m = 0.0;

    double w1() const; // 1 - exp(-pi * lambda_m * d_m^2)
    double pdf_los(double x) const;
    double pdf_nlos(double x) const;
};

// Distance law of the nearest NLOS SBS: the Cox process of SBSs on all
// roads other than the user's own. Void probability over a ball of radius x
// averages each crossing line's empty-chord probability over the line
// distance, giving exp(-2 pi lambda_r (x - A2(x))) with
//   A2(x) = Int_0^x exp(-2 lambda_s sqrt(x^2 - r^2)) dr.
// The pdf needs the second inner integral
//   S(x) = Int_0^x exp(-2 lambda_s sqrt(x^2 - r^2)) / sqrt(x^2 - r^2) dr,
// whose integrable endpoint singularity the power-series route absorbs
// analytically. Both integrals switch to the sin-substitution quadrature
// once 2*lambda_s*x is large enough to make the alternating series cancel
// badly.
struct NlosNearestLaw {
    double lambda_r = 0.0;
    double lambda_s = 0.0;
    double series_arg_limit = 25.0; // use quadrature above this value of 2*lambda_s*x

    // Terms needed for ~1e-10 truncation: the alternating terms peak near
    // k = c*x, so the count scales with the argument.
    static int terms_for(double cx) { return 40 + static_cast<int>(3.0 * cx); }

    double chord_void_integral(double x) const;    // A2(x)
    double singular_kernel_integral(double x) const; // S(x)
    double void_probability(double x) const;
    double cdf(double x) const;
    double pdf(double x) const;

    // The closed form as printed ((x + A2) exponent, single lambda_s factor);
    // kept for the documented comparison against the derived pdf above.
    double pdf_printed(double x) const;
};

inline NlosNearestLaw nlos_nearest_law(const SystemParams& p) {
    return {p.lambda_r, p.lambda_s};
}

// Radius beyond which 1 - nu(r) has decayed to noise; used to place the
// fixed quadrature nodes of the PGF integrals. Probed geometrically when no
// hint is supplied.
double deficit_scale(const RadialFunction& nu, double hint);

// PGFL of the road-deployed SBS Cox process for a radial argument:
//   exp(-2 pi lambda_r Int_0^inf [1 - exp(-2 lambda_s Int (1 - nu) dt)] dr).
// cox_pgf_excluded evaluates the same expectation with the points inside
// B(0, exclusion) dropped (their factor forced to one); lines crossing the
// exclusion disk still contribute their outer segments. Inner integrals use
// fixed mapped nodes so the result varies smoothly with nu's parameters.
double cox_pgf(const RadialFunction& nu, const SystemParams& p,
               const QuadratureSpec& spec = {}, double scale_hint = 0.0);
double cox_pgf_excluded(const RadialFunction& nu, double exclusion,
                        const SystemParams& p, const QuadratureSpec& spec = {},
                        double scale_hint = 0.0);

// PGFL of a 1-D SBS process on a uniformly oriented line through a point at
// distance d from the origin, points inside B(0, exclusion) dropped.
double line_pgf(const RadialFunction& nu, double d, const SystemParams& p,
                const QuadratureSpec& spec = {}, double scale_hint = 0.0);
double line_pgf_excluded(const RadialFunction& nu, double d, double exclusion,
                         const SystemParams& p, const QuadratureSpec& spec = {},
                         double scale_hint = 0.0);

// Planar-PPP PGFL on an annulus: exp(-2 pi lambda Int_rmin^rmax (1-nu) u du).
// Pass r_max = infinity for an unbounded annulus.
double ppp_pgfl_annulus(const RadialFunction& nu, double lambda, double r_min,
                        double r_max, const QuadratureSpec& spec = {},
                        double scale_hint = 0.0);

} // namespace roadcov
