#include "roadcov/geometry.hpp"

#include <cmath>
#include <limits>

namespace roadcov {

namespace {

// Evaluation guard for PGF arguments: nu must stay in [0, 1].
double guarded(const RadialFunction& nu, double r) {
    const double v = nu(r);
    if (!(v >= -1e-12) || !(v <= 1.0 + 1e-9)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "PGF argument outside [0,1]: nu(%.6g) = %.6g", r, v);
        throw std::invalid_argument(buf);
    }
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

} // namespace

double los_sbs_nearest_pdf(double x, const SystemParams& p) {
    if (x < 0.0) return 0.0;
    return 2.0 * p.lambda_s * std::exp(-2.0 * p.lambda_s * x);
}

double los_sbs_nearest_cdf(double x, const SystemParams& p) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-2.0 * p.lambda_s * x);
}

double MacroNearestLaw::w1() const { return -std::expm1(-kPi * lambda_m * d_m * d_m); }

double MacroNearestLaw::pdf_los(double x) const {
    // Support [0, d_m); the closure value at d_m keeps quadrature smooth.
    if (x <= 0.0 || x > d_m) return 0.0;
    return 2.0 * kPi * lambda_m * x * std::exp(-kPi * lambda_m * x * x);
}

double MacroNearestLaw::pdf_nlos(double x) const {
    if (x < d_m) return 0.0;
    return 2.0 * kPi * lambda_m * x * std::exp(-kPi * lambda_m * (x * x - d_m * d_m));
}

double NlosNearestLaw::chord_void_integral(double x) const {
    const double c = 2.0 * lambda_s;
    if (x <= 0.0) return 0.0;
    if (c * x <= series_arg_limit)
        return exp_series_integral(c, x, terms_for(c * x), SqrtKernel::Plain).value;
    QuadratureSpec spec;
    spec.tail_tol = 1e-9;
    return exp_integral_by_substitution(c, x, SqrtKernel::Plain, spec);
}

double NlosNearestLaw::singular_kernel_integral(double x) const {
    const double c = 2.0 * lambda_s;
    if (x <= 0.0) return 0.0;
    if (c * x <= series_arg_limit)
        return exp_series_integral(c, x, terms_for(c * x), SqrtKernel::InverseSqrt).value;
    QuadratureSpec spec;
    spec.tail_tol = 1e-9;
    return exp_integral_by_substitution(c, x, SqrtKernel::InverseSqrt, spec);
}

double NlosNearestLaw::void_probability(double x) const {
    if (x <= 0.0) return 1.0;
    return std::exp(-2.0 * kPi * lambda_r * (x - chord_void_integral(x)));
}

double NlosNearestLaw::cdf(double x) const { return 1.0 - void_probability(x); }

double NlosNearestLaw::pdf(double x) const {
    if (x <= 0.0) return 0.0;
    const double s = singular_kernel_integral(x);
    return void_probability(x) * 2.0 * kPi * lambda_r * 2.0 * lambda_s * x * s;
}

double NlosNearestLaw::pdf_printed(double x) const {
    if (x <= 0.0) return 0.0;
    const double a2 = chord_void_integral(x);
    const double s = singular_kernel_integral(x);
    return 2.0 * kPi * lambda_r * std::exp(-2.0 * kPi * lambda_r * (x + a2)) *
           (lambda_s * x * s);
}

double deficit_scale(const RadialFunction& nu, double hint) {
    if (hint > 0.0) return hint;
    // Geometric scan for the last radius with a visible deficit.
    double scale = 1.0;
    for (double w = 1e-3; w <= 1e8; w *= 2.0) {
        if (1.0 - guarded(nu, w) > 1e-5) scale = w;
    }
    return scale;
}

double cox_pgf(const RadialFunction& nu, const SystemParams& p, const QuadratureSpec& spec,
               double scale_hint) {
    return cox_pgf_excluded(nu, 0.0, p, spec, scale_hint);
}

double cox_pgf_excluded(const RadialFunction& nu, double exclusion, const SystemParams& p,
                        const QuadratureSpec& spec, double scale_hint) {
    (void)spec;
    const double scale = std::fmax(deficit_scale(nu, scale_hint), exclusion) + 1e-3;

    auto line_deficit = [&](double r) {
        // Int over the half-chord of 1 - nu(sqrt(r^2 + t^2)), points closer
        // than the exclusion radius skipped.
        const double t0 = exclusion > r ? std::sqrt(exclusion * exclusion - r * r) : 0.0;
        const double inner_val = integrate_tail_mapped(
            [&](double t) { return 1.0 - guarded(nu, std::hypot(r, t)); }, t0, scale, 64);
        return 1.0 - std::exp(-2.0 * p.lambda_s * inner_val);
    };

    const double integral = integrate_tail_mapped(line_deficit, 0.0, scale, 96);
    return std::exp(-2.0 * kPi * p.lambda_r * integral);
}

double line_pgf(const RadialFunction& nu, double d, const SystemParams& p,
                const QuadratureSpec& spec, double scale_hint) {
    return line_pgf_excluded(nu, d, 0.0, p, spec, scale_hint);
}

double line_pgf_excluded(const RadialFunction& nu, double d, double exclusion,
                         const SystemParams& p, const QuadratureSpec& spec, double scale_hint) {
    (void)spec;
    const double scale = std::fmax(deficit_scale(nu, scale_hint), d + exclusion) + 1e-3;

    auto ray_factor = [&](double angle) {
        // Distance from the origin of the point at line parameter t.
        const double cos_a = std::cos(angle);
        auto w = [&](double t) { return std::sqrt(d * d + t * t + 2.0 * t * d * cos_a); };
        // Points with w(t) < exclusion contribute factor one; solve the
        // quadratic (t + d cos)^2 < e^2 - d^2 sin^2 for the skipped window.
        double t_lo = 0.0, t_hi = 0.0;
        const double sin2 = std::fmax(0.0, 1.0 - cos_a * cos_a);
        const double disc = exclusion * exclusion - d * d * sin2;
        if (exclusion > 0.0 && disc > 0.0) {
            const double q = std::sqrt(disc);
            t_lo = std::fmax(0.0, -d * cos_a - q);
            t_hi = std::fmax(0.0, -d * cos_a + q);
        }
        double deficit = 0.0;
        if (t_lo > 0.0) {
            QuadratureSpec fixed;
            fixed.rule = QuadratureRule::CompositeNewtonCotes;
            fixed.panels = 24;
            deficit +=
                integrate([&](double t) { return 1.0 - guarded(nu, w(t)); }, 0.0, t_lo, fixed);
        }
        deficit += integrate_tail_mapped([&](double t) { return 1.0 - guarded(nu, w(t)); },
                                         t_hi, scale, 64);
        return std::exp(-2.0 * p.lambda_s * deficit);
    };

    if (d == 0.0) return ray_factor(kPi / 2.0);
    // Angle average over [0, pi]; the two half-turns are mirror images.
    QuadratureSpec angles;
    angles.rule = QuadratureRule::CompositeNewtonCotes;
    angles.panels = 48;
    return integrate(ray_factor, 0.0, kPi, angles) / kPi;
}

double ppp_pgfl_annulus(const RadialFunction& nu, double lambda, double r_min, double r_max,
                        const QuadratureSpec& spec, double scale_hint) {
    (void)spec;
    if (!(r_min >= 0.0) || !(r_max >= r_min))
        throw std::invalid_argument("ppp_pgfl_annulus: need 0 <= r_min <= r_max");
    if (lambda <= 0.0 || r_min == r_max) return 1.0;
    auto deficit = [&](double u) { return (1.0 - guarded(nu, u)) * u; };
    double integral = 0.0;
    if (std::isfinite(r_max)) {
        QuadratureSpec fixed;
        fixed.rule = QuadratureRule::CompositeNewtonCotes;
        fixed.panels = 96;
        integral = integrate(deficit, r_min, r_max, fixed);
    } else {
        const double scale = std::fmax(deficit_scale(nu, scale_hint), r_min) + 1e-3;
        integral = integrate_tail_mapped(deficit, r_min, scale, 96);
    }
    return std::exp(-2.0 * kPi * lambda * integral);
}

} // namespace roadcov
