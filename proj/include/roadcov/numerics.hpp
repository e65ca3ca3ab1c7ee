#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>

namespace roadcov {

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class QuadratureRule {
    CompositeNewtonCotes, // fixed panel count at the given order
    AdaptiveSubdivision,  // panel doubling until the estimate settles
};

struct QuadratureSpec {
    QuadratureRule rule = QuadratureRule::AdaptiveSubdivision;
    int order = 2;             // 1 = trapezoid, 2 = Simpson, 4 = Boole
    int panels = 16;           // initial panel count
    int max_panels = 1 << 12;  // cap for adaptive doubling
    double tail_tol = 1e-6;    // relative settling tolerance
    double abs_tol = 0.0;      // absolute settling floor
    double tail_cutoff = 1.0;  // initial truncation radius for improper integrals
    double max_cutoff = 1e9;   // hard radius cap
};

namespace detail {

inline void check_finite(double y, double x) {
    if (!std::isfinite(y)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "non-finite integrand value at x = %.17g", x);
        throw numeric_error(buf);
    }
}

template <class F>
double newton_cotes_pass(F&& f, double a, double b, int order, int panels) {
    const int sub = order == 1 ? 1 : (order == 2 ? 2 : 4);
    const long n = static_cast<long>(panels) * sub; // sub-intervals
    const double step = (b - a) / static_cast<double>(n);
    auto eval = [&](long i) {
        const double x = (i == n) ? b : a + step * static_cast<double>(i);
        const double y = f(x);
        check_finite(y, x);
        return y;
    };
    double sum = 0.0;
    if (order == 1) {
        sum = 0.5 * (eval(0) + eval(n));
        for (long i = 1; i < n; ++i) sum += eval(i);
        return sum * step;
    }
    if (order == 2) {
        sum = eval(0) + eval(n);
        for (long i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * eval(i);
        return sum * step / 3.0;
    }
    if (order == 4) {
        sum = 7.0 * (eval(0) + eval(n));
        for (long i = 1; i < n; ++i) {
            const long m = i % 4;
            sum += (m == 0 ? 14.0 : (m == 2 ? 12.0 : 32.0)) * eval(i);
        }
        return sum * step * 2.0 / 45.0;
    }
    throw std::invalid_argument("quadrature order must be 1, 2 or 4");
}

} // namespace detail

// Composite Newton-Cotes on [a, b]; the adaptive rule doubles the panel
// count until successive estimates agree to tail_tol (relative, with an
// absolute floor for integrals near zero).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (a == b) return 0.0;
    if (spec.rule == QuadratureRule::CompositeNewtonCotes)
        return detail::newton_cotes_pass(f, a, b, spec.order, spec.panels);

    int panels = spec.panels < 1 ? 1 : spec.panels;
    double prev = detail::newton_cotes_pass(f, a, b, spec.order, panels);
    while (panels < spec.max_panels) {
        panels *= 2;
        const double cur = detail::newton_cotes_pass(f, a, b, spec.order, panels);
        const double gate =
            std::fmax(spec.tail_tol * std::fmax(std::fabs(cur), 1e-300), spec.abs_tol);
        if (std::fabs(cur - prev) <= gate + 1e-300) return cur;
        prev = cur;
    }
    return prev;
}

struct ImproperResult {
    double value = 0.0;
    double cutoff = 0.0; // truncation radius actually used
};

// Integrates f over [a, inf) by doubling the truncation radius until the
// last doubling moves the estimate by less than tail_tol (relative).
// The caller guarantees integrability; a radius-cap overrun raises
// numeric_error carrying the last two estimates.
template <class F>
ImproperResult integrate_to_inf(F&& f, double a, const QuadratureSpec& spec = {}) {
    double r = std::fmax(spec.tail_cutoff, 1.0) + std::fabs(a);
    const double cap = std::fmax(spec.max_cutoff, 64.0 * r);
    QuadratureSpec seg = spec;
    double prev = integrate(f, a, a + r, seg);
    double cur = prev;
    while (r < cap) {
        // Tail segments only need accuracy relative to the running total.
        seg.abs_tol = std::fmax(spec.abs_tol, 0.25 * spec.tail_tol * std::fabs(prev));
        const double next_r = 2.0 * r;
        const double tail = integrate(f, a + r, a + next_r, seg);
        cur = prev + tail;
        const double scale = std::fmax(std::fabs(cur), 1e-300);
        if (std::fabs(cur - prev) <= spec.tail_tol * scale + 1e-300)
            return {cur, a + next_r};
        prev = cur;
        r = next_r;
    }
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "improper integral did not settle before the radius cap %.6g "
                  "(last two estimates %.17g and %.17g)",
                  r, prev, cur);
    throw numeric_error(buf);
}

// Fixed-node rule for Int_a^inf g(t) dt with a known decay scale: maps
// t = a + scale*u/(1-u) and applies composite Simpson on u. No adaptivity,
// so the result varies smoothly with parameters of g; intended for inner
// integrals of nested quadratures where adaptive noise would keep the outer
// rule from settling.
template <class F>
double integrate_tail_mapped(F&& g, double a, double scale, int panels = 64) {
    if (!(scale > 0.0)) throw std::invalid_argument("integrate_tail_mapped: scale must be > 0");
    QuadratureSpec fixed;
    fixed.rule = QuadratureRule::CompositeNewtonCotes;
    fixed.order = 2;
    fixed.panels = panels;
    const double u_max = 1.0 - 1e-6; // truncates beyond t ~ a + 1e6*scale
    return integrate(
        [&](double u) {
            const double one = 1.0 - u;
            const double t = a + scale * u / one;
            return g(t) * scale / (one * one);
        },
        0.0, u_max, fixed);
}

enum class SqrtKernel {
    Plain,      // integrand exp(-c*sqrt(x^2-r^2))
    InverseSqrt // integrand exp(-c*sqrt(x^2-r^2)) / sqrt(x^2-r^2)
};

struct SeriesResult {
    double value = 0.0;
    double truncation_bound = 0.0; // magnitude of the first dropped term
    bool converged = true;          // false if terms were not yet decreasing
};

// Term-wise integral over r in [0, x] of the exponential power series
// exp(-c*s) = sum_k (-c)^k s^k / k! with s = sqrt(x^2 - r^2). Each term
// integral of (x^2-r^2)^(m/2) is x^(m+1) * W(m+1) with W the half-period
// cosine-power recursion W(0) = pi/2, W(1) = 1, W(n) = (n-1)/n * W(n-2).
// Accumulated in long double: for c*x around 20 the alternating terms grow
// to ~1e7 before cancelling down to an O(1/(c*x)) result.
SeriesResult exp_series_integral(double c, double x, int n_terms, SqrtKernel kernel);

// Direct quadrature of the same integrals after the substitution
// r = x*sin(u), which removes the endpoint singularity:
//   Plain:       x * Int_0^{pi/2} exp(-c*x*cos(u)) * cos(u) du
//   InverseSqrt:     Int_0^{pi/2} exp(-c*x*cos(u)) du
double exp_integral_by_substitution(double c, double x, SqrtKernel kernel,
                                    const QuadratureSpec& spec = {});

} // namespace roadcov
