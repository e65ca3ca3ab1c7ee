#include "roadcov/numerics.hpp"

#include "roadcov/units.hpp"

namespace roadcov {

SeriesResult exp_series_integral(double c, double x, int n_terms, SqrtKernel kernel) {
    if (c < 0.0) throw std::invalid_argument("exp_series_integral: c must be >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("exp_series_integral: x must be > 0");
    if (n_terms < 1) throw std::invalid_argument("exp_series_integral: n_terms must be >= 1");

    // Term k integrates (x^2-r^2)^((k-1)/2) (InverseSqrt kernel) or
    // (x^2-r^2)^(k/2) (Plain), giving x^(k+shift) * W(k+shift) with
    // shift = 0 or 1 and W(m) = Int_0^{pi/2} cos(u)^m du by the recursion
    // W(m) = (m-1)/m * W(m-2), W(0) = pi/2, W(1) = 1.
    const int shift = kernel == SqrtKernel::Plain ? 1 : 0;
    long double w_even = 1.570796326794896619231321691639751442L;
    long double w_odd = 1.0L;

    long double sum = 0.0L;
    long double term_coeff = 1.0L; // (-c)^k / k!
    const long double lx = x;
    long double x_pow = shift ? lx : 1.0L; // x^(k+shift)
    long double prev_abs = 0.0L;
    long double cur_abs = 0.0L;

    for (int k = 0; k < n_terms; ++k) {
        const int m = k + shift;
        long double& w = (m % 2 == 0) ? w_even : w_odd;
        if (m >= 2) w *= static_cast<long double>(m - 1) / static_cast<long double>(m);
        const long double term = term_coeff * x_pow * w;
        sum += term;
        prev_abs = cur_abs;
        cur_abs = fabsl(term);

        term_coeff *= -static_cast<long double>(c) / static_cast<long double>(k + 1);
        x_pow *= lx;
    }

    SeriesResult r;
    r.value = static_cast<double>(sum);
    // First dropped term, with the next Wallis factor bounded by pi/2.
    r.truncation_bound = static_cast<double>(fabsl(term_coeff * x_pow) * w_even);
    const bool tail_decreasing = n_terms < 2 || cur_abs <= prev_abs;
    r.converged = tail_decreasing && r.truncation_bound <= std::fabs(r.value) * 1e-9 + 1e-300;
    return r;
}

double exp_integral_by_substitution(double c, double x, SqrtKernel kernel,
                                    const QuadratureSpec& spec) {
    const double half_pi = kPi / 2.0;
    const double cx = c * x;
    // Peak sits at v = 0 after r = x*cos(v):
    //   InverseSqrt: Int_0^{pi/2} exp(-c*x*sin v) dv
    //   Plain:   x * Int_0^{pi/2} exp(-c*x*sin v) * sin v dv
    auto g = [&](double v) {
        const double e = std::exp(-cx * std::sin(v));
        return kernel == SqrtKernel::InverseSqrt ? e : x * e * std::sin(v);
    };
    if (cx <= 8.0) return integrate(g, 0.0, half_pi, spec);
    // Strongly peaked: everything beyond exponent 40 is negligible, so a
    // fixed high-order rule on the peak window is both fast and accurate.
    const double v_split = cx > 40.0 ? std::asin(40.0 / cx) : half_pi;
    QuadratureSpec fixed;
    fixed.rule = QuadratureRule::CompositeNewtonCotes;
    fixed.order = 4;
    fixed.panels = 256;
    return integrate(g, 0.0, v_split, fixed);
}

} // namespace roadcov
