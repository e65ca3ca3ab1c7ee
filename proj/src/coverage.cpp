#include "roadcov/coverage.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace roadcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Weight below which a class cannot move the overall mixture past the
// reporting precision; such classes are skipped (their curve reads zero).
constexpr double kNegligibleWeight = 1e-6;

ClassId mu_class(ClassId cls) { return cls == ClassId::SmallLosMm ? ClassId::SmallLosMu : cls; }

// Distance at which `other`'s mean u-wave power equals the serving class's
// mean power at x (the exclusion radius the association event imposes).
double equiv_radius(const SystemParams& p, ClassId serving, double x, ClassId other) {
    const double pk_serving = tx_power(p, serving) * p.k[serving];
    const double pk_other = tx_power(p, other) * p.k[other];
    return std::pow(pk_other / pk_serving, 1.0 / p.alpha[other]) *
           std::pow(x, p.alpha[serving] / p.alpha[other]);
}

struct Ctx {
    const SystemParams& p;
    NlosNearestLaw nlos;
    MacroNearestLaw macro;
    QuadratureSpec spec;

    explicit Ctx(const SystemParams& params, const QuadratureSpec& s)
        : p(params), nlos{params.lambda_r, params.lambda_s}, macro{params.lambda_m, params.d_m},
          spec(s) {}
};

// Fading-averaged per-interferer factor for Rayleigh links: the Laplace
// transform of a unit-mean exponential at s = gamma * P_i(u) / S.
RadialFunction interference_nu(const SystemParams& p, ClassId interferer, double gamma,
                               double serving_power) {
    return [&p, interferer, gamma, serving_power](double u) {
        if (u < 1e-9) return 0.0; // interferer on top of the user
        return 1.0 / (1.0 + gamma * mean_rx_power(p, interferer, u) / serving_power);
    };
}

struct MuFactors {
    double gamma = 0.0;
    bool active = false;
};

// Association-event density of serving class `cls` at distance x times,
// when `fac.active`, the conditional interference and noise factors of the
// u-wave SINR expression. With fac.active == false this is exactly the
// (unnormalized) serving-distance density whose integral is P_cls.
double class_point(const Ctx& ctx, ClassId cls, double x, const MuFactors& fac) {
    const SystemParams& p = ctx.p;
    if (x <= 0.0) return 0.0;
    const ClassId mu = mu_class(cls);

    // Base density of the nearest candidate of this class.
    double density = 0.0;
    switch (cls) {
        case ClassId::MacroLos:
            density = ctx.macro.pdf_los(x);
            break;
        case ClassId::MacroNlos:
            // Unconditional: nearest macro at x >= d_m and none closer.
            density = x < p.d_m ? 0.0
                                : 2.0 * kPi * p.lambda_m * x * std::exp(-kPi * p.lambda_m * x * x);
            break;
        case ClassId::SmallLosMu:
            density = 2.0 * p.lambda_s * std::exp(-2.0 * p.lambda_s * x);
            break;
        case ClassId::SmallNlos:
            density = ctx.nlos.pdf(x);
            break;
        case ClassId::SmallLosMm:
            throw std::invalid_argument("class_point: use the tier-level class");
    }
    if (density <= 0.0) return 0.0;

    // Exclusion radii the winning event imposes on the competitors.
    const double e_sl = cls == ClassId::SmallLosMu ? x : equiv_radius(p, mu, x, ClassId::SmallLosMu);
    const double e_sn = cls == ClassId::SmallNlos ? x : equiv_radius(p, mu, x, ClassId::SmallNlos);
    const bool macro_serving = cls == ClassId::MacroLos || cls == ClassId::MacroNlos;

    double value = density;
    if (cls != ClassId::SmallLosMu) value *= std::exp(-2.0 * p.lambda_s * e_sl);
    if (cls != ClassId::SmallNlos) value *= ctx.nlos.void_probability(e_sn);
    if (value <= 0.0) return 0.0;

    const double serving_power = mean_rx_power(p, mu, x);

    // Macro-candidate part. For small-cell service the losing-macro event
    // splits into {a LOS macro exists beyond its exclusion radius} and
    // {no macro in the ball, nearest NLOS macro beyond its radius}.
    double e_ml = 0.0, e_mn = 0.0;
    if (!macro_serving) {
        e_ml = std::fmin(equiv_radius(p, mu, x, ClassId::MacroLos), p.d_m);
        e_mn = std::fmax(equiv_radius(p, mu, x, ClassId::MacroNlos), p.d_m);
    }

    if (!fac.active) {
        if (!macro_serving) {
            const double void_ml = std::exp(-kPi * p.lambda_m * e_ml * e_ml);
            const double void_ball = std::exp(-kPi * p.lambda_m * p.d_m * p.d_m);
            const double void_mn = std::exp(-kPi * p.lambda_m * e_mn * e_mn);
            value *= std::fmax(void_ml - void_ball, 0.0) + void_mn;
        }
        return value;
    }

    // Conditional SINR factors given service from `cls` at distance x.
    const double gamma = fac.gamma;
    value *= std::exp(-gamma * p.noise_mu / serving_power);

    const auto nu_sl = interference_nu(p, ClassId::SmallLosMu, gamma, serving_power);
    const auto nu_sn = interference_nu(p, ClassId::SmallNlos, gamma, serving_power);
    const auto nu_ml = interference_nu(p, ClassId::MacroLos, gamma, serving_power);
    const auto nu_mn = interference_nu(p, ClassId::MacroNlos, gamma, serving_power);
    // Radius where an interferer of class c matches the serving power at x
    // times gamma: the transition scale of its 1 - nu deficit.
    auto nu_scale = [&](ClassId c) {
        return std::pow(gamma * tx_power(p, c) * p.k[c] / serving_power, 1.0 / p.alpha[c]);
    };

    // Own-road interferers beyond the exclusion (both directions).
    {
        const double deficit = integrate_tail_mapped(
            [&](double t) { return 1.0 - nu_sl(t); }, e_sl,
            std::fmax(nu_scale(ClassId::SmallLosMu), 1e-3), 64);
        value *= std::exp(-2.0 * p.lambda_s * deficit);
    }
    // Other-road SBS process beyond its exclusion.
    const double sn_scale = std::fmax(nu_scale(ClassId::SmallNlos), 1e-3);
    value *= cox_pgf_excluded(nu_sn, e_sn, p, ctx.spec, sn_scale);
    // For NLOS small-cell service the serving road contributes its own
    // 1-D process through the serving mast.
    if (cls == ClassId::SmallNlos) value *= line_pgf_excluded(nu_sn, x, x, p, ctx.spec, sn_scale);

    const double ml_scale = std::fmax(nu_scale(ClassId::MacroLos), 1e-3);
    const double mn_scale = std::fmax(nu_scale(ClassId::MacroNlos), 1e-3);
    if (macro_serving) {
        if (cls == ClassId::MacroLos) {
            value *= ppp_pgfl_annulus(nu_ml, p.lambda_m, x, p.d_m, ctx.spec, ml_scale);
            value *= ppp_pgfl_annulus(nu_mn, p.lambda_m, p.d_m, kInf, ctx.spec, mn_scale);
        } else {
            value *= ppp_pgfl_annulus(nu_mn, p.lambda_m, x, kInf, ctx.spec, mn_scale);
        }
    } else {
        const double void_ml = std::exp(-kPi * p.lambda_m * e_ml * e_ml);
        const double void_ball_given = std::exp(-kPi * p.lambda_m * (p.d_m * p.d_m - e_ml * e_ml));
        const double void_mn = std::exp(-kPi * p.lambda_m * e_mn * e_mn);
        const double g_los = ppp_pgfl_annulus(nu_ml, p.lambda_m, e_ml, p.d_m, ctx.spec, ml_scale);
        const double g_nlos_ball =
            ppp_pgfl_annulus(nu_mn, p.lambda_m, p.d_m, kInf, ctx.spec, mn_scale);
        const double g_nlos_far =
            ppp_pgfl_annulus(nu_mn, p.lambda_m, e_mn, kInf, ctx.spec, mn_scale);
        // LOS-macro-present branch: at least one macro in (e_ml, d_m); its
        // conditional product is (G - void)/(1 - void) when not void.
        const double present = std::fmax(g_los - void_ball_given, 0.0);
        value *= void_ml * present * g_nlos_ball + void_mn * g_nlos_far;
    }
    return value;
}

// Serving distances where the macro exclusion radius crosses the LOS ball;
// the min/max branch switches make the integrands only piecewise smooth, so
// the class integrals split there.
std::vector<double> bracket_kinks(const SystemParams& p, ClassId serving) {
    std::vector<double> kinks;
    for (ClassId m : {ClassId::MacroLos, ClassId::MacroNlos}) {
        const double pk_serving = tx_power(p, serving) * p.k[serving];
        const double pk_macro = tx_power(p, m) * p.k[m];
        const double x = std::pow(p.d_m, p.alpha[m] / p.alpha[serving]) *
                         std::pow(pk_serving / pk_macro, 1.0 / p.alpha[serving]);
        if (x > 0.0 && std::isfinite(x)) kinks.push_back(x);
    }
    std::sort(kinks.begin(), kinks.end());
    return kinks;
}

// Int_0^b f(x) dx with x = b*u^2: the exclusion radii carry fractional
// powers of x whose derivative singularity at zero this removes.
template <class F>
double integrate_from_zero(F&& f, double b, const QuadratureSpec& spec) {
    if (!(b > 0.0)) return 0.0;
    return integrate([&, b](double u) { return f(b * u * u) * 2.0 * b * u; }, 0.0, 1.0, spec);
}

// Integral of f over [lo, hi] split at the bracket kinks of `serving`.
template <class F>
double piecewise_integral(const Ctx& ctx, ClassId serving, F&& f, double lo, double hi,
                          double tail_cutoff) {
    QuadratureSpec spec = ctx.spec;
    spec.tail_cutoff = tail_cutoff;
    std::vector<double> cuts{lo};
    for (double k : bracket_kinks(ctx.p, serving))
        if (k > lo && k < hi) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        QuadratureSpec seg = spec;
        seg.abs_tol = std::fmax(seg.abs_tol, 0.25 * seg.tail_tol * std::fabs(total));
        total += cuts[i] == 0.0 ? integrate_from_zero(f, cuts[i + 1], seg)
                                : integrate(f, cuts[i], cuts[i + 1], seg);
    }
    const double last = cuts.back();
    QuadratureSpec seg = spec;
    seg.abs_tol = std::fmax(seg.abs_tol, 0.25 * seg.tail_tol * std::fabs(total));
    if (std::isfinite(hi)) {
        if (hi > last)
            total += last == 0.0 ? integrate_from_zero(f, hi, seg) : integrate(f, last, hi, seg);
    } else if (last == 0.0) {
        // Head chunk through the first decay scale, then the open tail.
        const double head = tail_cutoff;
        total += integrate_from_zero(f, head, seg);
        seg.abs_tol = std::fmax(seg.abs_tol, 0.25 * seg.tail_tol * std::fabs(total));
        total += integrate_to_inf(f, head, seg).value;
    } else {
        total += integrate_to_inf(f, last, seg).value;
    }
    return total;
}

double class_weight(const Ctx& ctx, ClassId cls, const MuFactors& fac, double lo = 0.0,
                    double hi = kInf) {
    const SystemParams& p = ctx.p;
    Ctx local = ctx;
    // With interference factors active the integrand carries the fixed-node
    // PGF rules' own ~1e-7 wobble; a tighter outer tolerance only stalls.
    if (fac.active) local.spec.tail_tol = std::fmax(local.spec.tail_tol, 1e-5);
    auto f = [&](double x) { return class_point(local, cls, x, fac); };
    QuadratureSpec spec = local.spec;
    switch (cls) {
        case ClassId::MacroLos: {
            const double a = std::fmax(lo, 0.0);
            const double b = std::fmin(hi, p.d_m);
            if (!(b > a)) return 0.0;
            return a == 0.0 ? integrate_from_zero(f, b, spec) : integrate(f, a, b, spec);
        }
        case ClassId::MacroNlos: {
            spec.tail_cutoff = p.d_m + 2.0 / std::sqrt(kPi * p.lambda_m);
            const double a = std::fmax(lo, p.d_m);
            if (std::isfinite(hi)) return hi > a ? integrate(f, a, hi, spec) : 0.0;
            return integrate_to_inf(f, a, spec).value;
        }
        case ClassId::SmallLosMu:
        case ClassId::SmallNlos:
            return piecewise_integral(local, cls, f, lo, hi, 1.0 / (2.0 * p.lambda_s));
        case ClassId::SmallLosMm:
            throw std::invalid_argument("class_weight: use the tier-level class");
    }
    return 0.0;
}

} // namespace

double SpilloverGeometry::d_prime(double x) const {
    return h * std::tan(std::atan(x / (2.0 * h)) - half_theta);
}

double SpilloverGeometry::beam_reach(double y) const {
    const double angle = std::fmin(half_theta + std::atan(y / h), kPi / 2.0 - 1e-9);
    return h * std::tan(angle);
}

SpilloverGeometry spillover_geometry(const SystemParams& p) {
    SpilloverGeometry g;
    g.h = p.h;
    g.half_theta = 0.5 * p.theta;
    const double t = std::tan(g.half_theta);
    const double disc = 1.0 - 8.0 * t * t;
    g.feasible = disc >= 0.0;
    if (g.feasible) {
        const double root = std::sqrt(disc);
        const double beta1 = p.h * (1.0 - root) / (2.0 * t);
        g.d_hat = p.h * (1.0 + root) / (2.0 * t);
        g.d_star = std::fmax(beta1, 2.0 * p.h * t);
    } else {
        g.d_star = 2.0 * p.h * t;
        g.d_hat = kInf;
    }
    return g;
}

SpilloverResult spillover_probability(const SystemParams& p, const QuadratureSpec& spec) {
    SpilloverResult result;
    result.geometry = spillover_geometry(p);
    const SpilloverGeometry& g = result.geometry;
    result.extrapolated = !g.feasible;

    auto inner = [&](double x) {
        const double dp = g.d_prime(x);
        const double half = 0.5 * x;
        if (!(half > dp)) return 0.0;
        // At least one outdoor user in the spill-producing stretch.
        const double user_factor = -std::expm1(-p.lambda_ou * (half - dp));
        const double kernel = integrate(
            [&](double y) {
                const double slack = x - g.beam_reach(y);
                return std::exp(-p.lambda_s * std::fmax(slack, 0.0));
            },
            dp, half, spec);
        return user_factor * kernel * 2.0 * p.lambda_s * p.lambda_s * std::exp(-p.lambda_s * x);
    };

    if (g.feasible) {
        result.p_g = integrate(inner, g.d_star, g.d_hat, spec);
    } else {
        QuadratureSpec outer = spec;
        outer.tail_cutoff = 2.0 / p.lambda_s;
        result.p_g = integrate_to_inf(inner, g.d_star, outer).value;
    }
    return result;
}

RatSelection rat_selection(const SystemParams& p) {
    RatSelection r;
    const double a_mu = p.alpha[ClassId::SmallLosMu];
    const double a_mm = p.alpha[ClassId::SmallLosMm];
    const double k_mu = p.k[ClassId::SmallLosMu];
    const double k_mm_gain = p.k[ClassId::SmallLosMm] * p.g0;
    if (a_mu == a_mm) {
        r.degenerate = true;
        r.mm_dominates = k_mm_gain > k_mu;
        r.prob_mm = r.mm_dominates ? 1.0 : 0.0;
        r.threshold = r.mm_dominates ? 0.0 : kInf;
        return r;
    }
    r.threshold = std::pow(k_mu / k_mm_gain, 1.0 / (a_mu - a_mm));
    r.mm_beyond = a_mu > a_mm;
    const double beyond = std::exp(-2.0 * p.lambda_s * r.threshold);
    r.prob_mm = r.mm_beyond ? beyond : 1.0 - beyond;
    return r;
}

double mmwave_selection_probability(const SystemParams& p) {
    const RatSelection r = rat_selection(p);
    if (r.degenerate) {
        throw std::domain_error(
            std::string("mm-wave selection is distance-independent with equal LOS exponents; ") +
            (r.mm_dominates ? "mm-wave dominates (G0*K_mm > K_mu)"
                            : "u-wave dominates (K_mu >= G0*K_mm)"));
    }
    return r.prob_mm;
}

AssociationReport tier_probabilities(const SystemParams& p, const QuadratureSpec& spec) {
    Ctx ctx(p, spec);
    const MuFactors none;
    AssociationReport rep;
    rep.p_ml = class_weight(ctx, ClassId::MacroLos, none);
    rep.p_mn = class_weight(ctx, ClassId::MacroNlos, none);
    rep.p_sl = class_weight(ctx, ClassId::SmallLosMu, none);
    rep.p_sn = 1.0 - rep.p_ml - rep.p_mn - rep.p_sl;
    if (rep.p_sn < 0.0 && rep.p_sn > -1e-9) rep.p_sn = 0.0;

    // Exact mm-wave share of small-LOS users: the serving-distance law
    // restricted to the region where the mm band wins.
    const RatSelection rat = rat_selection(p);
    if (rep.p_sl <= 0.0) {
        rep.p_m_given_sl = 0.0;
    } else if (rat.degenerate) {
        rep.p_m_given_sl = rat.mm_dominates ? 1.0 : 0.0;
    } else {
        const double lo = rat.mm_beyond ? rat.threshold : 0.0;
        const double hi = rat.mm_beyond ? kInf : rat.threshold;
        rep.p_m_given_sl = class_weight(ctx, ClassId::SmallLosMu, none, lo, hi) / rep.p_sl;
        if (rep.p_m_given_sl > 1.0) rep.p_m_given_sl = 1.0;
    }

    rep.p_tvr[ClassId::MacroLos] = rep.p_ml;
    rep.p_tvr[ClassId::MacroNlos] = rep.p_mn;
    rep.p_tvr[ClassId::SmallLosMu] = rep.p_sl * (1.0 - rep.p_m_given_sl);
    rep.p_tvr[ClassId::SmallLosMm] = rep.p_sl * rep.p_m_given_sl;
    rep.p_tvr[ClassId::SmallNlos] = rep.p_sn;
    return rep;
}

double p_sn_direct(const SystemParams& p, const QuadratureSpec& spec) {
    Ctx ctx(p, spec);
    return class_weight(ctx, ClassId::SmallNlos, MuFactors{});
}

AssociationReport tier_probabilities_printed(const SystemParams& p, const QuadratureSpec& spec) {
    Ctx ctx(p, spec);
    const double w1 = ctx.macro.w1();

    // Pairwise comparison probabilities, each an expectation over the
    // relevant nearest-distance law on its own.
    auto macro_beats = [&](ClassId macro_cls, ClassId small_cls) {
        auto w_term = [&](double x) {
            const double r = equiv_radius(p, small_cls, x, macro_cls);
            return -std::expm1(-kPi * p.lambda_m * r * r);
        };
        QuadratureSpec s = spec;
        s.tail_cutoff = 1.0 / (2.0 * p.lambda_s);
        if (small_cls == ClassId::SmallLosMu) {
            return integrate_to_inf(
                       [&](double x) {
                           return w_term(x) * 2.0 * p.lambda_s * std::exp(-2.0 * p.lambda_s * x);
                       },
                       0.0, s)
                .value;
        }
        return integrate_to_inf([&](double x) { return w_term(x) * ctx.nlos.pdf(x); }, 0.0, s)
            .value;
    };

    // W2: the LOS small cell beats the strongest NLOS one.
    QuadratureSpec s = spec;
    s.tail_cutoff = 1.0 / (2.0 * p.lambda_s);
    const double w2 = integrate_to_inf(
                          [&](double x) {
                              const double r = equiv_radius(p, ClassId::SmallNlos, x,
                                                            ClassId::SmallLosMu);
                              return -std::expm1(-2.0 * p.lambda_s * r) * ctx.nlos.pdf(x);
                          },
                          0.0, s)
                          .value;

    AssociationReport rep;
    rep.p_ml = w1 * macro_beats(ClassId::MacroLos, ClassId::SmallLosMu) *
               macro_beats(ClassId::MacroLos, ClassId::SmallNlos);
    rep.p_mn = (1.0 - w1) * macro_beats(ClassId::MacroNlos, ClassId::SmallLosMu) *
               macro_beats(ClassId::MacroNlos, ClassId::SmallNlos);
    rep.p_sl = w2 * (w1 * (1.0 - macro_beats(ClassId::MacroLos, ClassId::SmallLosMu)) +
                     (1.0 - w1) * (1.0 - macro_beats(ClassId::MacroNlos, ClassId::SmallLosMu)));
    rep.p_sn = 1.0 - rep.p_ml - rep.p_mn - rep.p_sl;

    const RatSelection rat = rat_selection(p);
    rep.p_m_given_sl = rat.prob_mm;
    rep.p_tvr[ClassId::MacroLos] = rep.p_ml;
    rep.p_tvr[ClassId::MacroNlos] = rep.p_mn;
    rep.p_tvr[ClassId::SmallLosMu] = rep.p_sl * (1.0 - rep.p_m_given_sl);
    rep.p_tvr[ClassId::SmallLosMm] = rep.p_sl * rep.p_m_given_sl;
    rep.p_tvr[ClassId::SmallNlos] = rep.p_sn;
    return rep;
}

double serving_distance_pdf(const SystemParams& p, ClassId cls, double x,
                            const AssociationReport& report, const QuadratureSpec& spec) {
    Ctx ctx(p, spec);
    const ClassId tier_cls = mu_class(cls);
    double weight = 0.0;
    switch (tier_cls) {
        case ClassId::MacroLos: weight = report.p_ml; break;
        case ClassId::MacroNlos: weight = report.p_mn; break;
        case ClassId::SmallLosMu: weight = report.p_sl; break;
        case ClassId::SmallNlos: weight = report.p_sn; break;
        default: break;
    }
    if (weight <= 0.0)
        throw std::domain_error("serving_distance_pdf: conditioning on a zero-probability class");
    return class_point(ctx, tier_cls, x, MuFactors{}) / weight;
}

double sinr_coverage_mu(const SystemParams& p, ClassId cls, double gamma,
                        const AssociationReport& report, const QuadratureSpec& spec) {
    if (!(gamma > 0.0)) throw std::invalid_argument("sinr_coverage_mu: gamma must be > 0");
    Ctx ctx(p, spec);
    const ClassId tier_cls = mu_class(cls);
    double weight = 0.0;
    switch (tier_cls) {
        case ClassId::MacroLos: weight = report.p_ml; break;
        case ClassId::MacroNlos: weight = report.p_mn; break;
        case ClassId::SmallLosMu: weight = report.p_sl; break;
        case ClassId::SmallNlos: weight = report.p_sn; break;
        default: break;
    }
    if (weight <= 0.0)
        throw std::domain_error("sinr_coverage_mu: conditioning on a zero-probability class");
    MuFactors fac;
    fac.gamma = gamma;
    fac.active = true;
    const double value = class_weight(ctx, tier_cls, fac) / weight;
    return value > 1.0 ? 1.0 : value;
}

double sinr_coverage_mm(const SystemParams& p, double gamma, const AssociationReport& report,
                        double p_g, const QuadratureSpec& spec) {
    if (!(gamma > 0.0)) throw std::invalid_argument("sinr_coverage_mm: gamma must be > 0");
    const int n0 = p.nakagami_m;
    Ctx ctx(p, spec);
    const RatSelection rat = rat_selection(p);
    const double mass = report.p_sl * report.p_m_given_sl;
    if (mass <= 1e-15)
        throw std::domain_error("sinr_coverage_mm: mm-wave share of the association is zero");
    double lo = 0.0, hi = kInf;
    if (!rat.degenerate) {
        lo = rat.mm_beyond ? rat.threshold : 0.0;
        hi = rat.mm_beyond ? kInf : rat.threshold;
    }

    // Exponential tail expansion of the unit-mean gamma fading of integer
    // shape n0: P(f > t) ~ sum_n (-1)^(n+1) C(n0,n) exp(-n eta t) with
    // eta = n0 * (n0!)^(-1/n0); exact for n0 = 1.
    double factorial = 1.0;
    for (int i = 2; i <= n0; ++i) factorial *= i;
    const double eta = n0 * std::pow(factorial, -1.0 / n0);

    const double alpha_mm = p.alpha[ClassId::SmallLosMm];

    double sum = 0.0;
    double binom = 1.0; // C(n0, n)
    for (int n = 1; n <= n0; ++n) {
        binom = binom * (n0 - n + 1) / n;
        const double s_scale = n * eta * gamma;

        auto integrand = [&](double x) {
            const double dens = class_point(ctx, ClassId::SmallLosMu, x, MuFactors{});
            if (dens <= 0.0) return 0.0;
            const double serving = mean_rx_power(p, ClassId::SmallLosMm, x);
            const double noise_term = std::exp(-s_scale * p.noise_mm / serving);
            // Neighbour on the far side of the user: first point of the
            // opposite ray beyond x, gated by the spillover probability.
            const double gated = integrate_tail_mapped(
                [&](double z) {
                    const double y = x + z;
                    const double si = s_scale * std::pow(x / y, alpha_mm);
                    return p.lambda_s * std::exp(-p.lambda_s * z) *
                           std::pow(1.0 + si / n0, -static_cast<double>(n0));
                },
                0.0, 1.0 / p.lambda_s, 64);
            const double interference_term = (1.0 - p_g) + p_g * gated;
            return dens * noise_term * interference_term;
        };

        const double term = piecewise_integral(ctx, ClassId::SmallLosMu, integrand, lo, hi,
                                               1.0 / (2.0 * ctx.p.lambda_s));
        sum += (n % 2 == 1 ? 1.0 : -1.0) * binom * term;
    }
    double value = sum / mass;
    if (value > 1.0) value = 1.0;
    if (value < 0.0) value = 0.0;
    return value;
}

CoverageCurve overall_coverage(const SystemParams& p, const std::vector<double>& gamma_db,
                               const QuadratureSpec& spec) {
    CoverageCurve curve;
    curve.gamma_db = gamma_db;
    curve.association = tier_probabilities(p, spec);
    curve.p_g = spillover_probability(p, spec).p_g;
    const std::size_t n = gamma_db.size();
    for (std::size_t i = 0; i < kNumClasses; ++i)
        curve.per_class[static_cast<ClassId>(i)].assign(n, 0.0);
    curve.overall.assign(n, 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        const double gamma = db_to_linear(gamma_db[k]);
        double total = 0.0;
        for (std::size_t i = 0; i < kNumClasses; ++i) {
            const ClassId id = static_cast<ClassId>(i);
            const double weight = curve.association.p_tvr[id];
            if (weight <= kNegligibleWeight) continue;
            const double cov = id == ClassId::SmallLosMm
                                   ? sinr_coverage_mm(p, gamma, curve.association, curve.p_g, spec)
                                   : sinr_coverage_mu(p, id, gamma, curve.association, spec);
            curve.per_class[id][k] = cov;
            total += weight * cov;
        }
        curve.overall[k] = total;
    }
    return curve;
}

} // namespace roadcov
