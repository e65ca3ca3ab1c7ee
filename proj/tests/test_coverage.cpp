#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "roadcov/coverage.hpp"
#include "roadcov/simulator.hpp"
#include "support.hpp"

using namespace roadcov;

namespace {

// Parameter set where all four tier/visibility classes carry visible mass.
SystemParams mixed_params(double g0_db) {
    SystemParams p = default_params();
    p.lambda_s = 1e-3;
    p.lambda_r = 2e-3;
    p.lambda_m = 4e-5;
    p.d_m = 30.0;
    p.alpha[ClassId::SmallNlos] = 2.8;
    p.g0 = db_to_linear(g0_db);
    return p;
}

} // namespace

// ---------------------------------------------------------------- spillover

TEST_CASE("spillover geometry roots") {
    SystemParams p = default_params(); // h = 10 m, theta = 10 deg
    const auto g = spillover_geometry(p);
    CHECK(g.feasible);
    // Roots of tan(t/2) x^2 - h x + 2 h^2 tan(t/2) = 0.
    const double t = std::tan(deg_to_rad(5.0));
    const double disc = std::sqrt(1.0 - 8.0 * t * t);
    CHECK(g.d_hat == doctest::Approx(10.0 * (1.0 + disc) / (2.0 * t)).epsilon(1e-12));
    CHECK(g.d_star == doctest::Approx(std::fmax(10.0 * (1.0 - disc) / (2.0 * t), 20.0 * t)));
    CHECK(g.d_star <= g.d_hat);
    // d' grows toward the half-cell and stays nonnegative on the window.
    for (double x = g.d_star; x < g.d_hat; x += 5.0) {
        CHECK(g.d_prime(x) >= -1e-12);
        CHECK(g.d_prime(x) < 0.5 * x);
    }
}

TEST_CASE("spillover probability limits") {
    SystemParams p = default_params();

    SUBCASE("no outdoor users, no spillover") {
        p.lambda_ou = 1e-12;
        CHECK(spillover_probability(p).p_g < 1e-9);
    }
    SUBCASE("narrowing beams suppress spillover") {
        double prev = 1.0;
        for (double deg : {10.0, 5.0, 2.0, 1.0}) {
            p.theta = deg_to_rad(deg);
            const double pg = spillover_probability(p).p_g;
            CHECK(pg < prev);
            prev = pg;
        }
        CHECK(prev < 1e-4);
    }
    SUBCASE("nondecreasing in the user density, always a probability") {
        double prev = 0.0;
        for (double lam : {0.001, 0.01, 0.05, 0.2, 1.0}) {
            p.lambda_ou = lam;
            const double pg = spillover_probability(p).p_g;
            CHECK(pg >= prev);
            CHECK(pg >= 0.0);
            CHECK(pg <= 1.0);
            prev = pg;
        }
    }
}

TEST_CASE("wide beams fall back to the flagged extrapolation") {
    SystemParams p = default_params();
    p.theta = deg_to_rad(45.0); // tan(22.5 deg) > 1/(2 sqrt 2)
    const auto r = spillover_probability(p);
    CHECK_FALSE(r.geometry.feasible);
    CHECK(r.extrapolated);
    CHECK(r.p_g >= 0.0);
    CHECK(r.p_g <= 1.0);
}

TEST_CASE("spillover probability matches the geometric sampler") {
    struct Case {
        double h, theta_deg, lambda_s, lambda_ou;
    };
    for (const Case& c : {Case{10.0, 10.0, 0.01, 0.01}, Case{10.0, 10.0, 0.1, 0.1},
                          Case{6.0, 14.0, 0.05, 0.05}}) {
        SystemParams p = default_params();
        p.h = c.h;
        p.theta = deg_to_rad(c.theta_deg);
        p.lambda_s = c.lambda_s;
        p.lambda_ou = c.lambda_ou;
        const double analytic = spillover_probability(p).p_g;
        const auto mc = spillover_mc(p, 400000, 2024);
        CHECK(std::fabs(analytic - mc.value) < 3.0 * mc.std_error + 1e-5);
    }
}

// -------------------------------------------------------------- association

TEST_CASE("association probabilities normalize and stay in range") {
    Rng rng(7777);
    for (int i = 0; i < 100; ++i) {
        SystemParams p = default_params();
        p.lambda_s = std::pow(10.0, rng.uniform(-4.0, -0.7));
        p.lambda_r = std::pow(10.0, rng.uniform(-6.0, -2.7));
        p.lambda_m = std::pow(10.0, rng.uniform(-7.0, -4.3));
        p.d_m = rng.uniform(30.0, 500.0);
        const auto rep = tier_probabilities(p);
        CHECK(rep.p_ml + rep.p_mn + rep.p_sl + rep.p_sn == doctest::Approx(1.0).epsilon(1e-6));
        for (double v : {rep.p_ml, rep.p_mn, rep.p_sl, rep.p_sn}) {
            CHECK(v >= -1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
        double total = 0.0;
        for (std::size_t k = 0; k < kNumClasses; ++k)
            total += rep.p_tvr[static_cast<ClassId>(k)];
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("complement and direct NLOS association integrals agree") {
    const SystemParams p = mixed_params(10.0);
    const auto rep = tier_probabilities(p);
    CHECK(p_sn_direct(p) == doctest::Approx(rep.p_sn).epsilon(2e-3));
}

TEST_CASE("vanishing macro density removes the macro classes") {
    SystemParams p = default_params();
    p.lambda_m = 1e-30;
    const auto rep = tier_probabilities(p);
    CHECK(rep.p_ml < 1e-9);
    CHECK(rep.p_mn < 1e-9);
    CHECK(rep.p_sl + rep.p_sn == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("degenerate LOS ball reduces to the classic comparison") {
    SystemParams p = default_params();
    p.p_tx_macro = p.p_tx_small;
    p.d_m = 1e7; // every macro is LOS
    for (std::size_t i = 0; i < kNumClasses; ++i) p.alpha[static_cast<ClassId>(i)] = 2.0001;
    p.alpha[ClassId::SmallNlos] = 2.8;
    p.alpha[ClassId::MacroNlos] = 2.8;
    const auto rep = tier_probabilities(p);
    CHECK(rep.p_mn < 1e-9);
    CHECK(rep.p_ml + rep.p_sl + rep.p_sn == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("association probabilities match simulated frequencies") {
    SUBCASE("mixed regime") {
        const SystemParams p = mixed_params(10.0);
        const auto rep = tier_probabilities(p);
        const auto freq = association_frequencies(p, SimOptions{}, 20000, 909);
        CHECK(std::fabs(rep.p_ml - freq.freq[ClassId::MacroLos].value) < 0.02);
        CHECK(std::fabs(rep.p_mn - freq.freq[ClassId::MacroNlos].value) < 0.02);
        CHECK(std::fabs(rep.p_sl - freq.freq[ClassId::SmallLosMu].value) < 0.02);
        CHECK(std::fabs(rep.p_sn - freq.freq[ClassId::SmallNlos].value) < 0.02);
    }
    SUBCASE("road-density sweep points") {
        for (double lr : {1e-5, 5e-5}) {
            for (double ls : {1e-3, 1e-2, 1e-1}) {
                SystemParams p = default_params();
                p.lambda_r = lr;
                p.lambda_s = ls;
                const auto rep = tier_probabilities(p);
                const auto freq = association_frequencies(p, SimOptions{}, 8000, 911);
                const double sl_sim = freq.freq[ClassId::SmallLosMu].value +
                                      freq.freq[ClassId::SmallLosMm].value;
                CHECK(std::fabs(rep.p_sl - sl_sim) < 0.02);
                CHECK(std::fabs(rep.p_sn - freq.freq[ClassId::SmallNlos].value) < 0.02);
            }
        }
    }
}

TEST_CASE("association trends along the sweep axes") {
    // P_SL nondecreasing in lambda_s at fixed lambda_r; P_SN nondecreasing
    // in lambda_r at fixed lambda_s.
    double prev_sl = -1.0;
    for (double ls : {1e-4, 1e-3, 1e-2, 1e-1}) {
        SystemParams p = default_params();
        p.lambda_s = ls;
        const auto rep = tier_probabilities(p);
        CHECK(rep.p_sl >= prev_sl - 1e-9);
        prev_sl = rep.p_sl;
    }
    double prev_sn = -1.0;
    for (double lr : {1e-6, 1e-5, 5e-5, 2e-4}) {
        SystemParams p = default_params();
        p.lambda_s = 1e-3;
        p.lambda_r = lr;
        const auto rep = tier_probabilities(p);
        CHECK(rep.p_sn >= prev_sn - 1e-9);
        prev_sn = rep.p_sn;
    }
}

TEST_CASE("printed factored association form vs the joint form, documented") {
    const SystemParams p = mixed_params(10.0);
    const auto joint = tier_probabilities(p);
    const auto printed = tier_probabilities_printed(p);
    MESSAGE("joint   : ml=", joint.p_ml, " mn=", joint.p_mn, " sl=", joint.p_sl,
            " sn=", joint.p_sn);
    MESSAGE("printed : ml=", printed.p_ml, " mn=", printed.p_mn, " sl=", printed.p_sl,
            " sn=", printed.p_sn);
    // The factored form treats comparisons sharing one candidate distance
    // as independent; deltas stay modest but are nonzero by construction.
    CHECK(std::fabs(joint.p_ml - printed.p_ml) < 0.15);
    CHECK(std::fabs(joint.p_mn - printed.p_mn) < 0.15);
    CHECK(std::fabs(joint.p_sl - printed.p_sl) < 0.15);
    for (double v : {printed.p_ml, printed.p_mn, printed.p_sl}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

// ----------------------------------------------------------- RAT selection

TEST_CASE("band-selection closed form") {
    SystemParams p = default_params();
    p.alpha[ClassId::SmallLosMu] = 3.0;

    SUBCASE("huge mm budget selects mm everywhere") {
        p.g0 = db_to_linear(90.0);
        CHECK(mmwave_selection_probability(p) == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("threshold chosen to give one half") {
        // 2 lambda_s c = ln 2  =>  P = 1/2; solve G0 for c.
        const double c = std::log(2.0) / (2.0 * p.lambda_s);
        const double a_mu = p.alpha[ClassId::SmallLosMu];
        const double a_mm = p.alpha[ClassId::SmallLosMm];
        p.g0 = p.k[ClassId::SmallLosMu] /
               (p.k[ClassId::SmallLosMm] * std::pow(c, a_mu - a_mm));
        const auto r = rat_selection(p);
        CHECK(r.threshold == doctest::Approx(c).epsilon(1e-9));
        CHECK(mmwave_selection_probability(p) == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("monotone in density and gain") {
        double prev = 2.0;
        for (double ls : {0.01, 0.05, 0.1, 0.3}) {
            p.lambda_s = ls;
            const double pm = mmwave_selection_probability(p);
            CHECK(pm <= prev);
            prev = pm;
        }
        p.lambda_s = 0.1;
        prev = -1.0;
        for (double g : {15.0, 20.0, 25.0, 30.0}) {
            p.g0 = db_to_linear(g);
            const double pm = mmwave_selection_probability(p);
            CHECK(pm >= prev);
            prev = pm;
        }
    }
}

TEST_CASE("equal LOS exponents degenerate the band choice") {
    SystemParams p = default_params(); // both LOS exponents are 2
    CHECK_THROWS_AS(mmwave_selection_probability(p), std::domain_error);
    const auto r = rat_selection(p);
    CHECK(r.degenerate);
    CHECK(r.mm_dominates); // 30 dB gain exceeds the coefficient gap
    p.g0 = db_to_linear(10.0);
    CHECK_FALSE(rat_selection(p).mm_dominates);
}

TEST_CASE("closed form matches simulated band selection") {
    SystemParams p = default_params();
    p.alpha[ClassId::SmallLosMu] = 3.0;
    p.lambda_m = 1e-12;
    p.lambda_r = 1e-7;
    SimOptions opt;
    opt.window_radius = 3000.0;
    for (double g0_db : {20.0, 26.0, 30.0}) {
        for (double ls : {0.01, 0.05, 0.2}) {
            p.g0 = db_to_linear(g0_db);
            p.lambda_s = ls;
            const double pm = mmwave_selection_probability(p);
            const auto freq = association_frequencies(p, opt, 6000, 606);
            const double sl = freq.freq[ClassId::SmallLosMu].value;
            const double mm = freq.freq[ClassId::SmallLosMm].value;
            CHECK(sl + mm > 0.999); // isolation: small-LOS always wins
            CHECK(std::fabs(pm - mm / (sl + mm)) < 0.02);
        }
    }
}

// ------------------------------------------------------ serving distances

TEST_CASE("serving-distance densities normalize") {
    const SystemParams p = mixed_params(10.0);
    const auto rep = tier_probabilities(p);
    QuadratureSpec spec;
    spec.tail_tol = 1e-7;
    struct Range {
        ClassId cls;
        double lo, hi;
    };
    for (const Range& r :
         {Range{ClassId::MacroLos, 0.0, p.d_m}, Range{ClassId::MacroNlos, p.d_m, 40000.0},
          Range{ClassId::SmallLosMu, 0.0, 40000.0}, Range{ClassId::SmallNlos, 0.0, 2000.0}}) {
        // Substituting x = hi*u^2 clears the fractional-power kink at zero.
        double mass = 0.0;
        if (r.lo == 0.0) {
            mass = integrate(
                [&](double u) {
                    const double x = r.hi * u * u;
                    return x <= 0.0 ? 0.0
                                    : serving_distance_pdf(p, r.cls, x, rep) * 2.0 * r.hi * u;
                },
                0.0, 1.0, spec);
        } else {
            mass = integrate(
                [&](double x) { return serving_distance_pdf(p, r.cls, x, rep); }, r.lo, r.hi,
                spec);
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("single-candidate degenerate case collapses the conditioning") {
    SystemParams p = default_params();
    p.lambda_m = 1e-30;
    p.lambda_r = 1e-30;
    const auto rep = tier_probabilities(p);
    CHECK(rep.p_sl == doctest::Approx(1.0).epsilon(1e-5));
    for (double x : {1.0, 5.0, 20.0}) {
        CHECK(serving_distance_pdf(p, ClassId::SmallLosMu, x, rep) ==
              doctest::Approx(los_sbs_nearest_pdf(x, p)).epsilon(1e-5));
    }
}

TEST_CASE("conditioning on a zero-probability class raises") {
    SystemParams p = default_params();
    auto rep = tier_probabilities(p);
    rep.p_ml = 0.0;
    CHECK_THROWS_AS(serving_distance_pdf(p, ClassId::MacroLos, 10.0, rep), std::domain_error);
    CHECK_THROWS_AS(sinr_coverage_mu(p, ClassId::MacroLos, 1.0, rep), std::domain_error);
}

TEST_CASE("serving-distance histograms per class") {
    const SystemParams p = mixed_params(10.0);
    const auto rep = tier_probabilities(p);
    SimOptions opt;
    struct Range {
        ClassId cls;
        double lo, hi;
    };
    for (const Range& r :
         {Range{ClassId::MacroLos, 0.0, p.d_m}, Range{ClassId::MacroNlos, p.d_m, 3000.0},
          Range{ClassId::SmallLosMu, 0.0, 3000.0}, Range{ClassId::SmallNlos, 0.0, 1500.0}}) {
        const auto samples =
            nearest_distance_samples(p, opt, NearestKind::ServingGiven, 40000, 808, r.cls);
        REQUIRE(samples.values.size() > 1500);
        testsupport::NumericCdf cdf(
            [&](double x) { return serving_distance_pdf(p, r.cls, x, rep); }, r.lo, r.hi, 400);
        const double ks = testsupport::ks_distance(samples.values, cdf);
        CHECK(ks < 0.03);
    }
}

// ------------------------------------------------------------ SINR coverage

TEST_CASE("coverage approaches one at vanishing threshold") {
    const SystemParams p = mixed_params(30.0);
    const auto rep = tier_probabilities(p);
    const double pg = spillover_probability(p).p_g;
    const double gamma = db_to_linear(-60.0);
    for (ClassId cls : {ClassId::MacroLos, ClassId::MacroNlos, ClassId::SmallLosMu,
                        ClassId::SmallNlos}) {
        CHECK(sinr_coverage_mu(p, cls, gamma, rep) == doctest::Approx(1.0).epsilon(2e-3));
    }
    CHECK(sinr_coverage_mm(p, gamma, rep, pg) == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("interference-free coverage: only noise and the own road remain") {
    SystemParams p = default_params();
    p.lambda_m = 1e-30;
    p.lambda_r = 1e-30;
    p.lambda_s = 1e-4; // long links: noise matters
    p.g0 = db_to_linear(10.0); // u-wave band wins
    const auto rep = tier_probabilities(p);
    for (double gamma_db : {-10.0, 0.0, 10.0}) {
        const double gamma = db_to_linear(gamma_db);
        const double cov = sinr_coverage_mu(p, ClassId::SmallLosMu, gamma, rep);
        // Independent oracle: with the macro and other-road processes gone,
        // the coverage is the Rayleigh noise term times the own-road
        // factor, whose exclusion integral is closed-form at exponent 2:
        //   Int_x^inf gamma x^2/(t^2+gamma x^2) dt
        //     = x sqrt(gamma) (pi/2 - atan(1/sqrt(gamma))).
        const double own_road = std::sqrt(gamma) * (kPi / 2.0 - std::atan(1.0 / std::sqrt(gamma)));
        QuadratureSpec spec;
        spec.tail_tol = 1e-9;
        spec.tail_cutoff = 1.0 / (2.0 * p.lambda_s);
        const double direct =
            integrate_to_inf(
                [&](double x) {
                    if (x <= 0.0) return 0.0;
                    return los_sbs_nearest_pdf(x, p) *
                           std::exp(-gamma * p.noise_mu /
                                    mean_rx_power(p, ClassId::SmallLosMu, x)) *
                           std::exp(-2.0 * p.lambda_s * x * own_road);
                },
                0.0, spec)
                .value;
        CHECK(cov == doctest::Approx(direct).epsilon(5e-3));
    }
}

TEST_CASE("mm coverage with no spillover is the pure fading tail") {
    SystemParams p = default_params();
    const auto rep = tier_probabilities(p);
    for (double gamma_db : {0.0, 20.0}) {
        const double gamma = db_to_linear(gamma_db);
        const double cov = sinr_coverage_mm(p, gamma, rep, 0.0);
        // Same expression with the interference factor forced to one.
        double factorial = 1.0;
        for (int i = 2; i <= p.nakagami_m; ++i) factorial *= i;
        const double eta = p.nakagami_m * std::pow(factorial, -1.0 / p.nakagami_m);
        QuadratureSpec spec;
        spec.tail_tol = 1e-9;
        spec.tail_cutoff = 1.0 / (2.0 * p.lambda_s);
        double expect = 0.0;
        double binom = 1.0;
        for (int n = 1; n <= p.nakagami_m; ++n) {
            binom = binom * (p.nakagami_m - n + 1) / n;
            const double term =
                integrate_to_inf(
                    [&](double x) {
                        if (x <= 0.0) return 0.0;
                        return serving_distance_pdf(p, ClassId::SmallLosMu, x, rep) *
                               std::exp(-n * eta * gamma * p.noise_mm /
                                        mean_rx_power(p, ClassId::SmallLosMm, x));
                    },
                    0.0, spec)
                    .value;
            expect += (n % 2 == 1 ? 1.0 : -1.0) * binom * term;
        }
        CHECK(cov == doctest::Approx(expect).epsilon(1e-3));
    }
}

TEST_CASE("unit-shape fading collapses to the exponential tail") {
    SystemParams p = default_params();
    p.nakagami_m = 1;
    const auto rep = tier_probabilities(p);
    const double gamma = db_to_linear(10.0);
    const double cov = sinr_coverage_mm(p, gamma, rep, 0.0);
    QuadratureSpec spec;
    spec.tail_tol = 1e-9;
    spec.tail_cutoff = 1.0 / (2.0 * p.lambda_s);
    const double rayleigh =
        integrate_to_inf(
            [&](double x) {
                if (x <= 0.0) return 0.0;
                return serving_distance_pdf(p, ClassId::SmallLosMu, x, rep) *
                       std::exp(-gamma * p.noise_mm / mean_rx_power(p, ClassId::SmallLosMm, x));
            },
            0.0, spec)
            .value;
    CHECK(cov == doctest::Approx(rayleigh).epsilon(1e-4));
}

TEST_CASE("per-class conditional coverage tracks the simulator (mixed regime)") {
    const SystemParams p = mixed_params(10.0);
    const auto rep = tier_probabilities(p);
    std::vector<double> gamma_db = {-10.0, 0.0, 10.0};
    std::vector<double> gamma;
    for (double g : gamma_db) gamma.push_back(db_to_linear(g));
    const auto sim = coverage_estimate(p, SimOptions{}, gamma, 20000, 303);
    for (ClassId cls : {ClassId::MacroLos, ClassId::MacroNlos, ClassId::SmallLosMu,
                        ClassId::SmallNlos}) {
        REQUIRE(sim.class_counts[cls] > 1000);
        for (std::size_t k = 0; k < gamma.size(); ++k) {
            const double ana = sinr_coverage_mu(p, cls, gamma[k], rep);
            CHECK(std::fabs(ana - sim.per_class[cls][k].value) < 0.05);
        }
    }
}

TEST_CASE("mm conditional coverage tracks the dominant-interferer simulator") {
    SystemParams p = default_params(); // fig-3 operating point
    p.lambda_ou = 0.1;
    const auto rep = tier_probabilities(p);
    const double pg = spillover_probability(p).p_g;
    std::vector<double> gamma_db = {-10.0, 0.0, 10.0, 20.0, 30.0};
    std::vector<double> gamma;
    for (double g : gamma_db) gamma.push_back(db_to_linear(g));
    const auto sim = coverage_estimate(p, SimOptions{}, gamma, 20000, 404);
    REQUIRE(sim.class_counts[ClassId::SmallLosMm] > 15000);
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const double ana = sinr_coverage_mm(p, gamma[k], rep, pg);
        const double dom = sim.mm_conditional[static_cast<int>(MmModel::DominantOnly)][k].value;
        CHECK(std::fabs(ana - dom) < 0.05);
        // Interference removal can only help.
        const double noise = sim.mm_conditional[static_cast<int>(MmModel::NoiseLimited)][k].value;
        const double full = sim.mm_conditional[static_cast<int>(MmModel::Full)][k].value;
        CHECK(noise >= full);
    }
}

TEST_CASE("more antenna gain never hurts mm coverage") {
    SystemParams p = default_params();
    const auto rep = tier_probabilities(p);
    const double pg = spillover_probability(p).p_g;
    for (double gamma_db : {-10.0, 0.0, 10.0, 25.0}) {
        const double gamma = db_to_linear(gamma_db);
        double prev = -1.0;
        for (double g0 : {20.0, 25.0, 30.0, 35.0}) {
            SystemParams q = p;
            q.g0 = db_to_linear(g0);
            const double cov = sinr_coverage_mm(q, gamma, rep, pg);
            CHECK(cov >= prev - 1e-9);
            prev = cov;
        }
    }
}

// --------------------------------------------------------- overall mixture

TEST_CASE("overall coverage is a convex mixture") {
    const SystemParams p = mixed_params(30.0);
    std::vector<double> gamma_db = {-15.0, -5.0, 5.0, 15.0};
    const auto curve = overall_coverage(p, gamma_db);
    for (std::size_t k = 0; k < gamma_db.size(); ++k) {
        double lo = 1.0, hi = 0.0, mix = 0.0;
        for (std::size_t i = 0; i < kNumClasses; ++i) {
            const ClassId id = static_cast<ClassId>(i);
            const double w = curve.association.p_tvr[id];
            if (w < 1e-6) continue;
            lo = std::fmin(lo, curve.per_class[id][k]);
            hi = std::fmax(hi, curve.per_class[id][k]);
            mix += w * curve.per_class[id][k];
        }
        CHECK(curve.overall[k] == doctest::Approx(mix).epsilon(1e-9));
        CHECK(curve.overall[k] >= lo - 1e-9);
        CHECK(curve.overall[k] <= hi + 1e-9);
    }
    // Nonincreasing in the threshold.
    for (std::size_t k = 1; k < gamma_db.size(); ++k) {
        CHECK(curve.overall[k] <= curve.overall[k - 1] + 1e-9);
        for (std::size_t i = 0; i < kNumClasses; ++i) {
            const ClassId id = static_cast<ClassId>(i);
            if (curve.association.p_tvr[id] < 1e-6) continue;
            CHECK(curve.per_class[id][k] <= curve.per_class[id][k - 1] + 1e-9);
        }
    }
}

TEST_CASE("mixture arithmetic with hand-built weights") {
    // Weights {0.25, 0.25, 0.25 split evenly over the two bands, 0.25} with
    // conditional coverages {1, 0, 1, 0, 1} mix to 0.625.
    const double weights[kNumClasses] = {0.25, 0.25, 0.125, 0.25, 0.125};
    const double conditionals[kNumClasses] = {1.0, 0.0, 1.0, 1.0, 0.0};
    double mix = 0.0;
    for (std::size_t i = 0; i < kNumClasses; ++i) mix += weights[i] * conditionals[i];
    CHECK(mix == doctest::Approx(0.625));
}
