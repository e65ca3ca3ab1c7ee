#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "roadcov/coverage.hpp"
#include "roadcov/simulator.hpp"

using namespace roadcov;

TEST_CASE("window radius default") {
    SystemParams p = default_params();
    CHECK(default_window_radius(p) == doctest::Approx(3000.0));
    p.lambda_m = 1e-8;
    CHECK(default_window_radius(p) == doctest::Approx(5.0 / std::sqrt(kPi * 1e-8)));
    p.lambda_m = 1e-6;
    p.d_m = 1000.0;
    CHECK(default_window_radius(p) == doctest::Approx(5000.0));
}

TEST_CASE("sampled deployment counts match their intensities") {
    SystemParams p = default_params();
    p.lambda_r = 1e-4; // enough roads to count
    const double radius = 3000.0;

    StreamingMeanVar lines, palm_sbs, mbs;
    for (long t = 0; t < 10000; ++t) {
        const auto real = sample_realization(p, radius, 42, t);
        lines.add(static_cast<double>(real.roads.size()));
        palm_sbs.add(static_cast<double>(real.palm.sbs_offsets.size()));
        mbs.add(static_cast<double>(real.mbs_distances.size()));
    }
    const auto le = lines.estimate();
    CHECK(std::fabs(le.value - 2.0 * kPi * p.lambda_r * radius) < 3.0 * le.std_error);
    const auto pe = palm_sbs.estimate();
    CHECK(std::fabs(pe.value - 2.0 * radius * p.lambda_s) < 3.0 * pe.std_error);
    const auto me = mbs.estimate();
    CHECK(std::fabs(me.value - p.lambda_m * kPi * radius * radius) < 3.0 * me.std_error);
}

TEST_CASE("mean SBS count per chord follows the chord length") {
    SystemParams p = default_params();
    p.lambda_r = 2e-4;
    const double radius = 2000.0;
    StreamingMeanVar ratio;
    for (long t = 0; t < 4000; ++t) {
        const auto real = sample_realization(p, radius, 7, t);
        for (const auto& line : real.roads) {
            const double half = std::sqrt(radius * radius - line.rho * line.rho);
            if (half < 100.0) continue;
            ratio.add(static_cast<double>(line.sbs_offsets.size()) / (2.0 * half));
        }
    }
    const auto e = ratio.estimate();
    CHECK(std::fabs(e.value - p.lambda_s) < 3.0 * e.std_error);
}

TEST_CASE("off-road SBS planar intensity") {
    // The stationary part of the SBS process (the palm road excluded) has
    // planar intensity pi * lambda_r * lambda_s.
    SystemParams p = default_params();
    const double radius = 3000.0;
    const double count_radius = 2000.0;
    StreamingMeanVar count;
    for (long t = 0; t < 20000; ++t) {
        const auto real = sample_realization(p, radius, 11, t);
        long n = 0;
        for (const auto& line : real.roads)
            for (double off : line.sbs_offsets)
                if (NetworkRealization::sbs_distance(line, off) < count_radius) ++n;
        count.add(static_cast<double>(n));
    }
    const auto e = count.estimate();
    const double expected = kPi * p.lambda_r * p.lambda_s * kPi * count_radius * count_radius;
    CHECK(std::fabs(e.value - expected) < 3.0 * e.std_error);
}

TEST_CASE("every SBS lies on its road") {
    SystemParams p = default_params();
    p.lambda_r = 5e-4;
    const auto real = sample_realization(p, 2000.0, 3, 0);
    for (const auto& line : real.roads) {
        const double nx = std::cos(line.angle), ny = std::sin(line.angle);
        const double fx = line.rho * nx, fy = line.rho * ny;
        for (double off : line.sbs_offsets) {
            const double px = fx - off * ny, py = fy + off * nx;
            // Distance from the point to the line equals rho.
            CHECK(std::fabs(px * nx + py * ny - line.rho) < 1e-9);
            CHECK(NetworkRealization::sbs_distance(line, off) ==
                  doctest::Approx(std::hypot(px, py)).epsilon(1e-12));
        }
    }
}

TEST_CASE("association picks constructed winners") {
    SystemParams p = default_params();
    NetworkRealization real;
    real.window_radius = 3000.0;

    SUBCASE("single own-road SBS and nothing else") {
        real.palm.sbs_offsets = {37.0};
        const auto a = associate(real, p);
        REQUIRE(a.has_value());
        CHECK((a->cls == ClassId::SmallLosMu || a->cls == ClassId::SmallLosMm));
        CHECK(a->distance == doctest::Approx(37.0));
    }

    SUBCASE("close macro beats far SBS") {
        real.palm.sbs_offsets = {2500.0};
        real.mbs_distances = {50.0};
        real.mbs_angles = {0.0};
        const auto a = associate(real, p);
        REQUIRE(a.has_value());
        CHECK(a->cls == ClassId::MacroLos);
        CHECK(a->distance == doctest::Approx(50.0));
    }

    SUBCASE("macro beyond the ball is NLOS") {
        real.mbs_distances = {500.0};
        real.mbs_angles = {0.0};
        const auto a = associate(real, p);
        REQUIRE(a.has_value());
        CHECK(a->cls == ClassId::MacroNlos);
    }

    SUBCASE("empty window reports no association") {
        CHECK_FALSE(associate(real, p).has_value());
    }
}

TEST_CASE("RAT choice follows the mean-power comparison") {
    SystemParams p = default_params();
    NetworkRealization real;
    real.window_radius = 3000.0;
    real.palm.sbs_offsets = {10.0};
    // Default G0 = 30 dB exceeds the K ratio: mm-wave wins.
    auto a = associate(real, p);
    REQUIRE(a.has_value());
    CHECK(a->cls == ClassId::SmallLosMm);
    // Down at 10 dB the u-wave band wins.
    p.g0 = db_to_linear(10.0);
    a = associate(real, p);
    REQUIRE(a.has_value());
    CHECK(a->cls == ClassId::SmallLosMu);
}

TEST_CASE("noise-limited SINR with frozen fading is exact") {
    SystemParams p = default_params();
    SimOptions opt;
    opt.frozen_fading = true;
    const auto outcomes = run_trials(p, opt, 50, 17);
    for (const auto& o : outcomes) {
        if (o.cls != ClassId::SmallLosMm) continue;
        const double expected = mean_rx_power(p, ClassId::SmallLosMm, o.distance) / p.noise_mm;
        CHECK(o.sinr_mm[static_cast<int>(MmModel::NoiseLimited)] ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("interference ordering per trial") {
    SystemParams p = default_params();
    p.lambda_ou = 0.1; // busy roads: spillover happens
    SimOptions opt;
    const auto outcomes = run_trials(p, opt, 2000, 23);
    long spills = 0;
    for (const auto& o : outcomes) {
        if (o.cls != ClassId::SmallLosMm) continue;
        const double full = o.sinr_mm[0], dom = o.sinr_mm[1], noise = o.sinr_mm[2];
        CHECK(noise >= full);
        CHECK(noise >= dom);
        CHECK(dom >= full); // dominant keeps a subset of the interferers
        CHECK(full > 0.0);
        CHECK(std::isfinite(full));
        if (o.spillover) ++spills;
    }
    CHECK(spills > 0);
}

TEST_CASE("same seed reproduces outcomes bit for bit across thread counts") {
    SystemParams p = default_params();
    SimOptions opt1;
    opt1.threads = 1;
    SimOptions opt4;
    opt4.threads = 4;
    const auto a = run_trials(p, opt1, 600, 99);
    const auto b = run_trials(p, opt4, 600, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].cls == b[i].cls);
        CHECK(a[i].distance == b[i].distance);
        CHECK(a[i].sinr_mu == b[i].sinr_mu);
        CHECK(a[i].sinr_mm[0] == b[i].sinr_mm[0]);
        CHECK(a[i].sinr_mm[1] == b[i].sinr_mm[1]);
        CHECK(a[i].sinr_mm[2] == b[i].sinr_mm[2]);
    }
    // And a different seed genuinely differs.
    const auto c = run_trials(p, opt1, 600, 100);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].distance != c[i].distance) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("doubling the window leaves estimates inside their noise band") {
    SystemParams p = default_params();
    std::vector<double> gamma = {db_to_linear(0.0), db_to_linear(10.0)};
    SimOptions base;
    base.window_radius = 3000.0;
    SimOptions doubled;
    doubled.window_radius = 6000.0;
    const auto a = coverage_estimate(p, base, gamma, 5000, 55);
    const auto b = coverage_estimate(p, doubled, gamma, 5000, 55);
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const double se =
            std::hypot(a.overall[0][k].std_error, b.overall[0][k].std_error) + 1e-4;
        CHECK(std::fabs(a.overall[0][k].value - b.overall[0][k].value) < 3.0 * se);
    }
}

TEST_CASE("PGF product at unity is exactly one with zero spread") {
    SystemParams p = default_params();
    auto one = [](double) { return 1.0; };
    const auto cox = pgf_mean_cox(one, p, 2000.0, 500, 9);
    CHECK(cox.value == 1.0);
    CHECK(cox.std_error == 0.0);
    const auto line = pgf_mean_line(one, 50.0, p, 2000.0, 500, 9);
    CHECK(line.value == 1.0);
    CHECK(line.std_error == 0.0);
}

TEST_CASE("empty-window trials resample with a diagnostic count") {
    SystemParams p = default_params();
    p.lambda_s = 1e-4;
    p.lambda_r = 1e-9;
    p.lambda_m = 1e-12;
    SimOptions opt;
    opt.window_radius = 1000.0; // palm road holds 0.2 SBS on average
    const auto outcomes = run_trials(p, opt, 300, 5, true);
    long resampled = 0;
    for (const auto& o : outcomes) resampled += o.resamples;
    CHECK(resampled > 0); // most windows start empty at these densities
}
