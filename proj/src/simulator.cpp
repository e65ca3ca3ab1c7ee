#include "roadcov/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace roadcov {

namespace {

struct Components {
    bool palm = true;
    bool roads = true;
    bool macro = true;
    bool users = true;
};

NetworkRealization sample_impl(const SystemParams& p, double window_radius,
                               std::uint64_t seed, std::uint64_t trial, std::uint64_t attempt,
                               const Components& want) {
    NetworkRealization real;
    real.window_radius = window_radius;
    const std::uint64_t at = attempt * 0x10000ULL;

    if (want.palm) {
        Rng rng(seed, {stream::kPalmLine, trial, at});
        real.palm.rho = 0.0;
        real.palm.angle = rng.uniform(0.0, kPi);
        const int n = rng.poisson(2.0 * window_radius * p.lambda_s);
        real.palm.sbs_offsets.resize(n);
        for (int i = 0; i < n; ++i)
            real.palm.sbs_offsets[i] = rng.uniform(-window_radius, window_radius);
    }

    if (want.roads) {
        // Line count by CDF inversion: monotone-coupled across road densities.
        Rng count_rng(seed, {stream::kLines, trial, at});
        const int n_lines = count_rng.poisson_inversion(2.0 * kPi * p.lambda_r * window_radius);
        real.roads.resize(n_lines);
        for (int i = 0; i < n_lines; ++i) {
            Rng rng(seed, {stream::kLinePoints, trial, at, static_cast<std::uint64_t>(i)});
            RoadLine& line = real.roads[i];
            line.rho = rng.uniform(0.0, window_radius);
            line.angle = rng.uniform(0.0, 2.0 * kPi);
            const double half_chord =
                std::sqrt(window_radius * window_radius - line.rho * line.rho);
            const int n_sbs = rng.poisson(2.0 * half_chord * p.lambda_s);
            line.sbs_offsets.resize(n_sbs);
            for (int j = 0; j < n_sbs; ++j)
                line.sbs_offsets[j] = rng.uniform(-half_chord, half_chord);
        }
    }

    if (want.macro) {
        Rng rng(seed, {stream::kMacro, trial, at});
        const int n = rng.poisson(p.lambda_m * kPi * window_radius * window_radius);
        real.mbs_distances.resize(n);
        real.mbs_angles.resize(n);
        for (int i = 0; i < n; ++i) {
            real.mbs_distances[i] = window_radius * std::sqrt(rng.uniform());
            real.mbs_angles[i] = rng.uniform(0.0, 2.0 * kPi);
        }
    }

    if (want.users) {
        Rng rng(seed, {stream::kUsers, trial, at});
        const int n = rng.poisson(2.0 * window_radius * p.lambda_ou);
        real.palm_users.resize(n);
        for (int i = 0; i < n; ++i)
            real.palm_users[i] = rng.uniform(-window_radius, window_radius);
    }

    return real;
}

struct Candidates {
    int palm_index = -1;
    double d_sl = 0.0;
    int road_index = -1, road_point = -1;
    double d_sn = 0.0;
    int mbs_index = -1;
    double d_m = 0.0;
};

Candidates find_candidates(const NetworkRealization& real) {
    Candidates c;
    for (std::size_t i = 0; i < real.palm.sbs_offsets.size(); ++i) {
        const double d = std::fabs(real.palm.sbs_offsets[i]);
        if (c.palm_index < 0 || d < c.d_sl) {
            c.palm_index = static_cast<int>(i);
            c.d_sl = d;
        }
    }
    for (std::size_t i = 0; i < real.roads.size(); ++i) {
        const RoadLine& line = real.roads[i];
        for (std::size_t j = 0; j < line.sbs_offsets.size(); ++j) {
            const double d = NetworkRealization::sbs_distance(line, line.sbs_offsets[j]);
            if (c.road_index < 0 || d < c.d_sn) {
                c.road_index = static_cast<int>(i);
                c.road_point = static_cast<int>(j);
                c.d_sn = d;
            }
        }
    }
    for (std::size_t i = 0; i < real.mbs_distances.size(); ++i) {
        if (c.mbs_index < 0 || real.mbs_distances[i] < c.d_m) {
            c.mbs_index = static_cast<int>(i);
            c.d_m = real.mbs_distances[i];
        }
    }
    return c;
}

// Ground interval covered by a rooftop beam aimed from a mast at signed
// position `b` toward a served user at signed position `u` (the beam is
// centred on the user: its lower edge sits at the elevation of the user
// minus half the beamwidth).
struct BeamFootprint {
    double lo = 0.0, hi = 0.0;
};

BeamFootprint beam_footprint(double b, double u, double h, double theta) {
    const double dist = std::fabs(u - b);
    const double psi = std::atan(dist / h) - 0.5 * theta;
    const double far_angle = std::fmin(psi + theta, kPi / 2.0 - 1e-9);
    const double near_edge = h * std::tan(psi);
    const double far_edge = h * std::tan(far_angle);
    if (u >= b) return {b + near_edge, b + far_edge};
    return {b - far_edge, b - near_edge};
}

} // namespace

double default_window_radius(const SystemParams& p) {
    // The last term keeps the own-road candidate inside the window at
    // sparse deployments: P(nearest beyond 3/lambda_s) = e^-6.
    const double base = std::fmax(std::fmax(5.0 / std::sqrt(kPi * p.lambda_m), 5.0 * p.d_m),
                                  3000.0);
    return std::fmax(base, 3.0 / p.lambda_s);
}

NetworkRealization sample_realization(const SystemParams& p, double window_radius,
                                      std::uint64_t seed, std::uint64_t trial,
                                      std::uint64_t attempt) {
    return sample_impl(p, window_radius, seed, trial, attempt, Components{});
}

std::optional<Association> associate(const NetworkRealization& real, const SystemParams& p) {
    const Candidates c = find_candidates(real);
    if (c.palm_index < 0 && c.road_index < 0 && c.mbs_index < 0) return std::nullopt;

    double best_power = -1.0;
    Association assoc;

    if (c.mbs_index >= 0) {
        const bool los = c.d_m < p.d_m;
        const ClassId cls = los ? ClassId::MacroLos : ClassId::MacroNlos;
        const double power = mean_rx_power(p, cls, c.d_m);
        if (power > best_power) {
            best_power = power;
            assoc = Association{cls, c.d_m, -1};
        }
    }
    if (c.road_index >= 0) {
        const double power = mean_rx_power(p, ClassId::SmallNlos, c.d_sn);
        if (power > best_power) {
            best_power = power;
            assoc = Association{ClassId::SmallNlos, c.d_sn, -1};
        }
    }
    if (c.palm_index >= 0) {
        const double power = mean_rx_power(p, ClassId::SmallLosMu, c.d_sl);
        if (power > best_power) {
            best_power = power;
            // RAT choice: larger mean power between the two bands.
            const double mm = mean_rx_power(p, ClassId::SmallLosMm, c.d_sl);
            assoc = Association{mm > power ? ClassId::SmallLosMm : ClassId::SmallLosMu, c.d_sl,
                                c.palm_index};
        }
    }
    return assoc;
}

TrialOutcome compute_sinr(const NetworkRealization& real, const Association& assoc,
                          const SystemParams& p, std::uint64_t seed, std::uint64_t trial,
                          bool frozen_fading) {
    TrialOutcome out;
    out.cls = assoc.cls;
    out.distance = assoc.distance;

    const Candidates cand = find_candidates(real);

    if (assoc.cls == ClassId::SmallLosMm) {
        Rng fading(seed, {stream::kFadingMm, trial});
        Rng served(seed, {stream::kServedUser, trial});
        const double h0 = frozen_fading ? 1.0 : fading.gamma_unit_mean(p.nakagami_m);
        const double desired = h0 * mean_rx_power(p, ClassId::SmallLosMm, assoc.distance);

        // Sort same-road SBSs once; cells are midpoints between neighbours.
        std::vector<int> order(real.palm.sbs_offsets.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return real.palm.sbs_offsets[a] < real.palm.sbs_offsets[b];
        });
        std::vector<double> users = real.palm_users;
        std::sort(users.begin(), users.end());

        int server_sorted = -1;
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == assoc.palm_index) server_sorted = static_cast<int>(i);

        // Dominant-model interferer: the nearest mast on the opposite side
        // of the user from the server (position only; gating comes later).
        const double server_pos = real.palm.sbs_offsets[assoc.palm_index];
        int dominant_sorted = -1;
        double dominant_abs = 0.0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const double b = real.palm.sbs_offsets[order[i]];
            if ((b < 0.0) == (server_pos < 0.0)) continue;
            if (dominant_sorted < 0 || std::fabs(b) < dominant_abs) {
                dominant_sorted = static_cast<int>(i);
                dominant_abs = std::fabs(b);
            }
        }

        double interference_full = 0.0;
        double interference_dominant = 0.0;

        for (std::size_t i = 0; i < order.size(); ++i) {
            const double b = real.palm.sbs_offsets[order[i]];
            const double cell_lo =
                i == 0 ? -real.window_radius
                       : 0.5 * (real.palm.sbs_offsets[order[i - 1]] + b);
            const double cell_hi =
                i + 1 == order.size() ? real.window_radius
                                      : 0.5 * (b + real.palm.sbs_offsets[order[i + 1]]);
            // Fading and served-user draws happen for every mast in sorted
            // order so the stream stays aligned whatever the server index.
            const double hj = frozen_fading ? 1.0 : fading.gamma_unit_mean(p.nakagami_m);
            const auto lo_it = std::lower_bound(users.begin(), users.end(), cell_lo);
            const auto hi_it = std::lower_bound(users.begin(), users.end(), cell_hi);
            const std::size_t n_users = static_cast<std::size_t>(hi_it - lo_it);
            const std::size_t pick = n_users > 0 ? served.pick(n_users) : 0;
            if (static_cast<int>(i) == server_sorted) continue;
            if (n_users == 0) continue; // idle mast, no beam
            const double u = *(lo_it + static_cast<std::ptrdiff_t>(pick));
            const BeamFootprint fp = beam_footprint(b, u, p.h, p.theta);
            if (fp.lo > 0.0 || fp.hi < 0.0) continue; // beam misses the user
            const double contribution =
                hj * mean_rx_power(p, ClassId::SmallLosMm, std::fabs(b));
            interference_full += contribution;
            if (static_cast<int>(i) == dominant_sorted) {
                interference_dominant = contribution;
                out.spillover = true;
            }
        }

        out.sinr_mm[static_cast<int>(MmModel::Full)] =
            desired / (p.noise_mm + interference_full);
        out.sinr_mm[static_cast<int>(MmModel::DominantOnly)] =
            desired / (p.noise_mm + interference_dominant);
        out.sinr_mm[static_cast<int>(MmModel::NoiseLimited)] = desired / p.noise_mm;
        return out;
    }

    // u-wave service: Rayleigh power fading on every link, interference from
    // every other base station in the shared band.
    Rng fading(seed, {stream::kFadingMu, trial});
    const double h0 = frozen_fading ? 1.0 : fading.exponential(1.0);
    const double desired = h0 * mean_rx_power(p, assoc.cls, assoc.distance);

    double interference = 0.0;
    for (std::size_t i = 0; i < real.palm.sbs_offsets.size(); ++i) {
        const double hj = frozen_fading ? 1.0 : fading.exponential(1.0);
        if ((assoc.cls == ClassId::SmallLosMu || assoc.cls == ClassId::SmallLosMm) &&
            static_cast<int>(i) == assoc.palm_index)
            continue;
        const double d = std::fabs(real.palm.sbs_offsets[i]);
        interference += hj * mean_rx_power(p, ClassId::SmallLosMu, d);
    }
    for (std::size_t li = 0; li < real.roads.size(); ++li) {
        const RoadLine& line = real.roads[li];
        for (std::size_t j = 0; j < line.sbs_offsets.size(); ++j) {
            const double hj = frozen_fading ? 1.0 : fading.exponential(1.0);
            if (assoc.cls == ClassId::SmallNlos && static_cast<int>(li) == cand.road_index &&
                static_cast<int>(j) == cand.road_point)
                continue;
            const double d = NetworkRealization::sbs_distance(line, line.sbs_offsets[j]);
            interference += hj * mean_rx_power(p, ClassId::SmallNlos, d);
        }
    }
    for (std::size_t i = 0; i < real.mbs_distances.size(); ++i) {
        const double hj = frozen_fading ? 1.0 : fading.exponential(1.0);
        if ((assoc.cls == ClassId::MacroLos || assoc.cls == ClassId::MacroNlos) &&
            static_cast<int>(i) == cand.mbs_index)
            continue;
        const double d = real.mbs_distances[i];
        const ClassId cls = d < p.d_m ? ClassId::MacroLos : ClassId::MacroNlos;
        interference += hj * mean_rx_power(p, cls, d);
    }

    out.sinr_mu = desired / (p.noise_mu + interference);
    return out;
}

std::vector<TrialOutcome> run_trials(const SystemParams& p, const SimOptions& opt, long trials,
                                     std::uint64_t seed, bool association_only) {
    const double radius = opt.window_radius > 0.0 ? opt.window_radius : default_window_radius(p);
    std::vector<TrialOutcome> out(static_cast<std::size_t>(trials));

    auto work = [&](long lo, long hi) {
        for (long t = lo; t < hi; ++t) {
            int attempt = 0;
            std::optional<Association> assoc;
            NetworkRealization real;
            for (; attempt < 64; ++attempt) {
                real = sample_realization(p, radius, seed, static_cast<std::uint64_t>(t),
                                          static_cast<std::uint64_t>(attempt));
                assoc = associate(real, p);
                if (assoc) break;
            }
            if (!assoc) throw numeric_error("no base station after 64 window resamples");
            TrialOutcome& o = out[static_cast<std::size_t>(t)];
            if (association_only) {
                o.cls = assoc->cls;
                o.distance = assoc->distance;
            } else {
                o = compute_sinr(real, *assoc, p, seed, static_cast<std::uint64_t>(t),
                                 opt.frozen_fading);
            }
            o.resamples = attempt;
        }
    };

    int threads = opt.threads > 0 ? opt.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (threads == 1 || trials < 256) {
        work(0, trials);
        return out;
    }
    std::vector<std::future<void>> futures;
    const long chunk = (trials + threads - 1) / threads;
    for (int k = 0; k < threads; ++k) {
        const long lo = k * chunk;
        const long hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        futures.push_back(std::async(std::launch::async, work, lo, hi));
    }
    for (auto& f : futures) f.get();
    return out;
}

AssociationFrequencies association_frequencies(const SystemParams& p, const SimOptions& opt,
                                               long trials, std::uint64_t seed) {
    const auto outcomes = run_trials(p, opt, trials, seed, true);
    PerClass<StreamingMeanVar> acc;
    for (const auto& o : outcomes) {
        for (std::size_t i = 0; i < kNumClasses; ++i) {
            acc[static_cast<ClassId>(i)].add(o.cls == static_cast<ClassId>(i) ? 1.0 : 0.0);
        }
    }
    AssociationFrequencies result;
    result.trials = trials;
    for (std::size_t i = 0; i < kNumClasses; ++i)
        result.freq[static_cast<ClassId>(i)] = acc[static_cast<ClassId>(i)].estimate();
    return result;
}

CoverageEstimate coverage_estimate(const SystemParams& p, const SimOptions& opt,
                                   const std::vector<double>& gamma_linear, long trials,
                                   std::uint64_t seed) {
    const auto outcomes = run_trials(p, opt, trials, seed, false);
    CoverageEstimate result;
    result.gamma_linear = gamma_linear;
    result.trials = trials;
    const std::size_t g = gamma_linear.size();

    std::vector<StreamingMeanVar> overall[3];
    std::vector<StreamingMeanVar> mm_cond[3];
    for (auto& v : overall) v.resize(g);
    for (auto& v : mm_cond) v.resize(g);
    PerClass<std::vector<StreamingMeanVar>> per_class;
    for (std::size_t i = 0; i < kNumClasses; ++i)
        per_class[static_cast<ClassId>(i)].resize(g);
    PerClass<long> counts{};

    for (const auto& o : outcomes) {
        const bool mm = o.cls == ClassId::SmallLosMm;
        ++counts[o.cls];
        for (std::size_t k = 0; k < g; ++k) {
            for (int m = 0; m < 3; ++m) {
                const double sinr = mm ? o.sinr_mm[m] : o.sinr_mu;
                overall[m][k].add(sinr > gamma_linear[k] ? 1.0 : 0.0);
                if (mm) mm_cond[m][k].add(o.sinr_mm[m] > gamma_linear[k] ? 1.0 : 0.0);
            }
            const double sinr_full = mm ? o.sinr_mm[0] : o.sinr_mu;
            per_class[o.cls][k].add(sinr_full > gamma_linear[k] ? 1.0 : 0.0);
        }
    }

    for (int m = 0; m < 3; ++m) {
        result.overall[m].resize(g);
        result.mm_conditional[m].resize(g);
        for (std::size_t k = 0; k < g; ++k) {
            result.overall[m][k] = overall[m][k].estimate();
            result.mm_conditional[m][k] = mm_cond[m][k].estimate();
        }
    }
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        const ClassId id = static_cast<ClassId>(i);
        result.per_class[id].resize(g);
        for (std::size_t k = 0; k < g; ++k)
            result.per_class[id][k] = per_class[id][k].estimate();
        result.class_counts[id] = counts[id];
    }
    return result;
}

DistanceSamples nearest_distance_samples(const SystemParams& p, const SimOptions& opt,
                                         NearestKind kind, long trials, std::uint64_t seed,
                                         ClassId serving_cls) {
    const double radius = opt.window_radius > 0.0 ? opt.window_radius : default_window_radius(p);
    DistanceSamples out;
    Components want;
    want.users = false;
    if (kind == NearestKind::SmallLos) want.roads = want.macro = false;
    if (kind == NearestKind::SmallNlos) {
        want.palm = false;
        want.macro = false;
    }
    if (kind == NearestKind::MacroLos || kind == NearestKind::MacroNlos) {
        want.palm = false;
        want.roads = false;
    }

    for (long t = 0; t < trials; ++t) {
        const auto real = sample_impl(p, radius, seed, static_cast<std::uint64_t>(t), 0, want);
        if (kind == NearestKind::ServingGiven) {
            const auto assoc = associate(real, p);
            if (!assoc || assoc->cls != serving_cls) continue;
            out.values.push_back(assoc->distance);
            continue;
        }
        const Candidates c = find_candidates(real);
        switch (kind) {
            case NearestKind::SmallLos:
                if (c.palm_index >= 0) out.values.push_back(c.d_sl);
                else ++out.censored;
                break;
            case NearestKind::SmallNlos:
                if (c.road_index >= 0) out.values.push_back(c.d_sn);
                else ++out.censored;
                break;
            case NearestKind::MacroLos:
                if (c.mbs_index >= 0 && c.d_m < p.d_m) out.values.push_back(c.d_m);
                else ++out.censored;
                break;
            case NearestKind::MacroNlos:
                if (c.mbs_index >= 0 && c.d_m >= p.d_m) out.values.push_back(c.d_m);
                else ++out.censored;
                break;
            case NearestKind::ServingGiven: break;
        }
    }
    return out;
}

Estimate pgf_mean_cox(const RadialFunction& nu, const SystemParams& p, double window_radius,
                      long trials, std::uint64_t seed) {
    Components want;
    want.palm = want.macro = want.users = false;
    StreamingMeanVar acc;
    for (long t = 0; t < trials; ++t) {
        const auto real = sample_impl(p, window_radius, seed, static_cast<std::uint64_t>(t), 0, want);
        double product = 1.0;
        for (const auto& line : real.roads)
            for (double off : line.sbs_offsets)
                product *= nu(NetworkRealization::sbs_distance(line, off));
        acc.add(product);
    }
    return acc.estimate();
}

Estimate pgf_mean_line(const RadialFunction& nu, double d, const SystemParams& p,
                       double half_length, long trials, std::uint64_t seed) {
    // Samples the measure line_pgf evaluates: a uniformly oriented ray from
    // the anchor carrying points at twice the linear density (the full
    // line's mass folded onto one side; the angle average restores it).
    StreamingMeanVar acc;
    for (long t = 0; t < trials; ++t) {
        Rng rng(seed, {stream::kOracle, static_cast<std::uint64_t>(t)});
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        const double cos_a = std::cos(angle);
        const int n = rng.poisson(2.0 * half_length * p.lambda_s);
        double product = 1.0;
        for (int i = 0; i < n; ++i) {
            const double tpos = rng.uniform(0.0, half_length);
            product *= nu(std::sqrt(d * d + tpos * tpos + 2.0 * tpos * d * cos_a));
        }
        acc.add(product);
    }
    return acc.estimate();
}

Estimate pgf_mean_annulus(const RadialFunction& nu, double lambda, double r_min, double r_max,
                          long trials, std::uint64_t seed) {
    StreamingMeanVar acc;
    const double area = kPi * (r_max * r_max - r_min * r_min);
    for (long t = 0; t < trials; ++t) {
        Rng rng(seed, {stream::kOracle, static_cast<std::uint64_t>(t)});
        const int n = rng.poisson(lambda * area);
        double product = 1.0;
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform();
            product *= nu(std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min)));
        }
        acc.add(product);
    }
    return acc.estimate();
}

Estimate spillover_mc(const SystemParams& p, long trials, std::uint64_t seed) {
    StreamingMeanVar acc;
    const double half_theta = 0.5 * p.theta;
    for (long t = 0; t < trials; ++t) {
        Rng rng(seed, {stream::kOracle, static_cast<std::uint64_t>(t), 1});
        // Serving geometry: the neighbour mast sits at y on one side of its
        // user, the next mast at inter-mast distance x = 2y + exp spacing.
        const double y = rng.exponential(2.0 * p.lambda_s);
        const double x = 2.0 * y + rng.exponential(p.lambda_s);
        double indicator = 0.0;
        // Beam-edge geometry, checked directly rather than via the solved
        // feasibility window.
        const double d_prime = p.h * std::tan(std::atan(x / (2.0 * p.h)) - half_theta);
        const double worst_spill = p.h * std::tan(
            std::fmin(std::atan(x / (2.0 * p.h)) + half_theta, kPi / 2.0 - 1e-9));
        if (d_prime >= 0.0 && worst_spill <= x && y > d_prime) {
            const int users = rng.poisson(p.lambda_ou * (x / 2.0 - d_prime));
            if (users >= 1) {
                const double reach = p.h * std::tan(
                    std::fmin(half_theta + std::atan(y / p.h), kPi / 2.0 - 1e-9));
                const double victim = rng.exponential(p.lambda_s);
                if (victim >= x - reach) indicator = 1.0;
            }
        }
        acc.add(indicator);
    }
    return acc.estimate();
}

} // namespace roadcov
