#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roadcov/geometry.hpp"
#include "roadcov/params.hpp"
#include "roadcov/rng.hpp"

namespace roadcov {

// mm-wave interference treatments compared in the experiments.
enum class MmModel { Full = 0, DominantOnly = 1, NoiseLimited = 2 };

struct SimOptions {
    double window_radius = 0.0; // 0 -> max(5/sqrt(pi*lambda_m), 5*d_m, 3000)
    bool frozen_fading = false; // unit power fading, for exactness tests
    int threads = 0;            // 0 -> hardware concurrency
};

double default_window_radius(const SystemParams& p);

// One road: distance of the line to the origin, the normal's angle, and the
// signed SBS offsets along the line measured from the foot point.
struct RoadLine {
    double rho = 0.0;
    double angle = 0.0;
    std::vector<double> sbs_offsets;
};

// One sampled deployment seen from the typical user at the origin. The user
// sits on the palm road (a line through the origin with uniform angle,
// carrying its own SBS process); all other roads hit the window ball.
struct NetworkRealization {
    RoadLine palm;
    std::vector<RoadLine> roads;
    std::vector<double> mbs_distances;
    std::vector<double> mbs_angles;
    std::vector<double> palm_users; // outdoor-user offsets on the palm road
    double window_radius = 0.0;

    static double sbs_distance(const RoadLine& line, double offset) {
        return std::hypot(line.rho, offset);
    }
};

NetworkRealization sample_realization(const SystemParams& p, double window_radius,
                                      std::uint64_t seed, std::uint64_t trial,
                                      std::uint64_t attempt = 0);

struct Association {
    ClassId cls = ClassId::SmallLosMu;
    double distance = 0.0;
    int palm_index = -1; // serving SBS offset index for small-LOS service
};

// Strongest mean u-wave power among {macro candidate, nearest own-road SBS,
// nearest other-road SBS}; LOS macro considered iff one exists inside the
// ball. A small-LOS winner then picks the RAT with the higher mean power.
// Returns nothing when the window contains no base station at all.
std::optional<Association> associate(const NetworkRealization& real, const SystemParams& p);

struct TrialOutcome {
    ClassId cls = ClassId::SmallLosMu;
    double distance = 0.0;
    // u-wave associations fill sinr_mu; mm-wave associations fill the three
    // interference-model variants sharing the same desired-signal fading.
    double sinr_mu = 0.0;
    double sinr_mm[3] = {0.0, 0.0, 0.0};
    bool spillover = false; // dominant-neighbour beam reaches the user
    int resamples = 0;      // empty-window resample count
};

TrialOutcome compute_sinr(const NetworkRealization& real, const Association& assoc,
                          const SystemParams& p, std::uint64_t seed, std::uint64_t trial,
                          bool frozen_fading);

// Runs association (+SINR unless association_only) for `trials` independent
// trials on counter-based substreams; identical (seed, trial) pairs
// reproduce identical outcomes bit for bit regardless of thread schedule.
std::vector<TrialOutcome> run_trials(const SystemParams& p, const SimOptions& opt,
                                     long trials, std::uint64_t seed,
                                     bool association_only = false);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    long trials = 0;
};

struct StreamingMeanVar {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    Estimate estimate() const {
        return {mean, n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0, n};
    }
};

// Association/RAT frequencies over the five realizable classes.
struct AssociationFrequencies {
    PerClass<Estimate> freq;
    long trials = 0;
};
AssociationFrequencies association_frequencies(const SystemParams& p, const SimOptions& opt,
                                               long trials, std::uint64_t seed);

// Empirical coverage P(SINR > gamma) per interference model, from one batch
// of trials (u-wave associations contribute the same SINR to every model).
struct CoverageEstimate {
    std::vector<double> gamma_linear;
    std::vector<Estimate> overall[3];      // indexed by MmModel
    PerClass<std::vector<Estimate>> per_class; // Full-model conditional curves
    std::vector<Estimate> mm_conditional[3];   // mm-class curves per model
    PerClass<long> class_counts;
    long trials = 0;
};
CoverageEstimate coverage_estimate(const SystemParams& p, const SimOptions& opt,
                                   const std::vector<double>& gamma_linear, long trials,
                                   std::uint64_t seed);

// Nearest-distance samples for one tier/visibility candidate; entries with
// no candidate inside the window are reported separately.
struct DistanceSamples {
    std::vector<double> values;
    long censored = 0;
};
enum class NearestKind { SmallLos, SmallNlos, MacroLos, MacroNlos, ServingGiven };
DistanceSamples nearest_distance_samples(const SystemParams& p, const SimOptions& opt,
                                         NearestKind kind, long trials, std::uint64_t seed,
                                         ClassId serving_cls = ClassId::SmallLosMu);

// Monte Carlo means of PGF products, oracles for the analytic functionals.
Estimate pgf_mean_cox(const RadialFunction& nu, const SystemParams& p, double window_radius,
                      long trials, std::uint64_t seed);
Estimate pgf_mean_line(const RadialFunction& nu, double d, const SystemParams& p,
                       double half_length, long trials, std::uint64_t seed);
Estimate pgf_mean_annulus(const RadialFunction& nu, double lambda, double r_min, double r_max,
                          long trials, std::uint64_t seed);

// Geometric oracle for the beam-spillover probability: samples the
// serving/neighbour construction directly (positions, beam edges by
// elevation angles, user presence) and reports the event frequency.
Estimate spillover_mc(const SystemParams& p, long trials, std::uint64_t seed);

} // namespace roadcov
