#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testsupport {

// Kolmogorov-Smirnov distance between a sample and a CDF. Censored
// observations (values the sampler could not see) only cap the empirical
// CDF; pass their count so the comparison stays honest.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                          long censored = 0) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size() + censored);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        worst = std::fmax(worst, std::fmax(std::fabs(f - lo), std::fabs(f - hi)));
    }
    return worst;
}

// Piecewise-linear CDF built by cumulative trapezoid integration of a pdf
// on a grid; used to KS-test conditional serving-distance laws.
struct NumericCdf {
    std::vector<double> x;
    std::vector<double> f;

    NumericCdf(const std::function<double(double)>& pdf, double lo, double hi, int points) {
        x.resize(points);
        f.resize(points);
        const double step = (hi - lo) / (points - 1);
        double acc = 0.0;
        double prev = pdf(lo > 0 ? lo : lo + 1e-9);
        x[0] = lo;
        f[0] = 0.0;
        for (int i = 1; i < points; ++i) {
            x[i] = lo + step * i;
            const double cur = pdf(x[i]);
            acc += 0.5 * (prev + cur) * step;
            f[i] = acc;
            prev = cur;
        }
    }

    double operator()(double v) const {
        if (v <= x.front()) return 0.0;
        if (v >= x.back()) return f.back();
        const auto it = std::upper_bound(x.begin(), x.end(), v);
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        const double t = (v - x[i - 1]) / (x[i] - x[i - 1]);
        return f[i - 1] + t * (f[i] - f[i - 1]);
    }
};

} // namespace testsupport
