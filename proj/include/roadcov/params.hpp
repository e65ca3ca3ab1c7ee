#pragma once

#include <string>
#include <vector>

#include "roadcov/link_class.hpp"
#include "roadcov/units.hpp"

namespace roadcov {

// Every scalar the model needs, in SI linear units. dB/dBm only exist at the
// configuration boundary.
struct SystemParams {
    double lambda_m = 1e-6;    // MBS areal density, 1/m^2
    double lambda_r = 1e-5;    // road line-process intensity, 1/m^2
    double lambda_s = 0.1;     // SBS linear density on a road, 1/m
    double lambda_ou = 0.01;   // outdoor-user linear density on a road, 1/m
    double d_m = 200.0;        // macro LOS-ball radius, m
    double p_tx_macro = 0.0;   // W
    double p_tx_small = 0.0;   // W
    PerClass<double> k;        // path-loss coefficient at 1 m, linear
    PerClass<double> alpha;    // path-loss exponent
    double g0 = 0.0;           // mm-wave directional antenna gain, linear
    double theta = 0.0;        // mm-wave beamwidth, rad
    double h = 10.0;           // SBS mounting height, m
    double noise_mu = 0.0;     // u-wave noise power, W
    double noise_mm = 0.0;     // mm-wave noise power, W
    int nakagami_m = 3;        // integer Nakagami shape for mm-wave fading

    std::vector<std::string> validate() const;
};

// Documented defaults: free-space coefficients at 1 m (2 GHz for u-wave
// classes, 28 GHz for the mm-wave class), LOS exponent 2, NLOS exponent 4,
// P_M = 45 dBm, P_S = 30 dBm, D_M = 200 m, lambda_M = 1 /km^2,
// G0 = 30 dB, theta = 10 deg, h = 10 m, 20 MHz / 1 GHz bandwidths with a
// 7 dB noise figure, Nakagami shape 3.
SystemParams default_params();

// Free-space attenuation coefficient at 1 m: (c / (4*pi*f))^2.
double free_space_k(double frequency_hz);

// K * d^(-alpha); throws std::domain_error for d <= 0.
double path_loss(const SystemParams& p, ClassId cls, double d);

// P_t * K * d^(-alpha), times G0 for the mm-wave class. Validates that the
// (tier, visibility, rat) triple is representable.
double mean_rx_power(const SystemParams& p, ClassId cls, double d);
double mean_rx_power(const SystemParams& p, const LinkClass& cls, double d);

inline double tx_power(const SystemParams& p, ClassId cls) {
    return (cls == ClassId::MacroLos || cls == ClassId::MacroNlos) ? p.p_tx_macro
                                                                   : p.p_tx_small;
}

} // namespace roadcov
