#include "roadcov/params.hpp"

#include <cmath>
#include <stdexcept>

namespace roadcov {

double free_space_k(double frequency_hz) {
    const double c = 299792458.0;
    const double r = c / (4.0 * kPi * frequency_hz);
    return r * r;
}

SystemParams default_params() {
    SystemParams p;
    p.lambda_m = 1e-6;
    p.lambda_r = 1e-5;
    p.lambda_s = 0.1;
    p.lambda_ou = 0.01;
    p.d_m = 200.0;
    p.p_tx_macro = dbm_to_watts(45.0);
    p.p_tx_small = dbm_to_watts(30.0);

    const double k_mu = free_space_k(2e9);
    const double k_mm = free_space_k(28e9);
    p.k[ClassId::MacroLos] = k_mu;
    p.k[ClassId::MacroNlos] = k_mu;
    p.k[ClassId::SmallLosMu] = k_mu;
    p.k[ClassId::SmallNlos] = k_mu;
    p.k[ClassId::SmallLosMm] = k_mm;

    p.alpha[ClassId::MacroLos] = 2.0;
    p.alpha[ClassId::MacroNlos] = 4.0;
    p.alpha[ClassId::SmallLosMu] = 2.0;
    p.alpha[ClassId::SmallNlos] = 4.0;
    p.alpha[ClassId::SmallLosMm] = 2.0;

    p.g0 = db_to_linear(30.0);
    p.theta = deg_to_rad(10.0);
    p.h = 10.0;
    p.noise_mu = noise_power_watts(20e6, 7.0);
    p.noise_mm = noise_power_watts(1e9, 7.0);
    p.nakagami_m = 3;
    return p;
}

std::vector<std::string> SystemParams::validate() const {
    std::vector<std::string> errors;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            errors.push_back(std::string(name) + " must be strictly positive");
    };
    positive(lambda_m, "lambda_m");
    positive(lambda_r, "lambda_r");
    positive(lambda_s, "lambda_s");
    positive(lambda_ou, "lambda_ou");
    positive(d_m, "d_m");
    positive(p_tx_macro, "p_tx_macro");
    positive(p_tx_small, "p_tx_small");
    positive(g0, "g0");
    positive(h, "h");
    positive(noise_mu, "noise_mu");
    positive(noise_mm, "noise_mm");
    if (!(theta > 0.0 && theta < kPi)) errors.push_back("theta must lie in (0, pi)");
    if (nakagami_m < 1) errors.push_back("nakagami_m must be an integer >= 1");

    for (std::size_t i = 0; i < kNumClasses; ++i) {
        const ClassId id = static_cast<ClassId>(i);
        const LinkClass c = to_link_class(id);
        if (!(k[id] > 0.0)) errors.push_back(std::string("k[") + class_name(id) + "] must be strictly positive");
        // LOS exponents >= 2, NLOS > 2: keeps the improper interference and
        // PGF integrals convergent.
        if (c.visibility == Visibility::Los && alpha[id] < 2.0)
            errors.push_back(std::string("alpha[") + class_name(id) + "] must be >= 2 for LOS classes");
        if (c.visibility == Visibility::Nlos && alpha[id] <= 2.0)
            errors.push_back(std::string("alpha[") + class_name(id) + "] must be > 2 for NLOS classes");
    }
    return errors;
}

double path_loss(const SystemParams& p, ClassId cls, double d) {
    if (!(d > 0.0)) throw std::domain_error("path_loss: distance must be > 0");
    return p.k[cls] * std::pow(d, -p.alpha[cls]);
}

double mean_rx_power(const SystemParams& p, ClassId cls, double d) {
    const double base = tx_power(p, cls) * path_loss(p, cls, d);
    return cls == ClassId::SmallLosMm ? p.g0 * base : base;
}

double mean_rx_power(const SystemParams& p, const LinkClass& cls, double d) {
    return mean_rx_power(p, to_class_id(cls), d);
}

} // namespace roadcov
