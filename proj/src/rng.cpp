// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gridpop {

double Rng::normal(double mean, double sd)
{
    const double u1 = uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + sd * z;
}

long long Rng::poisson(double mean)
{
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson mean must be finite and >= 0");
    }
    if (mean == 0.0) {
        return 0;
    }
    if (mean < 10.0) {
        // Sequential inversion.
        const double p0 = std::exp(-mean);
        double p = p0;
        double cum = p0;
        const double u = uniform();
        long long k = 0;
        while (u > cum) {
            ++k;
            p *= mean / static_cast<double>(k);
            cum += p;
            if (k > 1000000) {
                break;
            }
        }
        return k;
    }

    // PTRS (transformed rejection with squeeze).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    while (true) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) {
            return static_cast<long long>(kf);
        }
        if (kf < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        const double k = kf;
        if (std::log(v) + std::log(inv_alpha) -
              std::log(a / (us * us) + b) <=
            k * log_mean - mean - std::lgamma(k + 1.0)) {
            return static_cast<long long>(kf);
        }
    }
}

} // namespace gridpop
