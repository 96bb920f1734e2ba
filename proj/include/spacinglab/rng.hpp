#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "spacinglab/util.hpp"

namespace spacinglab {

/// Seeded generator with explicit variate transforms. The transforms are
/// spelled out here (instead of <random> distributions) so that a given
/// seed produces the same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// chi-distributed variate with an even number 2m of degrees of freedom,
    /// using chi^2_{2m} = -2 log(U_1 ... U_m).
    double chi_even(int two_m) {
        const int m = two_m / 2;
        double log_prod = 0.0;
        for (int i = 0; i < m; ++i) {
            double u = uniform();
            if (u <= 0.0) u = 0x1.0p-53;
            log_prod += std::log(u);
        }
        return std::sqrt(-2.0 * log_prod);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace spacinglab
