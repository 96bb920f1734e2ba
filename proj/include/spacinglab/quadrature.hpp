#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "spacinglab/errors.hpp"

namespace spacinglab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    /// Affine image of the rule on [lo, hi].
    QuadratureRule mapped(double lo, double hi) const {
        QuadratureRule out;
        const std::size_t n = nodes.size();
        out.nodes.resize(n);
        out.weights.resize(n);
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < n; ++i) {
            out.nodes[i] = mid + half * nodes[i];
            out.weights[i] = half * weights[i];
        }
        return out;
    }

    template <typename Fn>
    double integrate(Fn&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

/// Gauss–Legendre rule on [-1, 1] by Newton iteration on P_n; nodes are
/// accurate to machine precision, weights via w = 2 / ((1-x^2) P_n'(x)^2).
inline QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw DomainError("gauss_legendre: order must be positive");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Chebyshev-based initial guess.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n and P_n' by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (std::size_t j = 2; j <= n; ++j) {
                const double jd = static_cast<double>(j);
                const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

/// First-kind Chebyshev points cos((2i+1)pi/2n), ascending, all interior.
inline std::vector<double> chebyshev_nodes(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[n - 1 - i] =
            std::cos((2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi /
                     (2.0 * static_cast<double>(n)));
    }
    return x;
}

/// Composite trapezoid over [0, pi] with n panels; spectrally accurate for
/// smooth even 2pi-periodic integrands (cosine polynomials).
template <typename Fn>
double trapezoid_0_pi(Fn&& f, std::size_t panels) {
    const double h = std::numbers::pi / static_cast<double>(panels);
    double s = 0.5 * (f(0.0) + f(std::numbers::pi));
    for (std::size_t i = 1; i < panels; ++i) s += f(h * static_cast<double>(i));
    return s * h;
}

} // namespace spacinglab
