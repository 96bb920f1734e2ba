// Independent reference implementations used only by the test suites.
// Everything here is deliberately brute force: these are the oracles the
// production code is checked against, so they must not share its shortcuts.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracles {

/// Naive power-sum polynomial evaluation (against Horner).
inline double naive_poly(const std::vector<double>& coeffs, double t, int order = 0) {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const int kk = static_cast<int>(k);
        double factor = 1.0;
        for (int d = 0; d < order; ++d) factor *= static_cast<double>(kk - d);
        if (factor == 0.0) continue;
        acc += coeffs[k] * factor * std::pow(t, kk - order);
    }
    return acc;
}

/// Brute-force gamma^k mass: enumerate every k-subset, keep those whose
/// extremes lie in [lo, hi] and whose spread is <= s. Usable for n <= 30.
inline double brute_gamma_k(double lo, double hi, const std::vector<double>& y, int k,
                            double s) {
    const std::size_t n = y.size();
    double count = 0.0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == static_cast<std::size_t>(k)) {
            double mn = y[idx[0]], mx = y[idx[0]];
            for (std::size_t r = 1; r < idx.size(); ++r) {
                mn = std::min(mn, y[idx[r]]);
                mx = std::max(mx, y[idx[r]]);
            }
            if (mn >= lo && mn <= hi && mx >= lo && mx <= hi && mx - mn <= s) count += 1.0;
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    return count / (hi - lo);
}

/// Brute-force spacing count: consecutive pairs inside [lo, hi] with
/// spacing <= s (naive double membership test).
inline double brute_spacing_count(double lo, double hi, const std::vector<double>& y, double s) {
    double count = 0.0;
    for (std::size_t j = 0; j + 1 < y.size(); ++j) {
        const bool in1 = y[j] >= lo && y[j] <= hi;
        const bool in2 = y[j + 1] >= lo && y[j + 1] <= hi;
        if (in1 && in2 && y[j + 1] - y[j] <= s) count += 1.0;
    }
    return count;
}

/// Number of maximal runs of consecutive in-interval points.
inline std::size_t run_count(double lo, double hi, const std::vector<double>& y) {
    std::size_t runs = 0;
    bool inside = false;
    for (double t : y) {
        const bool in = t >= lo && t <= hi;
        if (in && !inside) ++runs;
        inside = in;
    }
    return runs;
}

/// Two-sample Kolmogorov statistic between sorted samples.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double sup = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] <= b[ib])
            ++ia;
        else
            ++ib;
        const double fa = static_cast<double>(ia) / static_cast<double>(a.size());
        const double fb = static_cast<double>(ib) / static_cast<double>(b.size());
        sup = std::max(sup, std::abs(fa - fb));
    }
    return sup;
}

/// Kolmogorov distance between a sorted sample and a reference CDF.
inline double ks_to_cdf(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
        sup = std::max(sup, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return sup;
}

/// Normalized Hermite-function kernel for the weight exp(-N t^2): an
/// independent closed-form route to the Christoffel-Darboux kernel of the
/// Gaussian model, viable for small N where H_j stays in range.
inline double hermite_kernel(std::size_t n_terms, double scale_n, double t, double s) {
    // Orthonormal Hermite functions psi_j(x) = H_j(x) e^{-x^2/2} / sqrt(2^j j! sqrt(pi));
    // for weight e^{-N t^2}: p_j(t) sqrt(w) = N^{1/4} psi_j(sqrt(N) t).
    auto psi_column = [&](double x, std::vector<double>& out) {
        out.resize(n_terms);
        double h_prev = 0.0;
        double h_cur = std::exp(-x * x / 2.0) / std::pow(std::numbers::pi, 0.25);
        for (std::size_t j = 0; j < n_terms; ++j) {
            out[j] = h_cur;
            // psi_{j+1} = (x sqrt(2/(j+1))) psi_j - sqrt(j/(j+1)) psi_{j-1}
            const double jd = static_cast<double>(j);
            const double next = x * std::sqrt(2.0 / (jd + 1.0)) * h_cur -
                                std::sqrt(jd / (jd + 1.0)) * h_prev;
            h_prev = h_cur;
            h_cur = next;
        }
    };
    const double rt = std::sqrt(scale_n);
    std::vector<double> pt, ps;
    psi_column(rt * t, pt);
    psi_column(rt * s, ps);
    double acc = 0.0;
    for (std::size_t j = 0; j < n_terms; ++j) acc += pt[j] * ps[j];
    return rt * acc;
}

} // namespace oracles
