#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "spacinglab/errors.hpp"

namespace spacinglab {

/// Shape-preserving piecewise cubic (Fritsch–Carlson). Monotone data yields
/// a monotone interpolant; values never overshoot the local node range.
class PchipInterpolant {
public:
    PchipInterpolant() = default;

    PchipInterpolant(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw DomainError("pchip: need at least two nodes, matching sizes");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1])) throw DomainError("pchip: nodes must be increasing");
        d_.assign(n, 0.0);
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
        } else {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                if (delta[i - 1] * delta[i] <= 0.0) {
                    d_[i] = 0.0;
                } else {
                    const double h0 = x_[i] - x_[i - 1];
                    const double h1 = x_[i + 1] - x_[i];
                    const double w1 = 2.0 * h1 + h0;
                    const double w2 = h1 + 2.0 * h0;
                    d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d_[0] = edge_slope(x_[1] - x_[0], x_[2] - x_[1], delta[0], delta[1]);
            d_[n - 1] = edge_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3], delta[n - 2],
                                   delta[n - 3]);
        }
    }

    double operator()(double t) const {
        const std::size_t i = segment(t);
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
    }

    double derivative(double t) const {
        const std::size_t i = segment(t);
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double s2 = s * s;
        const double dh00 = (6.0 * s2 - 6.0 * s) / h;
        const double dh10 = 3.0 * s2 - 4.0 * s + 1.0;
        const double dh01 = (-6.0 * s2 + 6.0 * s) / h;
        const double dh11 = 3.0 * s2 - 2.0 * s;
        return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
    }

    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

private:
    static double edge_slope(double h_near, double h_far, double delta_near, double delta_far) {
        // Three-point one-sided estimate, limited to preserve shape.
        double d = ((2.0 * h_near + h_far) * delta_near - h_near * delta_far) / (h_near + h_far);
        if (d * delta_near <= 0.0)
            d = 0.0;
        else if (delta_near * delta_far < 0.0 && std::abs(d) > 3.0 * std::abs(delta_near))
            d = 3.0 * delta_near;
        return d;
    }

    std::size_t segment(double t) const {
        if (t <= x_.front()) return 0;
        if (t >= x_.back()) return x_.size() - 2;
        const auto it = std::upper_bound(x_.begin(), x_.end(), t);
        return static_cast<std::size_t>(it - x_.begin()) - 1;
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;
};

} // namespace spacinglab
