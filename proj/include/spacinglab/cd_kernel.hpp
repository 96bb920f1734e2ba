#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spacinglab/equilibrium.hpp"
#include "spacinglab/errors.hpp"
#include "spacinglab/gaudin.hpp"
#include "spacinglab/models.hpp"
#include "spacinglab/quadrature.hpp"
#include "spacinglab/spacing_stats.hpp"
#include "spacinglab/util.hpp"

namespace spacinglab {

/// Three-term recurrence data for polynomials orthonormal with respect to
/// exp(-N V(t) + f(t)) on the working interval. All evaluation goes through
/// the weighted functions phi_j = p_j sqrt(weight), which stay bounded; the
/// raw polynomials would overflow at the first edge node.
struct RecurrenceTable {
    std::size_t n = 0; // weight scale N (matrix size)
    std::size_t n_max = 0;
    std::vector<double> a; // a_0 .. a_{n_max-1}
    std::vector<double> b; // b_1 .. b_{n_max} (index 0 unused)
    double m0 = 0.0; // zeroth moment of the shifted weight
    double log_shift = 0.0; // weight was scaled by exp(log_shift) for range safety
    Potential v;
    std::optional<Potential> f;
    double grid_lo = 0.0;
    double grid_hi = 0.0;
};

/// Discretized Stieltjes procedure on a Gauss-Legendre grid covering
/// [a-1, b+1] (the weight is negligible outside at desk-scale N).
inline RecurrenceTable recurrence_coefficients(const Potential& v, const Potential* f,
                                               std::size_t n, std::size_t n_max,
                                               std::size_t quad_points = 4096) {
    if (n_max > n) throw DomainError("recurrence_coefficients: n_max must be <= N");
    if (n > 128)
        throw PrecisionError(
            "recurrence_coefficients: N > 128 exceeds the supported precision cap");
    RecurrenceTable table;
    table.n = n;
    table.n_max = n_max;
    table.v = v;
    if (f) table.f = *f;

    auto [lo_supp, hi_supp] = mrs_endpoints(v, 1e-10);
    table.grid_lo = std::max(v.lower, lo_supp - 1.0);
    table.grid_hi = std::min(v.upper, hi_supp + 1.0);

    const QuadratureRule rule = gauss_legendre(quad_points).mapped(table.grid_lo, table.grid_hi);
    const std::size_t m = quad_points;

    // Shift the exponent so the largest weight value is 1.
    std::vector<double> expo(m);
    double max_expo = -kInf;
    for (std::size_t i = 0; i < m; ++i) {
        double e = -static_cast<double>(n) * eval_potential(v, rule.nodes[i], 0);
        if (f) e += eval_potential(*f, rule.nodes[i], 0);
        expo[i] = e;
        max_expo = std::max(max_expo, e);
    }
    table.log_shift = -max_expo;
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = rule.weights[i] * std::exp(expo[i] - max_expo);

    KahanSum mass;
    for (double wi : w) mass.add(wi);
    table.m0 = mass.value();
    if (!(table.m0 > 0.0)) throw PrecisionError("recurrence_coefficients: weight underflowed");

    // phi_j values on the grid; w already contains the full weight, so the
    // discrete inner product is sum w_i u_i v_i.
    std::vector<double> phi_prev(m, 0.0), phi_cur(m, 1.0 / std::sqrt(table.m0)), scratch(m);
    table.a.resize(n_max);
    table.b.assign(n_max + 1, 0.0);
    for (std::size_t j = 0; j < n_max; ++j) {
        KahanSum aj;
        for (std::size_t i = 0; i < m; ++i) aj.add(w[i] * rule.nodes[i] * phi_cur[i] * phi_cur[i]);
        table.a[j] = aj.value();
        const double bj = table.b[j];
        KahanSum norm2;
        for (std::size_t i = 0; i < m; ++i) {
            scratch[i] = (rule.nodes[i] - table.a[j]) * phi_cur[i] - bj * phi_prev[i];
            norm2.add(w[i] * scratch[i] * scratch[i]);
        }
        const double bnext = std::sqrt(norm2.value());
        if (!(bnext > 0.0) || !std::isfinite(bnext))
            throw PrecisionError("recurrence_coefficients: lost positivity at j=" +
                                 std::to_string(j + 1) + "; n_max too large for the grid");
        table.b[j + 1] = bnext;
        for (std::size_t i = 0; i < m; ++i) {
            const double next = scratch[i] / bnext;
            phi_prev[i] = phi_cur[i];
            phi_cur[i] = next;
        }
    }
    return table;
}

namespace detail {

/// Weighted functions phi_0..phi_{count-1} at t. The weight (including the
/// range shift) is folded into phi_0.
inline void phi_column(const RecurrenceTable& r, double t, std::size_t count,
                       std::vector<double>& out) {
    out.resize(count);
    double e = -0.5 * static_cast<double>(r.n) * eval_potential(r.v, t, 0) + 0.5 * r.log_shift;
    if (r.f) e += 0.5 * eval_potential(*r.f, t, 0);
    double prev = 0.0;
    double cur = std::exp(e) / std::sqrt(r.m0);
    for (std::size_t j = 0; j < count; ++j) {
        out[j] = cur;
        if (j + 1 == count) break;
        const double next = ((t - r.a[j]) * cur - r.b[j] * prev) / r.b[j + 1];
        if (std::abs(next) > 1e200)
            throw PrecisionError("cd_kernel_eval: recurrence overflow");
        prev = cur;
        cur = next;
    }
}

} // namespace detail

/// K(t,s) = sum_{j<N} phi_j(t) phi_j(s).
inline double cd_kernel_eval(const RecurrenceTable& r, double t, double s) {
    if (t < r.grid_lo || t > r.grid_hi || s < r.grid_lo || s > r.grid_hi)
        throw DomainError("cd_kernel_eval: point outside the working interval");
    const std::size_t count = std::min(r.n, r.n_max);
    std::vector<double> pt, ps;
    detail::phi_column(r, t, count, pt);
    KahanSum acc;
    if (t == s) {
        for (double v : pt) acc.add(v * v);
        return acc.value();
    }
    detail::phi_column(r, s, count, ps);
    for (std::size_t j = 0; j < count; ++j) acc.add(pt[j] * ps[j]);
    return acc.value();
}

/// Kernel Gram matrix for a set of points (columns of phi evaluated once).
inline Eigen::MatrixXd kernel_gram(const RecurrenceTable& r, const std::vector<double>& points) {
    const std::size_t k = points.size();
    const std::size_t count = std::min(r.n, r.n_max);
    Eigen::MatrixXd phis(count, k);
    std::vector<double> col;
    for (std::size_t i = 0; i < k; ++i) {
        detail::phi_column(r, points[i], count, col);
        for (std::size_t j = 0; j < count; ++j)
            phis(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = col[j];
    }
    return phis.transpose() * phis;
}

/// Correlation determinant det K(t_i, t_j); tiny numerical negatives are
/// clipped, anything below -1e-6 is a precision failure.
inline double correlation_det(const RecurrenceTable& r, const std::vector<double>& points) {
    if (points.empty()) throw DomainError("correlation_det: need at least one point");
    const Eigen::MatrixXd gram = kernel_gram(r, points);
    double det = gram.partialPivLu().determinant();
    if (points.size() == 1) det = gram(0, 0);
    if (det < -1e-6) throw PrecisionError("correlation_det: determinant below -1e-6");
    return det < 0.0 ? 0.0 : det;
}

/// sup over an unfolded grid of |K(F^{-1}(t/N), F^{-1}(s/N)) / (N mu(..t))
/// - S(t-s)|, the finite-N distance to the sine kernel.
inline double unfolded_kernel_error(const RecurrenceTable& r, const EquilibriumMeasure& m,
                                    const Interval& window, std::size_t grid) {
    if (grid < 2) throw DomainError("unfolded_kernel_error: grid must be >= 2");
    const double nd = static_cast<double>(r.n);
    if (!(window.lo >= 0.0 && window.hi <= nd))
        throw DomainError("unfolded_kernel_error: window must lie in [0, N]");
    if (std::min(window.lo, nd - window.hi) < 0.05 * nd)
        throw DomainError("unfolded_kernel_error: window too close to the spectrum edges");

    std::vector<double> u(grid), phys(grid), dens(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        u[i] = window.lo + window.length() * static_cast<double>(i) /
                               static_cast<double>(grid - 1);
        phys[i] = cdf_inverse(m, u[i] / nd);
        dens[i] = m.density(phys[i]);
        if (!(dens[i] > 0.0))
            throw DomainError("unfolded_kernel_error: density vanishes inside the window");
    }
    const Eigen::MatrixXd gram = kernel_gram(r, phys);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        for (std::size_t j = 0; j < grid; ++j) {
            const double rescaled =
                gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) /
                (nd * dens[i]);
            sup = std::max(sup, std::abs(rescaled - sine_kernel(u[i] - u[j])));
        }
    }
    return sup;
}

} // namespace spacinglab
