#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spacinglab/configuration.hpp"
#include "spacinglab/errors.hpp"
#include "spacinglab/interpolation.hpp"
#include "spacinglab/models.hpp"
#include "spacinglab/quadrature.hpp"

namespace spacinglab {

// ---------------------------------------------------------------------------
// Support endpoints (Mhaskar–Rakhmanov–Saff numbers)
// ---------------------------------------------------------------------------

namespace detail {

/// Both endpoint integrals under t = lambda(cos(theta)), which removes the
/// square-root endpoint singularity; the integrands become trigonometric
/// polynomials for polynomial V, so the trapezoid rule is exact-grade.
inline std::pair<double, double> mrs_integrals(const Potential& p, double a, double b,
                                               std::size_t panels) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto f1 = [&](double th) { return eval_potential(p, mid + half * std::cos(th), 1); };
    auto f2 = [&](double th) {
        const double t = mid + half * std::cos(th);
        return t * eval_potential(p, t, 1);
    };
    return {trapezoid_0_pi(f1, panels), trapezoid_0_pi(f2, panels)};
}

} // namespace detail

/// Residuals of the two endpoint equations at (a, b): first integral and
/// (second integral - 2*pi).
inline std::pair<double, double> mrs_residual(const Potential& p, double a, double b,
                                              std::size_t panels = 256) {
    auto [i1, i2] = detail::mrs_integrals(p, a, b, panels);
    return {i1, i2 - 2.0 * std::numbers::pi};
}

/// Solves the endpoint equations by Newton iteration with an analytic
/// Jacobian (differentiation under the integral sign).
inline std::pair<double, double> mrs_endpoints(const Potential& p, double tol = 1e-10,
                                               std::size_t panels = 256, int max_iter = 80) {
    if (!(tol > 0.0)) throw DomainError("mrs_endpoints: tol must be positive");

    // Initial bracket around the minimizer of V.
    const double scan_lo = std::max(p.lower, -20.0);
    const double scan_hi = std::min(p.upper, 20.0);
    double t_min = scan_lo, v_min = eval_potential(p, scan_lo, 0);
    for (int i = 1; i <= 512; ++i) {
        const double t = scan_lo + (scan_hi - scan_lo) * static_cast<double>(i) / 512.0;
        const double v = eval_potential(p, t, 0);
        if (v < v_min) {
            v_min = v;
            t_min = t;
        }
    }
    double a = t_min - 1.0, b = t_min + 1.0;
    if (a <= p.lower) a = 0.75 * p.lower + 0.25 * t_min;
    if (b >= p.upper) b = 0.75 * p.upper + 0.25 * t_min;

    double res = kInf;
    for (int iter = 0; iter < max_iter; ++iter) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        auto [i1, i2] = detail::mrs_integrals(p, a, b, panels);
        const double f1 = i1;
        const double f2 = i2 - 2.0 * std::numbers::pi;
        res = std::max(std::abs(f1), std::abs(f2));
        if (res < tol) {
            if (!(a > p.lower && b < p.upper))
                throw SolveError("mrs_endpoints: support touches the domain boundary", res);
            return {a, b};
        }

        // d lambda / da = (1 - cos)/2, d lambda / db = (1 + cos)/2.
        auto j11f = [&](double th) {
            const double c = std::cos(th);
            return eval_potential(p, mid + half * c, 2) * 0.5 * (1.0 - c);
        };
        auto j12f = [&](double th) {
            const double c = std::cos(th);
            return eval_potential(p, mid + half * c, 2) * 0.5 * (1.0 + c);
        };
        auto j21f = [&](double th) {
            const double c = std::cos(th);
            const double t = mid + half * c;
            return (eval_potential(p, t, 1) + t * eval_potential(p, t, 2)) * 0.5 * (1.0 - c);
        };
        auto j22f = [&](double th) {
            const double c = std::cos(th);
            const double t = mid + half * c;
            return (eval_potential(p, t, 1) + t * eval_potential(p, t, 2)) * 0.5 * (1.0 + c);
        };
        const double j11 = trapezoid_0_pi(j11f, panels);
        const double j12 = trapezoid_0_pi(j12f, panels);
        const double j21 = trapezoid_0_pi(j21f, panels);
        const double j22 = trapezoid_0_pi(j22f, panels);
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det))
            throw SolveError("mrs_endpoints: singular Newton system", res);
        double da = -(j22 * f1 - j12 * f2) / det;
        double db = -(-j21 * f1 + j11 * f2) / det;

        // Keep the interval ordered and inside J.
        const double cap = 0.45 * (b - a);
        da = std::clamp(da, -cap, cap);
        db = std::clamp(db, -cap, cap);
        a += da;
        b += db;
        if (a <= p.lower) a = 0.5 * (p.lower + (a - da));
        if (b >= p.upper) b = 0.5 * (p.upper + (b - db));
    }
    throw SolveError("mrs_endpoints: no convergence", res);
}

// ---------------------------------------------------------------------------
// Rescaled equilibrium density on [-1, 1]
// ---------------------------------------------------------------------------

namespace detail {

/// Divided difference of (V o lambda)' with the integral fallback near the
/// diagonal, where the difference quotient loses precision.
inline double h_v(const Potential& p, double mid, double half, double t, double x) {
    auto dv = [&](double s) { return half * eval_potential(p, mid + half * s, 1); };
    if (std::abs(t - x) >= 1e-6) return (dv(t) - dv(x)) / (t - x);
    // 5-point Gauss-Legendre on u in [0,1] of (V o lambda)''(x + u(t-x)).
    static const double gl_x[5] = {0.046910077030668, 0.230765344947158, 0.5,
                                   0.769234655052842, 0.953089922969332};
    static const double gl_w[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444,
                                   0.239314335249683, 0.118463442528095};
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double s = x + gl_x[i] * (t - x);
        acc += gl_w[i] * half * half * eval_potential(p, mid + half * s, 2);
    }
    return acc;
}

inline double g_v(const Potential& p, double mid, double half, double x, std::size_t m) {
    // Gauss-Chebyshev: (1/pi) * Int h(t,x)/sqrt(1-t^2) dt = (1/m) * Sum h(t_i, x).
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double t = std::cos((2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi /
                                  (2.0 * static_cast<double>(m)));
        acc += h_v(p, mid, half, t, x);
    }
    return acc / static_cast<double>(m);
}

} // namespace detail

/// Density of the equilibrium measure rescaled to support [-1, 1], sampled
/// at Chebyshev points.
inline std::vector<std::pair<double, double>> rescaled_density(const Potential& p, double a,
                                                               double b,
                                                               std::size_t n_nodes = 256,
                                                               double tol = 1e-9) {
    if (n_nodes < 4) throw DomainError("rescaled_density: need at least 4 nodes");
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const std::size_t m = std::max<std::size_t>(64, 4 * (static_cast<std::size_t>(p.degree()) + 1));
    std::vector<std::pair<double, double>> nodes(n_nodes);
    const auto xs = chebyshev_nodes(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double x = xs[i];
        const double g = detail::g_v(p, mid, half, x, m);
        double rho = std::sqrt(1.0 - x * x) * g / (2.0 * std::numbers::pi);
        if (rho < -tol)
            throw DensityNegativeError(
                "rescaled_density: negative density; check convexity and endpoints");
        if (rho < 0.0) rho = 0.0;
        nodes[i] = {x, rho};
    }
    return nodes;
}

// ---------------------------------------------------------------------------
// Equilibrium measure with CDF machinery
// ---------------------------------------------------------------------------

struct EquilibriumMeasure {
    double a = 0.0;
    double b = 0.0;
    std::vector<std::pair<double, double>> density_nodes; // (t, mu(t)) on [a,b]
    std::vector<std::pair<double, double>> cdf_nodes; // (t, F(t)) on [a,b]
    std::vector<std::pair<double, double>> rescaled; // (x, rho(x)) on [-1,1]
    double mass = 1.0; // computed integral of the density before clamping

    PchipInterpolant density_interp;
    PchipInterpolant cdf_interp;

    double density(double t) const {
        if (t <= a || t >= b) return 0.0;
        const double v = density_interp(t);
        return v > 0.0 ? v : 0.0;
    }
};

/// Builds the measure for a potential: endpoints, density on a Chebyshev
/// grid, and the CDF. The CDF comes from the Chebyshev expansion of the
/// smooth density factor, integrated term by term against sqrt(1-x^2)
/// (Clenshaw–Curtis weights in the cosine variable), so node values are
/// exact-grade for polynomial V.
inline EquilibriumMeasure build_measure(const Potential& p, std::size_t n_nodes = 256,
                                        double tol = 1e-10) {
    EquilibriumMeasure m;
    auto [a, b] = mrs_endpoints(p, tol);
    m.a = a;
    m.b = b;
    m.rescaled = rescaled_density(p, a, b, n_nodes);

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    // Chebyshev coefficients of the smooth factor G(x) = 2*pi*rho(x)/sqrt(1-x^2).
    const std::size_t n = n_nodes;
    std::vector<double> gvals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& [x, rho] = m.rescaled[i];
        gvals[i] = 2.0 * std::numbers::pi * rho / std::sqrt(1.0 - x * x);
    }
    const std::size_t n_coeff =
        std::min(n, static_cast<std::size_t>(std::max(1, p.degree() - 1)) + 4);
    std::vector<double> coeff(n_coeff, 0.0);
    for (std::size_t k = 0; k < n_coeff; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // Nodes are ascending: x_i = cos((2(n-1-i)+1) pi / 2n).
            const double theta = (2.0 * static_cast<double>(n - 1 - i) + 1.0) *
                                 std::numbers::pi / (2.0 * static_cast<double>(n));
            s += gvals[i] * std::cos(static_cast<double>(k) * theta);
        }
        coeff[k] = 2.0 * s / static_cast<double>(n);
    }
    coeff[0] *= 0.5;

    // Antiderivative of sin^2(theta) * G(cos(theta)) in theta.
    auto phi = [&](double theta) {
        auto cint = [&](int mm) {
            return mm == 0 ? theta : std::sin(static_cast<double>(mm) * theta) /
                                         static_cast<double>(mm);
        };
        double acc = 0.0;
        for (std::size_t k = 0; k < n_coeff; ++k) {
            const int ki = static_cast<int>(k);
            acc += coeff[k] * (0.5 * cint(ki) - 0.25 * (cint(ki + 2) + cint(std::abs(ki - 2))));
        }
        return acc;
    };
    const double phi_pi = phi(std::numbers::pi);
    const double phi_0 = phi(0.0);
    m.mass = (phi_pi - phi_0) / (2.0 * std::numbers::pi);

    std::vector<double> ts, fs, dens;
    ts.reserve(n + 2);
    fs.reserve(n + 2);
    dens.reserve(n + 2);
    ts.push_back(a);
    fs.push_back(0.0);
    dens.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& [x, rho] = m.rescaled[i];
        const double theta = std::acos(std::clamp(x, -1.0, 1.0));
        double f = (phi_pi - phi(theta)) / (2.0 * std::numbers::pi);
        f = std::clamp(f, 0.0, 1.0);
        ts.push_back(mid + half * x);
        fs.push_back(f);
        dens.push_back(rho / half);
    }
    ts.push_back(b);
    fs.push_back(1.0);
    dens.push_back(0.0);
    for (std::size_t i = 1; i < fs.size(); ++i) fs[i] = std::max(fs[i], fs[i - 1]);

    m.density_nodes.resize(ts.size());
    m.cdf_nodes.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        m.density_nodes[i] = {ts[i], dens[i]};
        m.cdf_nodes[i] = {ts[i], fs[i]};
    }
    m.density_interp = PchipInterpolant(ts, dens);
    m.cdf_interp = PchipInterpolant(std::move(ts), std::move(fs));
    return m;
}

inline double cdf(const EquilibriumMeasure& m, double t) {
    if (t <= m.a) return 0.0;
    if (t >= m.b) return 1.0;
    return std::clamp(m.cdf_interp(t), 0.0, 1.0);
}

/// Inverse CDF by bisection bracketing plus Newton with the density.
inline double cdf_inverse(const EquilibriumMeasure& m, double u) {
    if (u < 0.0 || u > 1.0) throw DomainError("cdf_inverse: u outside [0,1]");
    if (u <= 0.0) return m.a;
    if (u >= 1.0) return m.b;
    double lo = m.a, hi = m.b;
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = cdf(m, t) - u;
        if (std::abs(f) < 1e-12) return t;
        if (f > 0.0)
            hi = t;
        else
            lo = t;
        const double d = m.cdf_interp.derivative(t);
        double next = d > 0.0 ? t - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) < 1e-15 * (m.b - m.a)) return next;
        t = next;
    }
    return t;
}

/// Unfolded configuration: x~_i = N * F(x_i), clamped to [0, N] outside the
/// support (finite-N samples may exit the limiting support).
inline Configuration unfold(const EquilibriumMeasure& m, const Configuration& x) {
    std::vector<double> y(x.points.size());
    const double n = static_cast<double>(x.n);
    for (std::size_t i = 0; i < x.points.size(); ++i)
        y[i] = std::clamp(n * cdf(m, x.points[i]), 0.0, n);
    std::sort(y.begin(), y.end()); // F monotone; sort only guards rounding
    Configuration out = Configuration::make(std::move(y), x.model_tag, x.seed, x.sampler,
                                            /*strict=*/false);
    out.n = x.n;
    return out;
}

// ---------------------------------------------------------------------------
// Repulsive fixed point: mu = equilibrium measure of Q + h * mu
// ---------------------------------------------------------------------------

struct FixedPointResult {
    Potential effective_potential; // fitted polynomial for Q + h*mu
    std::vector<std::pair<double, double>> v_eff_table; // (t, Q + (h*mu)(t)) samples
    EquilibriumMeasure measure;
    std::vector<double> residual_history; // sup-density change per iteration
    int iterations = 0;
    double fit_residual = 0.0; // sup |fit - (Q + h*mu)| on the working interval
    double final_residual = 0.0;
};

namespace detail {

/// Least-squares polynomial fit on Chebyshev points of [lo, hi]; the fit is
/// done in the scaled variable and expanded back to monomials in t.
inline Potential fit_polynomial(const std::vector<double>& ts, const std::vector<double>& ys,
                                int degree, double lo, double hi, double* max_err = nullptr) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const int ncol = degree + 1;
    Eigen::MatrixXd A(ts.size(), ncol);
    Eigen::VectorXd rhs(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double u = (ts[i] - mid) / half;
        double pw = 1.0;
        for (int j = 0; j < ncol; ++j) {
            A(static_cast<Eigen::Index>(i), j) = pw;
            pw *= u;
        }
        rhs(static_cast<Eigen::Index>(i)) = ys[i];
    }
    Eigen::VectorXd cu = A.colPivHouseholderQr().solve(rhs);
    if (max_err) {
        *max_err = (A * cu - rhs).cwiseAbs().maxCoeff();
    }
    // Expand sum c_k ((t-mid)/half)^k into monomials of t.
    std::vector<double> ct(ncol, 0.0);
    std::vector<double> base{1.0}; // ((t-mid)/half)^k coefficients
    for (int k = 0; k < ncol; ++k) {
        for (int j = 0; j <= k; ++j) ct[static_cast<std::size_t>(j)] += cu(k) * base[static_cast<std::size_t>(j)];
        if (k + 1 < ncol) {
            // Multiply base by (t - mid)/half.
            std::vector<double> nb(base.size() + 1, 0.0);
            for (std::size_t j = 0; j < base.size(); ++j) {
                nb[j + 1] += base[j] / half;
                nb[j] += base[j] * (-mid / half);
            }
            base = std::move(nb);
        }
    }
    return Potential::polynomial(std::move(ct));
}

} // namespace detail

/// Density iterate for the self-consistent problem: support endpoints plus
/// the smooth factor g(x) = 2*pi*rho(x)/sqrt(1-x^2) at a fixed Chebyshev
/// grid. Working in this space keeps every iteration on the same nodes, so
/// the convergence residual is free of re-interpolation noise.
struct DensityIterate {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> g; // at chebyshev_nodes(g.size()), ascending

    static DensityIterate from_measure(const EquilibriumMeasure& m) {
        DensityIterate it;
        it.a = m.a;
        it.b = m.b;
        it.g.resize(m.rescaled.size());
        for (std::size_t i = 0; i < m.rescaled.size(); ++i) {
            const auto& [x, rho] = m.rescaled[i];
            it.g[i] = 2.0 * std::numbers::pi * rho / std::sqrt(1.0 - x * x);
        }
        return it;
    }

    double density_at_node(std::size_t i, const std::vector<double>& xs) const {
        return g[i] * std::sqrt(1.0 - xs[i] * xs[i]) / (std::numbers::pi * (b - a));
    }
};

struct RepulsiveStep {
    Potential effective_potential;
    std::vector<std::pair<double, double>> v_eff_table;
    EquilibriumMeasure measure;
    double fit_residual = 0.0;
};

/// One application of the map mu -> equilibrium measure of Q + h*mu. The
/// convolution is evaluated by second-kind Gauss-Chebyshev quadrature in the
/// rescaled variable (the sqrt(1-x^2) density factor is the quadrature
/// weight) and Q + h*mu is refit to a polynomial so the endpoint/density
/// machinery above is reused unchanged.
inline RepulsiveStep repulsive_step(const Potential& q, const Interaction& h,
                                    const DensityIterate& cur, int fit_degree,
                                    std::size_t conv_nodes, std::size_t density_nodes,
                                    double build_tol) {
    RepulsiveStep step;
    const auto xs = chebyshev_nodes(cur.g.size());
    PchipInterpolant g_interp(xs, cur.g);
    const double mid = 0.5 * (cur.a + cur.b);
    const double half = 0.5 * (cur.b - cur.a);

    // Second-kind Chebyshev rule for Int f(x) sqrt(1-x^2) dx.
    const std::size_t mq = conv_nodes;
    std::vector<double> un(mq), uw(mq);
    for (std::size_t j = 0; j < mq; ++j) {
        const double th = std::numbers::pi * static_cast<double>(j + 1) /
                          static_cast<double>(mq + 1);
        un[j] = std::cos(th);
        const double s = std::sin(th);
        uw[j] = std::numbers::pi / static_cast<double>(mq + 1) * s * s;
    }

    const double pad = std::max(1.0, 3.0 * h.width);
    const double w_lo = cur.a - pad;
    const double w_hi = cur.b + pad;
    const std::size_t n_fit = 256;
    std::vector<double> ts(n_fit), ys(n_fit);
    const auto fit_xs = chebyshev_nodes(n_fit);
    step.v_eff_table.reserve(n_fit);
    for (std::size_t i = 0; i < n_fit; ++i) {
        const double t = 0.5 * (w_lo + w_hi) + 0.5 * (w_hi - w_lo) * fit_xs[i];
        double convo = 0.0;
        if (!h.is_zero()) {
            for (std::size_t j = 0; j < mq; ++j)
                convo += uw[j] * eval_interaction(h, t - (mid + half * un[j]), 0) *
                         g_interp(un[j]);
            convo /= 2.0 * std::numbers::pi;
        }
        ts[i] = t;
        ys[i] = eval_potential(q, t, 0) + convo;
        step.v_eff_table.emplace_back(t, ys[i]);
    }
    step.effective_potential =
        detail::fit_polynomial(ts, ys, fit_degree, w_lo, w_hi, &step.fit_residual);
    step.measure = build_measure(step.effective_potential, density_nodes, build_tol);
    return step;
}

/// Damped self-consistent iteration for the limiting measure of a repulsive
/// particle system: mu_{k+1} = (1-damping) mu_k + damping * Phi(mu_k) with
/// Phi the map of repulsive_step. Stops when the sup-node density change
/// (plus endpoint movement) drops below tol.
inline FixedPointResult repulsive_fixed_point(const Potential& q, const Interaction& h,
                                              double damping = 0.5, double tol = 1e-8,
                                              int max_iter = 200, int fit_degree = 10,
                                              std::size_t conv_nodes = 512,
                                              std::size_t density_nodes = 256) {
    if (!(damping > 0.0 && damping <= 1.0))
        throw DomainError("repulsive_fixed_point: damping must be in (0,1]");
    if (!(tol > 0.0)) throw DomainError("repulsive_fixed_point: tol must be positive");

    const double build_tol = std::min(tol * 1e-2, 1e-10);
    FixedPointResult res;
    DensityIterate cur = DensityIterate::from_measure(build_measure(q, density_nodes, build_tol));
    const auto xs = chebyshev_nodes(cur.g.size());

    for (int iter = 1; iter <= max_iter; ++iter) {
        RepulsiveStep step =
            repulsive_step(q, h, cur, fit_degree, conv_nodes, density_nodes, build_tol);
        DensityIterate next = DensityIterate::from_measure(step.measure);

        double delta = std::max(std::abs(next.a - cur.a), std::abs(next.b - cur.b));
        for (std::size_t i = 0; i < cur.g.size(); ++i)
            delta = std::max(delta,
                             std::abs(next.density_at_node(i, xs) - cur.density_at_node(i, xs)));
        res.residual_history.push_back(delta);
        res.iterations = iter;
        if (delta < tol) {
            res.final_residual = delta;
            res.effective_potential = step.effective_potential;
            res.v_eff_table = std::move(step.v_eff_table);
            res.fit_residual = step.fit_residual;
            res.measure = std::move(step.measure);
            return res;
        }

        cur.a = (1.0 - damping) * cur.a + damping * next.a;
        cur.b = (1.0 - damping) * cur.b + damping * next.b;
        for (std::size_t i = 0; i < cur.g.size(); ++i)
            cur.g[i] = (1.0 - damping) * cur.g[i] + damping * next.g[i];
    }
    throw FixedPointError("repulsive_fixed_point: no convergence", res.residual_history);
}

} // namespace spacinglab
