#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spacinglab/errors.hpp"
#include "spacinglab/interpolation.hpp"
#include "spacinglab/io.hpp"
#include "spacinglab/quadrature.hpp"
#include "spacinglab/util.hpp"

namespace spacinglab {

/// Sine kernel S(d) = sin(pi d)/(pi d); the removable singularity is handled
/// by its Taylor series.
inline double sine_kernel(double d) {
    const double z = std::numbers::pi * d;
    if (std::abs(d) < 1e-8) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

/// det[S(t_i - t_j)] by pivoted LU.
inline double sine_det(const std::vector<double>& points) {
    const std::size_t k = points.size();
    if (k == 0) throw DomainError("sine_det: need at least one point");
    if (k == 1) return 1.0;
    Eigen::MatrixXd m(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                sine_kernel(points[i] - points[j]);
    return m.partialPivLu().determinant();
}

/// Gap probability E(s) = det(I - S) on L^2((0,s)) by Nystrom discretization
/// on Gauss-Legendre nodes.
inline double gap_probability(double s, std::size_t m = 40) {
    if (s < 0.0) throw DomainError("gap_probability: s must be nonnegative");
    if (m < 4) throw DomainError("gap_probability: quadrature order must be >= 4");
    if (s == 0.0) return 1.0;
    static thread_local std::size_t cached_m = 0;
    static thread_local QuadratureRule cached;
    if (cached_m != m) {
        cached = gauss_legendre(m);
        cached_m = m;
    }
    const QuadratureRule rule = cached.mapped(0.0, s);
    Eigen::MatrixXd a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const double swi = std::sqrt(rule.weights[i]);
        for (std::size_t j = 0; j < m; ++j) {
            const double swj = std::sqrt(rule.weights[j]);
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (i == j ? 1.0 : 0.0) -
                swi * sine_kernel(rule.nodes[i] - rule.nodes[j]) * swj;
        }
    }
    return a.partialPivLu().determinant();
}

/// Tabulated Gaudin distribution function together with the gap probability
/// it was derived from.
struct GaudinTable {
    double s_max = 5.0;
    double step = 0.005;
    std::size_t order = 40; // Nystrom quadrature order
    std::vector<double> s_grid;
    std::vector<double> e_values;
    std::vector<double> g_values;

    PchipInterpolant g_interp;
};

/// E on a uniform grid, then G = 1 + E' with a 5-point finite-difference
/// stencil; G is clamped to [0,1] and monotonized by running maximum.
/// Monotonization beyond 1e-6 signals an inadequate grid or order.
inline GaudinTable build_gaudin_table(double s_max = 5.0, double step = 0.005,
                                      std::size_t order = 40) {
    if (!(step > 0.0)) throw DomainError("build_gaudin_table: step must be positive");
    if (!(s_max > 4.0 * step)) throw DomainError("build_gaudin_table: s_max too small");
    GaudinTable t;
    t.s_max = s_max;
    t.step = step;
    t.order = order;
    const std::size_t n = static_cast<std::size_t>(std::floor(s_max / step + 0.5)) + 1;
    t.s_grid.resize(n);
    t.e_values.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.s_grid[i] = step * static_cast<double>(i);
    parallel_for(n, [&](std::size_t i) { t.e_values[i] = gap_probability(t.s_grid[i], order); });

    // 5-point first derivative (one-sided at the boundaries).
    t.g_values.resize(n);
    const auto& e = t.e_values;
    auto deriv = [&](std::size_t i) -> double {
        const double h = step;
        if (i >= 2 && i + 2 < n)
            return (e[i - 2] - 8.0 * e[i - 1] + 8.0 * e[i + 1] - e[i + 2]) / (12.0 * h);
        if (i < 2)
            return (-25.0 * e[i] + 48.0 * e[i + 1] - 36.0 * e[i + 2] + 16.0 * e[i + 3] -
                    3.0 * e[i + 4]) /
                   (12.0 * h);
        return (25.0 * e[i] - 48.0 * e[i - 1] + 36.0 * e[i - 2] - 16.0 * e[i - 3] +
                3.0 * e[i - 4]) /
               (12.0 * h);
    };
    double max_correction = 0.0;
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double g = 1.0 + deriv(i);
        const double clamped = std::clamp(g, 0.0, 1.0);
        max_correction = std::max(max_correction, std::abs(clamped - g));
        g = std::max(clamped, running);
        max_correction = std::max(max_correction, g - clamped);
        running = g;
        t.g_values[i] = g;
    }
    if (max_correction > 1e-6)
        throw NumericalError("build_gaudin_table: monotonization correction " +
                             format_double(max_correction) + " exceeds 1e-6");
    t.g_interp = PchipInterpolant(t.s_grid, t.g_values);
    return t;
}

/// G(s) by monotone interpolation; beyond the table G = 1 (sub-Gaussian tail).
inline double gaudin_eval(const GaudinTable& t, double s) {
    if (s < 0.0) throw DomainError("gaudin_eval: s must be nonnegative");
    if (s >= t.s_max) return 1.0;
    return std::clamp(t.g_interp(s), 0.0, 1.0);
}

/// Truncated defining series of G: sum_{k=2}^{k_max} (-1)^k/(k-1)! times the
/// [0,s]^{k-1} integral of det S_k pinned at z_1 = 0, by tensor-product
/// Gauss-Legendre with 12 points per axis.
inline double gaudin_series_truncated(double s, int k_max) {
    if (s < 0.0) throw DomainError("gaudin_series_truncated: s must be nonnegative");
    if (k_max < 2) throw DomainError("gaudin_series_truncated: k_max must be >= 2");
    if (k_max > 5) throw ComplexityError("gaudin_series_truncated: k_max > 5 (cost grows as 12^k)");
    if (s == 0.0) return 0.0;
    static const QuadratureRule base = gauss_legendre(12);
    const QuadratureRule rule = base.mapped(0.0, s);
    const std::size_t q = rule.nodes.size();

    double total = 0.0;
    double factorial = 1.0; // (k-1)!
    for (int k = 2; k <= k_max; ++k) {
        factorial *= static_cast<double>(k - 1);
        const int dim = k - 1;
        std::vector<std::size_t> idx(dim, 0);
        std::vector<double> pts(k, 0.0); // z_1 pinned at 0
        double integral = 0.0;
        for (;;) {
            double w = 1.0;
            for (int d = 0; d < dim; ++d) {
                pts[static_cast<std::size_t>(d) + 1] = rule.nodes[idx[static_cast<std::size_t>(d)]];
                w *= rule.weights[idx[static_cast<std::size_t>(d)]];
            }
            integral += w * sine_det(pts);
            int d = 0;
            for (; d < dim; ++d) {
                if (++idx[static_cast<std::size_t>(d)] < q) break;
                idx[static_cast<std::size_t>(d)] = 0;
            }
            if (d == dim) break;
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        total += sign / factorial * integral;
    }
    return total;
}

/// Normalized Wigner surmise p2(s) = (32/pi^2) s^2 exp(-4 s^2/pi); unit mass
/// and unit mean.
inline double wigner_surmise(double s) {
    if (s < 0.0) throw DomainError("wigner_surmise: s must be nonnegative");
    return 32.0 / (std::numbers::pi * std::numbers::pi) * s * s *
           std::exp(-4.0 * s * s / std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Disk cache
// ---------------------------------------------------------------------------

inline void save_gaudin_table(const GaudinTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write gaudin table '" + path + "'", 0);
    out << "gaudin-table v1 smax=" << format_double(t.s_max) << " step=" << format_double(t.step)
        << " m=" << t.order << "\n";
    for (std::size_t i = 0; i < t.s_grid.size(); ++i)
        out << format_double(t.s_grid[i]) << "," << format_double(t.e_values[i]) << ","
            << format_double(t.g_values[i]) << "\n";
}

inline GaudinTable load_gaudin_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open gaudin table '" + path + "'", 0);
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty gaudin table", 1);
    std::istringstream hs(header);
    std::string magic, version, tok;
    hs >> magic >> version;
    if (magic != "gaudin-table" || version != "v1")
        throw ParseError("bad gaudin table header '" + header + "'", 1);
    GaudinTable t;
    bool have_smax = false, have_step = false, have_m = false;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("bad header token '" + tok + "'", 1);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "smax") {
            t.s_max = parse_real(val, 1);
            have_smax = true;
        } else if (key == "step") {
            t.step = parse_real(val, 1);
            have_step = true;
        } else if (key == "m") {
            t.order = static_cast<std::size_t>(parse_int(val, 1));
            have_m = true;
        } else {
            throw ParseError("unknown gaudin header key '" + key + "'", 1);
        }
    }
    if (!have_smax || !have_step || !have_m)
        throw ParseError("gaudin table header missing smax/step/m", 1);
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 3) throw ParseError("expected 's,E,G'", lineno);
        t.s_grid.push_back(parse_real(cols[0], lineno));
        t.e_values.push_back(parse_real(cols[1], lineno));
        t.g_values.push_back(parse_real(cols[2], lineno));
    }
    if (t.s_grid.size() < 5) throw ParseError("gaudin table has too few rows", lineno);
    t.g_interp = PchipInterpolant(t.s_grid, t.g_values);
    return t;
}

/// Loads a matching cached table or builds and saves one. `rebuilt` reports
/// whether construction ran.
inline GaudinTable cached_gaudin_table(double s_max, double step, std::size_t order,
                                       const std::string& cache_path, bool* rebuilt = nullptr) {
    std::ifstream probe(cache_path);
    if (probe) {
        probe.close();
        try {
            GaudinTable t = load_gaudin_table(cache_path);
            if (t.s_max == s_max && t.step == step && t.order == order) {
                if (rebuilt) *rebuilt = false;
                return t;
            }
        } catch (const ParseError&) {
            // fall through to rebuild
        }
    }
    GaudinTable t = build_gaudin_table(s_max, step, order);
    save_gaudin_table(t, cache_path);
    if (rebuilt) *rebuilt = true;
    return t;
}

} // namespace spacinglab
