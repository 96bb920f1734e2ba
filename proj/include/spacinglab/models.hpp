#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spacinglab/errors.hpp"
#include "spacinglab/util.hpp"

namespace spacinglab {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PotentialKind { polynomial };

/// Polynomial confinement field V (or external field f, or repulsive Q) on
/// an interval J = [lower, upper], possibly unbounded.
struct Potential {
    PotentialKind kind = PotentialKind::polynomial;
    std::vector<double> coeffs; // ascending degree
    double lower = -kInf;
    double upper = kInf;

    static Potential polynomial(std::vector<double> c, double lo = -kInf, double hi = kInf) {
        Potential p;
        p.coeffs = std::move(c);
        p.lower = lo;
        p.upper = hi;
        while (p.coeffs.size() > 1 && p.coeffs.back() == 0.0) p.coeffs.pop_back();
        if (p.coeffs.empty()) p.coeffs.push_back(0.0);
        return p;
    }

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool unbounded() const { return std::isinf(lower) || std::isinf(upper); }

    bool contains(double t) const { return t >= lower && t <= upper; }

    bool is_even() const {
        for (std::size_t j = 1; j < coeffs.size(); j += 2)
            if (coeffs[j] != 0.0) return false;
        return true;
    }
};

/// Horner evaluation of V, V' or V''.
inline double eval_potential(const Potential& p, double t, int derivative_order = 0) {
    if (derivative_order < 0 || derivative_order > 2)
        throw DomainError("eval_potential: derivative order must be 0, 1 or 2");
    if (!p.contains(t)) throw DomainError("eval_potential: point outside domain J");
    const int n = static_cast<int>(p.coeffs.size());
    double acc = 0.0;
    switch (derivative_order) {
        case 0:
            for (int k = n - 1; k >= 0; --k) acc = acc * t + p.coeffs[k];
            return acc;
        case 1:
            for (int k = n - 1; k >= 1; --k) acc = acc * t + static_cast<double>(k) * p.coeffs[k];
            return acc;
        default:
            for (int k = n - 1; k >= 2; --k)
                acc = acc * t + static_cast<double>(k) * static_cast<double>(k - 1) * p.coeffs[k];
            return acc;
    }
}

/// Gaussian pair interaction h(t) = gamma * exp(-t^2 / (2 w^2)).
struct Interaction {
    double gamma = 0.0;
    double width = 1.0;

    static Interaction gaussian(double gamma, double width) {
        if (!(width > 0.0)) throw DomainError("Interaction: width must be positive");
        Interaction h;
        h.gamma = gamma;
        h.width = width;
        return h;
    }

    /// The Fourier transform of a Gaussian is positive, so h is
    /// negative-definite exactly when gamma < 0.
    bool negative_definite() const { return gamma < 0.0; }
    bool is_zero() const { return gamma == 0.0; }
};

inline double eval_interaction(const Interaction& h, double t, int derivative_order = 0) {
    if (derivative_order < 0 || derivative_order > 2)
        throw DomainError("eval_interaction: derivative order must be 0, 1 or 2");
    const double w2 = h.width * h.width;
    const double e = std::exp(-t * t / (2.0 * w2));
    switch (derivative_order) {
        case 0:
            return h.gamma * e;
        case 1:
            return h.gamma * (-t / w2) * e;
        default:
            return h.gamma * (t * t / (w2 * w2) - 1.0 / w2) * e;
    }
}

/// Outcome of the standing-assumption checks on a confinement field.
struct AssumptionReport {
    double grid_radius = 0.0;
    std::size_t grid_points = 0;
    double min_second_derivative = 0.0;
    double min_location = 0.0;
    bool second_derivative_positive = false; // clause (2)
    bool derivative_strictly_increasing = false; // clause (2'), valid when f = 0
    bool confinement_ok = false; // clause (3): growth at infinity when J unbounded
    bool field_dominates_warning = false; // |f| exceeds |V| somewhere on the grid

    bool passed() const {
        return confinement_ok && (second_derivative_positive || derivative_strictly_increasing);
    }
};

/// Samples V'' and V' on a grid over J intersected with [-R, R]. The grid
/// always contains the midpoint so symmetric degeneracies (e.g. V''(0) = 0
/// for t^4) are caught.
inline AssumptionReport check_assumptions(const Potential& p, double grid_radius = 20.0,
                                          std::size_t grid_points = 10000,
                                          const Potential* field = nullptr) {
    if (grid_points < 2) throw DomainError("check_assumptions: need at least 2 grid points");
    AssumptionReport rep;
    rep.grid_radius = grid_radius;
    rep.grid_points = grid_points;

    const double lo = std::max(p.lower, -grid_radius);
    const double hi = std::min(p.upper, grid_radius);
    std::vector<double> grid = linspace(lo, hi, grid_points);
    const double mid = 0.5 * (lo + hi);
    const double spacing = (hi - lo) / static_cast<double>(grid_points - 1);
    bool mid_present = false;
    for (double t : grid)
        if (std::abs(t - mid) < 0.25 * spacing) mid_present = true;
    if (!mid_present) grid.push_back(mid);

    rep.min_second_derivative = kInf;
    bool increasing = true;
    double prev_d1 = -kInf;
    double max_abs_v = 0.0, max_abs_f = 0.0;
    std::sort(grid.begin(), grid.end());
    for (double t : grid) {
        const double d2 = eval_potential(p, t, 2);
        if (d2 < rep.min_second_derivative) {
            rep.min_second_derivative = d2;
            rep.min_location = t;
        }
        const double d1 = eval_potential(p, t, 1);
        if (d1 <= prev_d1) increasing = false;
        prev_d1 = d1;
        max_abs_v = std::max(max_abs_v, std::abs(eval_potential(p, t, 0)));
        if (field) max_abs_f = std::max(max_abs_f, std::abs(eval_potential(*field, t, 0)));
    }
    rep.second_derivative_positive = rep.min_second_derivative > 0.0;
    rep.derivative_strictly_increasing = increasing;

    if (p.unbounded()) {
        const int d = p.degree();
        rep.confinement_ok = d >= 2 && d % 2 == 0 && p.coeffs.back() > 0.0;
    } else {
        rep.confinement_ok = true;
    }
    rep.field_dominates_warning = field && max_abs_f > std::max(max_abs_v, 1.0);
    return rep;
}

/// A full model specification: invariant (V, f) or repulsive (Q, h).
struct ModelSpec {
    std::string tag = "model";
    Potential confinement; // V for invariant ensembles, Q for repulsive ones
    std::optional<Potential> field; // f, invariant ensembles only
    std::optional<Interaction> interaction; // h, repulsive ensembles only

    bool repulsive() const { return interaction.has_value() && !interaction->is_zero(); }

    bool is_gaussian_v() const {
        // V(t) = t^2 with f = 0 on the whole line: the exactly samplable case.
        return !repulsive() && !field.has_value() && std::isinf(confinement.lower) &&
               std::isinf(confinement.upper) && confinement.coeffs.size() == 3 &&
               confinement.coeffs[0] == 0.0 && confinement.coeffs[1] == 0.0 &&
               confinement.coeffs[2] == 1.0;
    }
};

} // namespace spacinglab
