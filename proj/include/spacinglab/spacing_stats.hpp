#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "spacinglab/equilibrium.hpp"
#include "spacinglab/errors.hpp"
#include "spacinglab/gaudin.hpp"

namespace spacinglab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double t) const { return t >= lo && t <= hi; } // closed on both sides
};

enum class IntervalMode { quantile_window, full, localized };

struct IntervalSpec {
    IntervalMode mode = IntervalMode::full;
    double lower_fraction = 0.0, upper_fraction = 1.0; // quantile_window
    double center = 0.0, half_length = 0.0; // localized

    static IntervalSpec quantile(double lo, double hi) {
        if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
            throw DomainError("IntervalSpec: need 0 <= lo < hi <= 1");
        IntervalSpec s;
        s.mode = IntervalMode::quantile_window;
        s.lower_fraction = lo;
        s.upper_fraction = hi;
        return s;
    }
    static IntervalSpec full() { return IntervalSpec{}; }
    static IntervalSpec localized(double center, double half_length) {
        if (!(half_length > 0.0)) throw DomainError("IntervalSpec: half_length must be positive");
        IntervalSpec s;
        s.mode = IntervalMode::localized;
        s.center = center;
        s.half_length = half_length;
        return s;
    }
};

/// Concrete window for n points: unfolded coordinates for quantile/full
/// mode, physical coordinates for localized mode.
inline Interval select_interval(const IntervalSpec& spec, std::size_t n,
                                const EquilibriumMeasure* m = nullptr) {
    const double nd = static_cast<double>(n);
    switch (spec.mode) {
        case IntervalMode::quantile_window:
            return {spec.lower_fraction * nd, spec.upper_fraction * nd};
        case IntervalMode::full:
            return {0.0, nd};
        case IntervalMode::localized: {
            if (m) {
                if (m->density(spec.center) <= 1e-6)
                    throw DomainError("select_interval: density vanishes at localized center");
            }
            return {spec.center - spec.half_length, spec.center + spec.half_length};
        }
    }
    throw DomainError("select_interval: unknown mode");
}

/// Nearest-neighbor spacings with both endpoints inside the interval.
inline std::vector<double> spacing_multiset(const Interval& i, const std::vector<double>& y) {
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < y.size(); ++j)
        if (i.contains(y[j]) && i.contains(y[j + 1])) out.push_back(y[j + 1] - y[j]);
    return out;
}

/// Right-continuous step function; each jump carries `jump_mass`. A
/// probability CDF uses 1/count; intensity estimates use 1/(R |I|) so the
/// total mass tracks (#spacings)/(R |I|).
struct EmpiricalCdf {
    std::vector<double> jumps; // sorted ascending, may repeat
    double jump_mass = 0.0;

    static EmpiricalCdf probability(std::vector<double> spacings) {
        if (spacings.empty())
            throw NoSpacingsError("empirical_spacing_cdf: empty spacing multiset");
        std::sort(spacings.begin(), spacings.end());
        EmpiricalCdf e;
        e.jump_mass = 1.0 / static_cast<double>(spacings.size());
        e.jumps = std::move(spacings);
        return e;
    }

    static EmpiricalCdf with_jump_mass(std::vector<double> spacings, double mass) {
        if (spacings.empty()) throw NoSpacingsError("EmpiricalCdf: empty spacing multiset");
        std::sort(spacings.begin(), spacings.end());
        EmpiricalCdf e;
        e.jump_mass = mass;
        e.jumps = std::move(spacings);
        return e;
    }

    std::size_t count() const { return jumps.size(); }
    double total_mass() const { return jump_mass * static_cast<double>(jumps.size()); }

    double value(double s) const {
        const auto it = std::upper_bound(jumps.begin(), jumps.end(), s);
        return jump_mass * static_cast<double>(it - jumps.begin());
    }
};

inline EmpiricalCdf empirical_spacing_cdf(std::vector<double> spacings) {
    return EmpiricalCdf::probability(std::move(spacings));
}

/// gamma^k mass: (1/|I|) #(k-subsets with spread <= s whose extremes lie in
/// I). Because I is an interval and y is sorted, a subset qualifies exactly
/// when its extreme pair does, so the count reduces to binomials over the
/// interior run; full brute force over subsets lives in the test oracles.
inline double gamma_k_mass(const Interval& i, const std::vector<double>& y, int k, double s) {
    if (k < 2) throw DomainError("gamma_k_mass: k must be >= 2");
    if (k > 8) throw ComplexityError("gamma_k_mass: k > 8 exceeds the combinatorial guard");
    if (!(i.length() > 0.0)) throw DomainError("gamma_k_mass: interval must have positive length");
    const std::size_t n = y.size();
    double count = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        if (!i.contains(y[a])) continue;
        for (std::size_t b = a + 1; b < n; ++b) {
            if (y[b] - y[a] > s) break;
            if (!i.contains(y[b])) continue;
            // choose k-2 interior indices from (a, b); the multiplicative
            // binomial is 0 when the gap is too small
            const double gap = static_cast<double>(b - a - 1);
            double binom = 1.0;
            for (int r = 0; r < k - 2 && binom != 0.0; ++r)
                binom *= std::max(gap - static_cast<double>(r), 0.0) / static_cast<double>(r + 1);
            count += binom;
        }
    }
    return count / i.length();
}

/// sup_s |ECDF(s) - G(s)|, evaluated from both sides at every jump and at
/// every table node between jumps, plus the s -> infinity limit.
inline double kolmogorov_distance(const EmpiricalCdf& e, const GaudinTable& g) {
    double sup = 0.0;
    std::size_t gi = 0; // next table node
    const auto& grid = g.s_grid;
    double level = 0.0;
    std::size_t j = 0;
    while (j < e.jumps.size()) {
        const double s = e.jumps[j];
        // multiplicity of this jump value
        std::size_t j2 = j;
        while (j2 < e.jumps.size() && e.jumps[j2] == s) ++j2;
        // table nodes strictly before the jump see the pre-jump level
        while (gi < grid.size() && grid[gi] < s) {
            sup = std::max(sup, std::abs(level - g.g_values[gi]));
            ++gi;
        }
        const double gs = s >= 0.0 ? gaudin_eval(g, s) : 0.0;
        sup = std::max(sup, std::abs(level - gs)); // pre-jump
        level += e.jump_mass * static_cast<double>(j2 - j);
        sup = std::max(sup, std::abs(level - gs)); // post-jump
        j = j2;
    }
    while (gi < grid.size()) {
        sup = std::max(sup, std::abs(level - g.g_values[gi]));
        ++gi;
    }
    sup = std::max(sup, std::abs(level - 1.0)); // s -> infinity
    return sup;
}

/// Localized statistic: keep the points inside the physical window, then
/// rescale by N mu(a). Spacings downstream are taken on the rescaled points.
inline std::vector<double> localized_rescale(const std::vector<double>& points,
                                             const Interval& window, std::size_t n,
                                             double mu_a) {
    if (!(mu_a > 0.0)) throw DomainError("localized_rescale: mu(a) must be positive");
    std::vector<double> out;
    const double scale = static_cast<double>(n) * mu_a;
    for (double t : points)
        if (window.contains(t)) out.push_back(scale * t);
    return out;
}

/// Monte Carlo estimate of the expected spacing measure over replicas,
/// normalized by R * |I|.
inline EmpiricalCdf intensity_cdf(const std::vector<std::vector<double>>& replica_spacings,
                                  double interval_length) {
    if (replica_spacings.empty()) throw DomainError("intensity_cdf: need at least one replica");
    if (!(interval_length > 0.0))
        throw DomainError("intensity_cdf: interval length must be positive");
    std::vector<double> pooled;
    for (const auto& r : replica_spacings) pooled.insert(pooled.end(), r.begin(), r.end());
    if (pooled.empty()) throw NoSpacingsError("intensity_cdf: all replicas empty");
    const double mass =
        1.0 / (static_cast<double>(replica_spacings.size()) * interval_length);
    return EmpiricalCdf::with_jump_mass(std::move(pooled), mass);
}

} // namespace spacinglab
