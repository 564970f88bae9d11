#pragma once

// Skew Brownian motion with transmission parameter alpha: Brownian motion
// whose excursions away from 0 are positive with probability alpha.
//
// Steps are exact in law. From x > 0 the Brownian increment either avoids 0
// (then it is kept) or touches 0, after which its modulus is kept and the
// sign is redrawn: + with probability alpha. Negative starts are mirrored.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "interface_lab/errors.hpp"
#include "interface_lab/medium.hpp"
#include "interface_lab/rng.hpp"

namespace interface_lab {

namespace detail {

inline double gauss_kernel(double u, double t) noexcept {
    return std::exp(-u * u / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

inline double std_normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline void check_alpha_dt(double alpha, double dt) {
    detail::require_open_unit(alpha, "alpha");
    detail::require_positive(dt, "dt");
}

inline void check_density_args(double alpha, double x, double t, double y) {
    detail::require_open_unit(alpha, "alpha");
    detail::require_positive(t, "t");
    detail::require_finite(x, "x");
    if (std::isnan(y)) throw DomainError("y", "must not be NaN");
}

}  // namespace detail

/// p_t(x, y) for skew Brownian motion.
inline double transition_density(double alpha, double x, double t, double y) {
    detail::check_density_args(alpha, x, t, y);
    if (x < 0.0) return transition_density(1.0 - alpha, -x, t, -y);
    if (y >= 0.0) return detail::gauss_kernel(y - x, t) + (2.0 * alpha - 1.0) * detail::gauss_kernel(y + x, t);
    return 2.0 * (1.0 - alpha) * detail::gauss_kernel(y - x, t);
}

/// P_x(B_t <= y), the integral of transition_density over (-inf, y].
inline double transition_cdf(double alpha, double x, double t, double y) {
    detail::check_density_args(alpha, x, t, y);
    if (x < 0.0) return 1.0 - transition_cdf(1.0 - alpha, -x, t, -y);
    const double sd = std::sqrt(t);
    using detail::std_normal_cdf;
    if (y < 0.0) return 2.0 * (1.0 - alpha) * std_normal_cdf((y - x) / sd);
    const double below_zero = 2.0 * (1.0 - alpha) * std_normal_cdf(-x / sd);
    return below_zero + (std_normal_cdf((y - x) / sd) - std_normal_cdf(-x / sd)) +
           (2.0 * alpha - 1.0) * (std_normal_cdf((y + x) / sd) - std_normal_cdf(x / sd));
}

/// Probability that a standard Brownian bridge from x_start to x_end over
/// time dt stays away from `level`. Both endpoints must lie strictly on the
/// same side of the level.
inline double bridge_no_hit_prob(double x_start, double x_end, double dt, double level) {
    detail::require_positive(dt, "dt");
    const double a = x_start - level;
    const double b = x_end - level;
    if (!(a * b > 0.0)) throw DomainError("x_end", "bridge endpoints straddle or touch the level");
    return -std::expm1(-2.0 * a * b / dt);
}

/// One exact step of skew Brownian motion of length dt from x.
/// Callers are expected to have validated alpha and dt.
inline double step_unchecked(double alpha, double x, double dt, double sqrt_dt, RngStream& rng) noexcept {
    const double w = x + sqrt_dt * rng.normal();
    if (x != 0.0 && (w > 0.0) == (x > 0.0) && w != 0.0) {
        const double exponent = 2.0 * x * w / dt;
        // exp(-40) is far below the 53-bit resolution of uniform().
        if (exponent > 40.0 || rng.uniform() >= std::exp(-exponent)) return w;
    }
    return rng.uniform() < alpha ? std::abs(w) : -std::abs(w);
}

inline double step(double alpha, double x, double dt, RngStream& rng) {
    detail::check_alpha_dt(alpha, dt);
    detail::require_finite(x, "x");
    return step_unchecked(alpha, x, dt, std::sqrt(dt), rng);
}

/// Uniformly sampled skew Brownian trajectory in X coordinates.
struct SkewPath {
    double alpha;
    double x0;
    double dt;
    std::vector<double> x_values;

    std::size_t size() const noexcept { return x_values.size(); }
    double time_at(std::size_t i) const noexcept { return static_cast<double>(i) * dt; }
    double horizon() const noexcept { return time_at(x_values.size() - 1); }

    /// Y view through the scaling map of `medium`.
    std::vector<double> y_values(const TwoSidedMedium& medium) const {
        std::vector<double> y;
        y.reserve(x_values.size());
        for (double x : x_values) y.push_back(scale(medium, x));
        return y;
    }
};

inline constexpr std::size_t kDefaultMaxPathPoints = std::size_t{1} << 26;

/// Number of grid steps covering [0, t_max] at spacing dt, i.e. ceil(t_max/dt)
/// with a relative slack so that t_max = k * dt in decimal does not round up.
inline std::size_t step_count(double t_max, double dt) {
    detail::require_positive(dt, "dt");
    detail::require_positive(t_max, "t_max");
    if (t_max < dt * (1.0 - 1e-12)) throw DomainError("t_max", "must be >= dt");
    return static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
}

inline SkewPath sample_path(double alpha, double x0, double dt, double t_max, RngStream& rng,
                            std::size_t max_points = kDefaultMaxPathPoints) {
    detail::check_alpha_dt(alpha, dt);
    detail::require_finite(x0, "x0");
    const std::size_t n = step_count(t_max, dt);
    if (n + 1 > max_points) throw ResourceError("path would exceed the configured point cap");
    SkewPath path{alpha, x0, dt, {}};
    path.x_values.reserve(n + 1);
    path.x_values.push_back(x0);
    const double sqrt_dt = std::sqrt(dt);
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        x = step_unchecked(alpha, x, dt, sqrt_dt, rng);
        path.x_values.push_back(x);
    }
    return path;
}

/// The physical diffusion Y = s(B^alpha*) started at y0 (Y coordinate).
/// `alpha_override`, when positive, replaces alpha* (used for discrepancy runs).
inline SkewPath physical_path(const TwoSidedMedium& medium, double y0, double dt, double t_max, RngStream& rng,
                              double alpha_override = 0.0) {
    const double alpha = alpha_override > 0.0 ? alpha_override : medium.alpha_star();
    return sample_path(alpha, unscale(medium, y0), dt, t_max, rng);
}

}  // namespace interface_lab
