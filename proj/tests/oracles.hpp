#pragma once

// Test-only reference computations, written independently of the library
// code paths they are used to check.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double gauss(double u, double var) { return std::exp(-u * u / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var); }

inline double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Skew BM density built from the method of images: from x >= 0 the killed
/// density is g(y - x) - g(y + x), and the mass reaching 0 is spread as
/// 2 alpha g(y + x) on y > 0 and 2 (1 - alpha) g(y - x) on y < 0.
inline double skew_density(double alpha, double x, double t, double y) {
    if (x < 0) return skew_density(1.0 - alpha, -x, t, -y);
    if (y >= 0) return (gauss(y - x, t) - gauss(y + x, t)) + 2.0 * alpha * gauss(y + x, t);
    return 2.0 * (1.0 - alpha) * gauss(y - x, t);
}

/// One-sided limits of skew_density in y; they differ from it only at y = 0.
inline double skew_density_below(double alpha, double x, double t, double y) {
    return skew_density(alpha, x, t, y == 0.0 ? -0x1p-900 : y);
}
inline double skew_density_above(double alpha, double x, double t, double y) {
    return skew_density(alpha, x, t, y == 0.0 ? 0x1p-900 : y);
}

/// P(T > t) for standard Brownian motion at distance a from an absorbing level.
inline double bm_survival(double distance, double t) { return 2.0 * normal_cdf(distance / std::sqrt(t)) - 1.0; }

/// Heat solution of c_t = (D/2) c_yy from c0 = exp(-y^2 / (2 s0^2)).
inline double gaussian_heat(double y, double t, double d, double s0) {
    const double v = s0 * s0 + d * t;
    return std::sqrt(s0 * s0 / v) * std::exp(-y * y / (2.0 * v));
}

}  // namespace oracle
