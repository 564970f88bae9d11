#pragma once

// Two-sided medium: a dispersion coefficient that jumps at y = 0, together
// with the interface parameter lambda and the transmission parameter
// alpha* of the skew Brownian motion that realises it.
//
// Coordinates: X is the natural (skew Brownian) coordinate, Y = s(X) is the
// physical coordinate. The point 0 belongs to the plus side everywhere.

#include <cmath>

#include "interface_lab/errors.hpp"

namespace interface_lab {

class TwoSidedMedium {
public:
    double d_plus() const noexcept { return d_plus_; }
    double d_minus() const noexcept { return d_minus_; }
    double lambda() const noexcept { return lambda_; }
    double alpha_star() const noexcept { return alpha_star_; }
    double sqrt_d_plus() const noexcept { return sqrt_d_plus_; }
    double sqrt_d_minus() const noexcept { return sqrt_d_minus_; }

    /// alpha*(lambda) = lambda sqrt(D-) / (lambda sqrt(D-) + (1 - lambda) sqrt(D+)).
    static double transmission(double d_plus, double d_minus, double lambda) noexcept {
        const double a = lambda * std::sqrt(d_minus);
        return a / (a + (1.0 - lambda) * std::sqrt(d_plus));
    }

    friend TwoSidedMedium make_medium(double d_plus, double d_minus, double lambda);

    friend bool operator==(const TwoSidedMedium&, const TwoSidedMedium&) = default;

private:
    TwoSidedMedium(double dp, double dm, double lam)
        : d_plus_(dp),
          d_minus_(dm),
          lambda_(lam),
          alpha_star_(transmission(dp, dm, lam)),
          sqrt_d_plus_(std::sqrt(dp)),
          sqrt_d_minus_(std::sqrt(dm)) {}

    double d_plus_;
    double d_minus_;
    double lambda_;
    double alpha_star_;
    double sqrt_d_plus_;
    double sqrt_d_minus_;
};

inline TwoSidedMedium make_medium(double d_plus, double d_minus, double lambda) {
    detail::require_positive(d_plus, "d_plus");
    detail::require_positive(d_minus, "d_minus");
    detail::require_open_unit(lambda, "lambda");
    return TwoSidedMedium(d_plus, d_minus, lambda);
}

/// The lambda for which the interface condition is continuity of flux,
/// D+ c'(0+) = D- c'(0-).
inline double flux_continuity_lambda(double d_plus, double d_minus) {
    detail::require_positive(d_plus, "d_plus");
    detail::require_positive(d_minus, "d_minus");
    return d_plus / (d_plus + d_minus);
}

/// Naive transmission value D+/(D+ + D-). Only used as the
/// rejected candidate in PDE-vs-MC adjudication runs.
inline double literal_flux_alpha(double d_plus, double d_minus) {
    return flux_continuity_lambda(d_plus, d_minus);
}

/// X -> Y.
inline double scale(const TwoSidedMedium& m, double x) {
    detail::require_finite(x, "x");
    return x >= 0.0 ? m.sqrt_d_plus() * x : m.sqrt_d_minus() * x;
}

/// Y -> X.
inline double unscale(const TwoSidedMedium& m, double y) {
    detail::require_finite(y, "y");
    return y >= 0.0 ? y / m.sqrt_d_plus() : y / m.sqrt_d_minus();
}

inline double dispersion_at(const TwoSidedMedium& m, double y) noexcept {
    return y >= 0.0 ? m.d_plus() : m.d_minus();
}

/// Coastal upwelling with a sharp shelf break. The surface equation
/// d(eta)/dy = -(r/f) (dh/dx)^-1 d2(eta)/dx2 is read as a diffusion in the
/// "time" y with coefficient r / (|f| H) on each side; doubling it puts it in
/// the (1/2) D generator convention. Continuity of derivatives gives lambda = 1/2.
inline TwoSidedMedium medium_from_upwelling(double r, double f, double h_slope_plus,
                                            double h_slope_minus) {
    detail::require_positive(r, "r");
    detail::require_finite(f, "f");
    if (!(f < 0.0)) throw DomainError("f", "must be < 0 (southern hemisphere convention)");
    detail::require_positive(h_slope_plus, "h_slope_plus");
    detail::require_positive(h_slope_minus, "h_slope_minus");
    const double af = std::abs(f);
    return make_medium(2.0 * r / (af * h_slope_plus), 2.0 * r / (af * h_slope_minus), 0.5);
}

}  // namespace interface_lab
