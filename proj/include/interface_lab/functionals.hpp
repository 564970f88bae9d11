#pragma once

// Path functionals of the physical diffusion: first passage times,
// occupation times, and the martingale residual for test functions in the
// class D_lambda = { f continuous, C2 off 0, lambda f'(0+) = (1-lambda) f'(0-) }.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>

#include "interface_lab/errors.hpp"
#include "interface_lab/medium.hpp"
#include "interface_lab/rng.hpp"
#include "interface_lab/sbm.hpp"

namespace interface_lab {

struct FptSample {
    std::optional<double> passage_time;
    double t_max = 0.0;

    bool censored() const noexcept { return !passage_time.has_value(); }
    /// Indicator of T > t.
    bool survives(double t) const noexcept { return !passage_time || *passage_time > t; }
};

/// First passage of the physical diffusion from y0 to y_target, simulated on
/// a uniform grid in X coordinates. A crossing found inside step i (either at
/// the grid point or, with bridge_correction, by the Brownian bridge test) is
/// dated t_i + dt/2. The bridge test is applied only to steps lying strictly
/// on one side of both the target and the interface.
inline FptSample first_passage(const TwoSidedMedium& medium, double y0, double y_target, double dt, double t_max,
                               RngStream& rng, bool bridge_correction, double alpha_override = 0.0) {
    detail::require_finite(y0, "y0");
    detail::require_finite(y_target, "y_target");
    if (y0 == y_target) throw DomainError("y_target", "must differ from y0");
    const std::size_t n = step_count(t_max, dt);
    const double alpha = alpha_override > 0.0 ? alpha_override : medium.alpha_star();
    detail::require_open_unit(alpha, "alpha");

    const double level = unscale(medium, y_target);
    const bool upward = y_target > y0;
    const double sqrt_dt = std::sqrt(dt);
    double x = unscale(medium, y0);
    for (std::size_t i = 0; i < n; ++i) {
        const double next = step_unchecked(alpha, x, dt, sqrt_dt, rng);
        const bool reached = upward ? next >= level : next <= level;
        bool hit = reached;
        if (!reached && bridge_correction && x * next > 0.0) {
            const double exponent = 2.0 * (x - level) * (next - level) / dt;
            hit = exponent < 40.0 && rng.uniform() < std::exp(-exponent);
        }
        if (hit) return {std::min((static_cast<double>(i) + 0.5) * dt, t_max), t_max};
        x = next;
    }
    return {std::nullopt, t_max};
}

struct OccupationRecord {
    double gamma_plus_leb = 0.0;
    double gamma_minus_leb = 0.0;
    double gamma_plus_qv = 0.0;
    double gamma_minus_qv = 0.0;
    double horizon = 0.0;
};

/// Streaming Lebesgue occupation tally over X-coordinate samples. A step that
/// changes side is split at the linearly interpolated zero; 0 is on the plus side.
class OccupationAccumulator {
public:
    void add_step(double x_prev, double x_next, double dt) noexcept {
        const bool prev_plus = x_prev >= 0.0;
        const bool next_plus = x_next >= 0.0;
        horizon_ += dt;
        if (prev_plus == next_plus) {
            if (prev_plus) plus_ += dt;
            return;
        }
        const double ap = std::abs(x_prev);
        const double first = dt * (ap / (ap + std::abs(x_next)));
        plus_ += prev_plus ? first : dt - first;
    }

    OccupationRecord finish(const TwoSidedMedium& medium) const noexcept {
        // Minus side is the complement, so the two tallies sum to the horizon.
        const double minus = horizon_ - plus_;
        return {plus_, minus, medium.d_plus() * plus_, medium.d_minus() * minus, horizon_};
    }

private:
    double plus_ = 0.0;
    double horizon_ = 0.0;
};

inline OccupationRecord occupation_times(const SkewPath& path, const TwoSidedMedium& medium) {
    if (path.x_values.empty()) throw DomainError("path", "must be nonempty");
    OccupationAccumulator acc;
    for (std::size_t i = 1; i < path.x_values.size(); ++i)
        acc.add_step(path.x_values[i - 1], path.x_values[i], path.dt);
    return acc.finish(medium);
}

/// f(y) = (1-lambda) kappa y + beta+ y^2 for y >= 0 and lambda kappa y + beta- y^2
/// for y < 0, so that lambda f'(0+) = (1-lambda) f'(0-) = lambda (1-lambda) kappa.
struct TestFunction {
    double lambda;
    double kappa;
    double beta_plus;
    double beta_minus;

    double value(double y) const noexcept {
        return y >= 0.0 ? (1.0 - lambda) * kappa * y + beta_plus * y * y : lambda * kappa * y + beta_minus * y * y;
    }
    double first_derivative(double y) const noexcept {
        return y >= 0.0 ? (1.0 - lambda) * kappa + 2.0 * beta_plus * y : lambda * kappa + 2.0 * beta_minus * y;
    }
    double second_derivative(double y) const noexcept { return y >= 0.0 ? 2.0 * beta_plus : 2.0 * beta_minus; }
};

inline TestFunction make_test_function(double lambda, double kappa, double beta_plus, double beta_minus) {
    detail::require_open_unit(lambda, "lambda");
    detail::require_finite(kappa, "kappa");
    detail::require_finite(beta_plus, "beta_plus");
    detail::require_finite(beta_minus, "beta_minus");
    return {lambda, kappa, beta_plus, beta_minus};
}

/// Streaming M_T - M_0 = f(Y_T) - f(Y_0) - (1/2) sum D(Y_ti) f''(Y_ti) dt
/// (left-endpoint compensator), fed Y-coordinate samples.
class MartingaleAccumulator {
public:
    MartingaleAccumulator(const TwoSidedMedium& medium, const TestFunction& f, double y0)
        : medium_(medium), f_(f), y0_(y0), y_last_(y0) {
        if (std::abs(f.lambda - medium.lambda()) > 1e-12)
            throw MismatchError("test function lambda does not match the medium's interface parameter");
    }

    void add_step(double y_next, double dt) noexcept {
        compensator_ += dispersion_at(medium_, y_last_) * f_.second_derivative(y_last_) * dt;
        y_last_ = y_next;
    }

    double residual() const noexcept { return f_.value(y_last_) - f_.value(y0_) - 0.5 * compensator_; }

private:
    TwoSidedMedium medium_;
    TestFunction f_;
    double y0_;
    double y_last_;
    double compensator_ = 0.0;
};

inline double martingale_residual(const SkewPath& path, const TwoSidedMedium& medium, const TestFunction& f) {
    if (path.x_values.empty()) throw DomainError("path", "must be nonempty");
    MartingaleAccumulator acc(medium, f, scale(medium, path.x_values.front()));
    for (std::size_t i = 1; i < path.x_values.size(); ++i) acc.add_step(scale(medium, path.x_values[i]), path.dt);
    return acc.residual();
}

}  // namespace interface_lab
