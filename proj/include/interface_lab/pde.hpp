#pragma once

// Backward interface equation
//
//     dc/dt = (1/2) D(y) d2c/dy2   on y < 0 and y > 0,
//     lambda c_y(0+) = (1 - lambda) c_y(0-),
//
// whose solution is c(t, y) = E_y c0(Y_t) for the physical diffusion Y.
// Flux continuity D+ c_y(0+) = D- c_y(0-) is the case lambda = D+/(D+ + D-).
//
// Discretisation: uniform node-centred grid with y = 0 on a node, three-point
// stencils away from the interface, Crank-Nicolson in time (optionally
// preceded by a few backward Euler steps to damp incompatible initial data).
// The interface node has no time derivative; its row is the constraint
//
//     lambda (-3 c0 + 4 c1 - c2) = (1 - lambda) (3 c0 - 4 c-1 + c-2),
//
// so each step is one pentadiagonal solve with a matrix factorised once.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "interface_lab/banded.hpp"
#include "interface_lab/errors.hpp"
#include "interface_lab/medium.hpp"
#include "interface_lab/sbm.hpp"

namespace interface_lab {

/// Uniform grid y_i = (i - interface_index) h, i = 0 .. n_nodes-1. The
/// interface index may fall outside the node range (no interface in the domain).
struct Grid {
    double h = 0.0;
    std::size_t n_nodes = 0;
    std::ptrdiff_t interface_index = 0;

    double node(std::size_t i) const noexcept {
        return static_cast<double>(static_cast<std::ptrdiff_t>(i) - interface_index) * h;
    }
    double left() const noexcept { return node(0); }
    double right() const noexcept { return node(n_nodes - 1); }
    bool interface_in_interior() const noexcept {
        return interface_index > 0 && interface_index < static_cast<std::ptrdiff_t>(n_nodes) - 1;
    }
    /// Index of the node at y, if y is a node (to 1e-9 h).
    std::optional<std::size_t> index_of(double y) const noexcept {
        const double k = y / h + static_cast<double>(interface_index);
        const double r = std::round(k);
        if (std::abs(k - r) > 1e-9 || r < 0.0 || r > static_cast<double>(n_nodes - 1)) return std::nullopt;
        return static_cast<std::size_t>(r);
    }
};

inline void validate_grid(const Grid& g) {
    detail::require_positive(g.h, "h");
    if (g.n_nodes < 7) throw DomainError("n_nodes", "must be >= 7");
    const auto last = static_cast<std::ptrdiff_t>(g.n_nodes) - 1;
    const auto k = g.interface_index;
    if (k == 1 || k == last - 1)
        throw DomainError("grid", "interface must be a boundary node or at least two nodes from each boundary");
}

/// Symmetric grid on [-half_width, half_width]; n_nodes odd so y = 0 is the middle node.
inline Grid make_symmetric_grid(double half_width, std::size_t n_nodes) {
    detail::require_positive(half_width, "half_width");
    if (n_nodes < 7 || n_nodes % 2 == 0) throw DomainError("n_nodes", "must be odd and >= 7");
    Grid g{2.0 * half_width / static_cast<double>(n_nodes - 1), n_nodes,
           static_cast<std::ptrdiff_t>((n_nodes - 1) / 2)};
    validate_grid(g);
    return g;
}

/// Grid on [left, right] with spacing h; both ends must be integer multiples of h.
inline Grid make_grid(double left, double right, double h) {
    detail::require_finite(left, "left");
    detail::require_finite(right, "right");
    detail::require_positive(h, "h");
    if (!(right > left)) throw DomainError("right", "must exceed left");
    const double kl = left / h;
    const double kr = right / h;
    if (std::abs(kl - std::round(kl)) > 1e-9 || std::abs(kr - std::round(kr)) > 1e-9)
        throw DomainError("grid", "domain ends must be multiples of h");
    const auto il = static_cast<std::ptrdiff_t>(std::round(kl));
    const auto ir = static_cast<std::ptrdiff_t>(std::round(kr));
    Grid g{h, static_cast<std::size_t>(ir - il + 1), -il};
    validate_grid(g);
    return g;
}

enum class BoundaryCondition { absorbing, reflecting };

inline std::vector<double> sample_on_grid(const Grid& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.n_nodes);
    for (std::size_t i = 0; i < g.n_nodes; ++i) v[i] = f(g.node(i));
    return v;
}

struct PdeProblem {
    TwoSidedMedium medium;
    Grid grid;
    std::vector<double> initial_data;
    BoundaryCondition left_bc = BoundaryCondition::reflecting;
    BoundaryCondition right_bc = BoundaryCondition::reflecting;
    double dt = 1e-3;
    double t_max = 1.0;
    std::vector<std::size_t> probe_nodes{};
    /// Leading steps replaced by two backward Euler half steps each (Rannacher
    /// start-up), damping the nonsmooth modes of incompatible initial data.
    int startup_steps = 2;
    /// Upper bound on the diffusion number (1/2) max(D) dt / h^2 before a warning is recorded.
    double quality_cap = 5.0;
};

struct PdeSolution {
    std::vector<double> final_slice;
    std::vector<std::vector<double>> probe_series;
    std::vector<double> mass_series;
    /// c at interface_index + {-2..2} after each step (not for the initial data, which need
    /// not satisfy the interface condition); empty when the interface is not interior.
    std::vector<std::array<double, 5>> interface_window;
    std::vector<double> times;
    double dt = 0.0;
    double diffusion_number = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

inline double trapezoid(const std::vector<double>& c, double h) {
    double s = 0.5 * (c.front() + c.back());
    for (std::size_t i = 1; i + 1 < c.size(); ++i) s += c[i];
    return s * h;
}

enum class RowKind { generator, interface, absorbing };

struct PdeOperator {
    std::vector<RowKind> kind;
    // Generator rows: (A c)_i = lo_i c_{i-1} + mid_i c_i + up_i c_{i+1}.
    std::vector<double> lo, mid, up;
};

inline PdeOperator assemble_operator(const PdeProblem& p) {
    const Grid& g = p.grid;
    const std::size_t n = g.n_nodes;
    PdeOperator op{std::vector<RowKind>(n, RowKind::generator), std::vector<double>(n, 0.0),
                   std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = 0.5 * dispersion_at(p.medium, g.node(i)) * inv_h2;
        op.lo[i] = k;
        op.mid[i] = -2.0 * k;
        op.up[i] = k;
    }
    // Reflecting ends: ghost node mirrors the first interior node.
    if (p.left_bc == BoundaryCondition::reflecting) {
        op.up[0] *= 2.0;
        op.lo[0] = 0.0;
    } else {
        op.kind[0] = RowKind::absorbing;
    }
    if (p.right_bc == BoundaryCondition::reflecting) {
        op.lo[n - 1] *= 2.0;
        op.up[n - 1] = 0.0;
    } else {
        op.kind[n - 1] = RowKind::absorbing;
    }
    if (g.interface_in_interior()) op.kind[static_cast<std::size_t>(g.interface_index)] = RowKind::interface;
    return op;
}

/// I - theta dt A on generator rows, constraint / identity rows elsewhere.
inline BandedMatrix implicit_matrix(const PdeOperator& op, double lambda, double theta_dt) {
    const std::size_t n = op.kind.size();
    BandedMatrix m(n, 2, 2);
    for (std::size_t i = 0; i < n; ++i) {
        switch (op.kind[i]) {
            case RowKind::absorbing:
                m.at(i, i) = 1.0;
                break;
            case RowKind::interface:
                m.at(i, i - 2) = -(1.0 - lambda);
                m.at(i, i - 1) = 4.0 * (1.0 - lambda);
                m.at(i, i) = -3.0;
                m.at(i, i + 1) = 4.0 * lambda;
                m.at(i, i + 2) = -lambda;
                break;
            case RowKind::generator:
                if (i > 0) m.at(i, i - 1) = -theta_dt * op.lo[i];
                m.at(i, i) = 1.0 - theta_dt * op.mid[i];
                if (i + 1 < n) m.at(i, i + 1) = -theta_dt * op.up[i];
                break;
        }
    }
    m.factorize();
    return m;
}

/// rhs = c + explicit_dt A c on generator rows, 0 on constraint rows.
inline void explicit_rhs(const PdeOperator& op, const std::vector<double>& c, double explicit_dt,
                         std::vector<double>& rhs) {
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (op.kind[i] != RowKind::generator) {
            rhs[i] = 0.0;
            continue;
        }
        double ac = op.mid[i] * c[i];
        if (i > 0) ac += op.lo[i] * c[i - 1];
        if (i + 1 < n) ac += op.up[i] * c[i + 1];
        rhs[i] = c[i] + explicit_dt * ac;
    }
}

}  // namespace detail

inline PdeSolution solve(const PdeProblem& p) {
    validate_grid(p.grid);
    const Grid& g = p.grid;
    if (p.initial_data.size() != g.n_nodes) throw DomainError("initial_data", "must have one value per node");
    for (double v : p.initial_data) detail::require_finite(v, "initial_data");
    for (std::size_t k : p.probe_nodes)
        if (k >= g.n_nodes) throw DomainError("probe_nodes", "index outside the grid");
    if (p.startup_steps < 0) throw DomainError("startup_steps", "must be >= 0");
    const std::size_t steps = step_count(p.t_max, p.dt);

    PdeSolution sol;
    sol.dt = p.dt;
    sol.diffusion_number = 0.5 * std::max(p.medium.d_plus(), p.medium.d_minus()) * p.dt / (g.h * g.h);
    if (sol.diffusion_number > p.quality_cap)
        sol.warnings.push_back("diffusion number " + std::to_string(sol.diffusion_number) + " exceeds quality cap " +
                               std::to_string(p.quality_cap));

    const auto op = detail::assemble_operator(p);
    const double lambda = p.medium.lambda();
    // (I - dt/2 A) is both the Crank-Nicolson matrix and the backward Euler
    // matrix for a half step, so one factorisation serves both.
    const BandedMatrix cn = detail::implicit_matrix(op, lambda, 0.5 * p.dt);

    const bool has_interface = g.interface_in_interior();
    const auto ki = static_cast<std::size_t>(std::max<std::ptrdiff_t>(g.interface_index, 0));

    std::vector<double> c = p.initial_data;
    std::vector<double> rhs(g.n_nodes);
    sol.probe_series.assign(p.probe_nodes.size(), {});
    for (auto& s : sol.probe_series) s.reserve(steps + 1);
    sol.mass_series.reserve(steps + 1);
    sol.times.reserve(steps + 1);

    auto record = [&](std::size_t k) {
        sol.times.push_back(static_cast<double>(k) * p.dt);
        for (std::size_t j = 0; j < p.probe_nodes.size(); ++j) sol.probe_series[j].push_back(c[p.probe_nodes[j]]);
        sol.mass_series.push_back(detail::trapezoid(c, g.h));
        if (has_interface && k > 0)
            sol.interface_window.push_back({c[ki - 2], c[ki - 1], c[ki], c[ki + 1], c[ki + 2]});
    };

    record(0);
    for (std::size_t k = 1; k <= steps; ++k) {
        if (static_cast<int>(k) <= p.startup_steps) {
            for (int half = 0; half < 2; ++half) {
                detail::explicit_rhs(op, c, 0.0, rhs);
                cn.solve_in_place(rhs);
                c.swap(rhs);
            }
        } else {
            detail::explicit_rhs(op, c, 0.5 * p.dt, rhs);
            cn.solve_in_place(rhs);
            c.swap(rhs);
        }
        record(k);
    }
    for (double v : c)
        if (!std::isfinite(v)) throw SingularSystemError("non-finite value in PDE solution");
    sol.final_slice = std::move(c);
    return sol;
}

/// lambda c_y(0+) - (1 - lambda) c_y(0-) after each step, using the same
/// one-sided second-order stencils as the constraint row.
inline std::vector<double> interface_flux_residual(const PdeSolution& sol, const TwoSidedMedium& medium,
                                                   const Grid& grid) {
    const double lambda = medium.lambda();
    std::vector<double> out;
    out.reserve(sol.interface_window.size());
    for (const auto& w : sol.interface_window) {
        const double plus = (-3.0 * w[2] + 4.0 * w[3] - w[4]) / (2.0 * grid.h);
        const double minus = (3.0 * w[2] - 4.0 * w[1] + w[0]) / (2.0 * grid.h);
        out.push_back(lambda * plus - (1.0 - lambda) * minus);
    }
    return out;
}

struct SurvivalCurve {
    std::vector<double> times;
    std::vector<double> survival;
    double far_boundary = 0.0;
    std::vector<std::string> warnings;

    /// Survival at time t (t must be a multiple of the step, to 1e-9).
    double at(double t) const {
        const double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
        const double k = t / dt;
        const double r = std::round(k);
        if (std::abs(k - r) > 1e-6 || r < 0.0 || r >= static_cast<double>(times.size()))
            throw DomainError("t", "not a recorded time of the survival curve");
        return survival[static_cast<std::size_t>(r)];
    }
};

/// Default distance from y0 to the reflecting far boundary.
inline double default_far_width(const TwoSidedMedium& m, double t_max) {
    return 8.0 * std::sqrt(std::max(m.d_plus(), m.d_minus()) * t_max);
}

/// P_{y0}(T_detector > t) from the backward equation with c0 = 1, absorbing at
/// the detector (a boundary node) and reflecting at the far side, placed
/// far_width beyond y0. y0, the detector and 0 must be multiples of h.
inline SurvivalCurve survival_curve(const TwoSidedMedium& medium, double y0, double detector, double far_width,
                                    double dt, double t_max, double h, int startup_steps = 2,
                                    double quality_cap = 5.0) {
    detail::require_finite(y0, "y0");
    detail::require_finite(detector, "detector");
    detail::require_positive(far_width, "far_width");
    detail::require_positive(h, "h");
    if (y0 == detector) throw DomainError("detector", "must differ from y0");
    const bool upward = detector > y0;
    const double far = upward ? std::floor((y0 - far_width) / h) * h : std::ceil((y0 + far_width) / h) * h;
    const Grid grid = upward ? make_grid(far, detector, h) : make_grid(detector, far, h);
    const auto probe = grid.index_of(y0);
    if (!probe) throw DomainError("y0", "must be a grid node (multiple of h)");

    PdeProblem p{medium, grid, std::vector<double>(grid.n_nodes, 1.0)};
    p.left_bc = upward ? BoundaryCondition::reflecting : BoundaryCondition::absorbing;
    p.right_bc = upward ? BoundaryCondition::absorbing : BoundaryCondition::reflecting;
    p.dt = dt;
    p.t_max = t_max;
    p.probe_nodes = {*probe};
    p.startup_steps = startup_steps;
    p.quality_cap = quality_cap;
    auto sol = solve(p);
    SurvivalCurve out{std::move(sol.times), std::move(sol.probe_series[0]), far, std::move(sol.warnings)};
    return out;
}

}  // namespace interface_lab
