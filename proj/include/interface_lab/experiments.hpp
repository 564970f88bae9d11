#pragma once

// The five experiments. Each takes a plain config struct and returns an
// ExperimentReport; a failed check is recorded in the report, never thrown.
//
// Null hypotheses are accepted within 3 standard errors and rejections
// require 5. Every path draws from its own stream (master_seed, stream id)
// and reductions run in path-index order, so reports do not depend on the
// worker count.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "interface_lab/functionals.hpp"
#include "interface_lab/medium.hpp"
#include "interface_lab/parallel.hpp"
#include "interface_lab/pde.hpp"
#include "interface_lab/report.hpp"
#include "interface_lab/rng.hpp"
#include "interface_lab/sbm.hpp"
#include "interface_lab/stats.hpp"

namespace interface_lab {

inline constexpr std::uint64_t kDefaultSeed = 20110821;
inline constexpr double kNullSe = 3.0;
inline constexpr double kRejectSe = 5.0;

/// Stream id for path `index` of sub-run `component`.
constexpr std::uint64_t stream_id(std::uint64_t component, std::uint64_t index) noexcept {
    return (component << 40) | index;
}

namespace detail {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string num_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline OrderedJson medium_json(const TwoSidedMedium& m) {
    OrderedJson j = OrderedJson::object();
    j["d_plus"] = m.d_plus();
    j["d_minus"] = m.d_minus();
    j["lambda"] = m.lambda();
    j["alpha_star"] = m.alpha_star();
    return j;
}

inline void validate_paths(std::size_t paths, std::size_t minimum) {
    if (paths < minimum) throw ConfigError("paths must be >= " + std::to_string(minimum));
}

inline SummaryStat summarize_indicator(const std::vector<FptSample>& samples, double t, std::vector<double>& scratch) {
    scratch.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) scratch[i] = samples[i].survives(t) ? 1.0 : 0.0;
    return summarize(scratch);
}

/// Adaptive Gauss-Kronrod over consecutive break points. The tolerance is
/// relative only, so depth is capped: on pieces where the integrand is ~1e-20
/// round-off would otherwise drive every branch to the maximum depth.
template <class F>
double integrate_piecewise(F&& f, std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, breaks[i], breaks[i + 1], 10, 1e-14);
    return total;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed-form density checks (quadrature), shared by kernel-check and tests.

/// |integral of p_t(x, .) - 1|.
inline double normalization_residual(double alpha, double x, double t) {
    const double reach = std::abs(x) + 40.0 * std::sqrt(t);
    const double total = detail::integrate_piecewise([&](double y) { return transition_density(alpha, x, t, y); },
                                                     {-reach, -std::abs(x), 0.0, std::abs(x), reach});
    return std::abs(total - 1.0);
}

/// |integral of p_t(x, z) p_s(z, y) dz - p_{t+s}(x, y)|.
inline double chapman_kolmogorov_residual(double alpha, double x, double t, double s, double y) {
    const double reach = std::max(std::abs(x), std::abs(y)) + 40.0 * std::sqrt(std::max(t, s));
    const double lhs = detail::integrate_piecewise(
        [&](double z) { return transition_density(alpha, x, t, z) * transition_density(alpha, z, s, y); },
        {-reach, -std::abs(x), -std::abs(y), 0.0, std::abs(x), std::abs(y), reach});
    return std::abs(lhs - transition_density(alpha, x, t + s, y));
}

// ---------------------------------------------------------------------------
// kernel-check

struct KernelCheckConfig {
    TwoSidedMedium medium = make_medium(4.0, 1.0, 0.8);
    double alpha_override = 0.0;
    std::size_t paths = 200000;
    double step_length = 1.0;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 0;
};

inline ExperimentReport run_kernel_check(const KernelCheckConfig& cfg) {
    detail::Stopwatch clock;
    detail::validate_paths(cfg.paths, 10000);
    if (!(cfg.step_length > 0.0)) throw ConfigError("step length must be > 0");
    const double alpha = cfg.alpha_override > 0.0 ? cfg.alpha_override : cfg.medium.alpha_star();
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");

    ExperimentReport r;
    r.experiment = "kernel-check";
    r.config = detail::medium_json(cfg.medium);
    r.config["alpha_used"] = alpha;
    r.config["paths"] = cfg.paths;
    r.config["x0"] = 0.0;
    r.config["step_length"] = cfg.step_length;
    r.config["master_seed"] = cfg.seed;

    const auto draws = map_paths<double>(
        cfg.paths,
        [&](std::size_t i) {
            RngStream rng(cfg.seed, stream_id(0, i));
            return step(alpha, 0.0, cfg.step_length, rng);
        },
        cfg.workers);

    const double n = static_cast<double>(cfg.paths);
    std::size_t positive = 0;
    for (double v : draws) positive += v > 0.0 ? 1 : 0;
    const double freq = static_cast<double>(positive) / n;
    const double se = std::sqrt(alpha * (1.0 - alpha) / n);
    r.diagnostics.push_back({"sign_frequency_z", std::abs(freq - alpha) / se, kNullSe, Comparison::less_equal,
                             "|positive fraction - alpha| in binomial standard errors"});

    const double ks = ks_distance(draws, [&](double y) { return transition_cdf(alpha, 0.0, cfg.step_length, y); });
    const double ks_threshold = 1.36 * 1.3 / std::sqrt(n);
    r.diagnostics.push_back({"ks_distance", ks, ks_threshold, Comparison::less, "against the closed-form CDF"});

    // 3 x 3 x 3 grid of (alpha, x, t); Chapman-Kolmogorov at s = t/2 and two end points.
    const std::array<double, 3> alphas{0.2, alpha, 0.9};
    const std::array<double, 3> xs{-1.0, 0.0, 0.5};
    const std::array<double, 3> ts{0.1, 1.0, 3.0};
    double norm_max = 0.0;
    double ck_max = 0.0;
    for (double a : alphas)
        for (double x : xs)
            for (double t : ts) {
                norm_max = std::max(norm_max, normalization_residual(a, x, t));
                for (double y : {-0.3, 0.8}) ck_max = std::max(ck_max, chapman_kolmogorov_residual(a, x, t, 0.5 * t, y));
            }
    r.diagnostics.push_back({"normalization_residual", norm_max, 1e-9, Comparison::less, ""});
    r.diagnostics.push_back({"chapman_kolmogorov_residual", ck_max, 1e-6, Comparison::less, ""});

    r.findings["positive_fraction"] = freq;
    r.findings["binomial_se"] = se;
    r.findings["ks_distance"] = ks;
    r.findings["normalization_residual"] = norm_max;
    r.findings["chapman_kolmogorov_residual"] = ck_max;

    CurveTable cdf{"distribution", {"y", "empirical_cdf", "closed_form_cdf"}, {}};
    std::vector<double> sorted = draws;
    std::sort(sorted.begin(), sorted.end());
    const double sd = std::sqrt(cfg.step_length);
    for (int k = -12; k <= 12; ++k) {
        const double y = 0.25 * k * sd;
        const auto below = std::upper_bound(sorted.begin(), sorted.end(), y) - sorted.begin();
        cdf.rows.push_back({y, static_cast<double>(below) / n, transition_cdf(alpha, 0.0, cfg.step_length, y)});
    }
    r.tables.push_back(std::move(cdf));
    r.wall_time_seconds = clock.seconds();
    return r;
}

// ---------------------------------------------------------------------------
// fpt

struct FptConfig {
    TwoSidedMedium medium = make_medium(4.0, 1.0, 0.8);
    double alpha_override = 0.0;
    /// Injection at -y with detector at +y, and the reverse.
    double y = 1.0;
    std::size_t paths = 100000;
    double dt = 1e-3;
    double t_max = 4.0;
    double report_every = 0.25;
    bool bridge_correction = true;
    double pde_h = 0.02;
    double pde_dt = 1e-3;
    /// Distance from the injection point to the reflecting far boundary; 0 = default.
    double far_width = 0.0;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 0;
};

struct FptCurves {
    std::vector<double> times;
    std::vector<SummaryStat> minus_to_plus;
    std::vector<SummaryStat> plus_to_minus;
};

/// Monte Carlo survival curves in both directions at multiples of report_every.
inline FptCurves simulate_fpt_curves(const FptConfig& cfg) {
    const double alpha = cfg.alpha_override > 0.0 ? cfg.alpha_override : 0.0;
    auto run = [&](std::uint64_t component, double y0, double target) {
        return map_paths<FptSample>(
            cfg.paths,
            [&](std::size_t i) {
                RngStream rng(cfg.seed, stream_id(component, i));
                return first_passage(cfg.medium, y0, target, cfg.dt, cfg.t_max, rng, cfg.bridge_correction, alpha);
            },
            cfg.workers);
    };
    const auto lr = run(1, -cfg.y, cfg.y);
    const auto rl = run(2, cfg.y, -cfg.y);
    FptCurves out;
    std::vector<double> scratch;
    const auto count = static_cast<std::size_t>(std::floor(cfg.t_max / cfg.report_every + 1e-9));
    for (std::size_t k = 1; k <= count; ++k) {
        const double t = static_cast<double>(k) * cfg.report_every;
        out.times.push_back(t);
        out.minus_to_plus.push_back(detail::summarize_indicator(lr, t, scratch));
        out.plus_to_minus.push_back(detail::summarize_indicator(rl, t, scratch));
    }
    return out;
}

inline ExperimentReport run_fpt_experiment(const FptConfig& cfg) {
    detail::Stopwatch clock;
    detail::validate_paths(cfg.paths, 2);
    if (!(cfg.y > 0.0)) throw ConfigError("y (detector distance) must be > 0");
    if (!(cfg.report_every > 0.0) || cfg.report_every > cfg.t_max) throw ConfigError("bad report grid");
    const TwoSidedMedium& m = cfg.medium;
    const double alpha = cfg.alpha_override > 0.0 ? cfg.alpha_override : m.alpha_star();

    ExperimentReport r;
    r.experiment = "fpt";
    r.config = detail::medium_json(m);
    r.config["alpha_used"] = alpha;
    r.config["y"] = cfg.y;
    r.config["paths"] = cfg.paths;
    r.config["dt"] = cfg.dt;
    r.config["t_max"] = cfg.t_max;
    r.config["report_every"] = cfg.report_every;
    r.config["bridge_correction"] = cfg.bridge_correction;
    r.config["pde_h"] = cfg.pde_h;
    r.config["pde_dt"] = cfg.pde_dt;
    const double far = cfg.far_width > 0.0 ? cfg.far_width : default_far_width(m, cfg.t_max);
    r.config["far_width"] = far;
    r.config["master_seed"] = cfg.seed;

    const FptCurves mc = simulate_fpt_curves(cfg);
    const SurvivalCurve pde_lr = survival_curve(m, -cfg.y, cfg.y, far, cfg.pde_dt, cfg.t_max, cfg.pde_h);
    const SurvivalCurve pde_rl = survival_curve(m, cfg.y, -cfg.y, far, cfg.pde_dt, cfg.t_max, cfg.pde_h);

    // "low" = injection on the side with the smaller dispersion coefficient.
    const bool minus_is_low = m.d_minus() <= m.d_plus();
    const double bound_factor = std::sqrt(std::min(m.d_minus(), m.d_plus()) / std::max(m.d_minus(), m.d_plus()));

    CurveTable table{"survival",
                     {"t", "mc_minus_to_plus", "se_minus_to_plus", "mc_plus_to_minus", "se_plus_to_minus",
                      "pde_minus_to_plus", "pde_plus_to_minus", "ratio_mc", "ratio_pde"},
                     {}};
    double order_mc = -std::numeric_limits<double>::infinity();
    double order_pde = -std::numeric_limits<double>::infinity();
    double symmetric_z = 0.0;
    double agree_lr = 0.0;
    double agree_rl = 0.0;
    std::optional<double> first_bound_mc;
    std::optional<double> first_bound_pde;
    for (std::size_t k = 0; k < mc.times.size(); ++k) {
        const double t = mc.times[k];
        const auto& a = mc.minus_to_plus[k];
        const auto& b = mc.plus_to_minus[k];
        const double pa = pde_lr.at(t);
        const double pb = pde_rl.at(t);
        const double pooled = pooled_se(a.se, b.se);
        const double low_mc = minus_is_low ? a.mean : b.mean;
        const double high_mc = minus_is_low ? b.mean : a.mean;
        const double low_pde = minus_is_low ? pa : pb;
        const double high_pde = minus_is_low ? pb : pa;
        order_mc = std::max(order_mc, low_mc - high_mc - kNullSe * pooled);
        order_pde = std::max(order_pde, low_pde - high_pde);
        if (pooled > 0.0) symmetric_z = std::max(symmetric_z, std::abs(a.mean - b.mean) / pooled);
        agree_lr = std::max(agree_lr, std::abs(a.mean - pa) / std::max(kNullSe * a.se, 5e-3));
        agree_rl = std::max(agree_rl, std::abs(b.mean - pb) / std::max(kNullSe * b.se, 5e-3));
        const double ratio_mc = high_mc > 0.0 ? low_mc / high_mc : std::numeric_limits<double>::quiet_NaN();
        const double ratio_pde = high_pde > 0.0 ? low_pde / high_pde : std::numeric_limits<double>::quiet_NaN();
        if (!first_bound_mc && ratio_mc <= bound_factor) first_bound_mc = t;
        if (!first_bound_pde && ratio_pde <= bound_factor) first_bound_pde = t;
        table.rows.push_back({t, a.mean, a.se, b.mean, b.se, pa, pb, ratio_mc, ratio_pde});
    }

    // The ordering is asserted under its hypotheses: flux-continuity interface.
    const bool flux_interface = std::abs(m.lambda() - flux_continuity_lambda(m.d_plus(), m.d_minus())) <= 1e-12;
    if (flux_interface) {
        r.diagnostics.push_back({"ordering_mc", order_mc, 0.0, Comparison::less_equal,
                                 "max_t S_low(t) - S_high(t) - 3 pooled SE (low = injection on the low-D side)"});
        r.diagnostics.push_back({"ordering_pde", order_pde, 1e-9, Comparison::less_equal, "max_t S_low(t) - S_high(t)"});
        if (m.d_plus() == m.d_minus())
            r.diagnostics.push_back({"symmetric_agreement_z", symmetric_z, kNullSe, Comparison::less_equal,
                                     "max_t |S_lr - S_rl| / pooled SE"});
    }
    r.findings["ordering_asserted"] = flux_interface;
    r.findings["ordering_mc_margin"] = order_mc;
    r.findings["ordering_pde_margin"] = order_pde;
    r.diagnostics.push_back({"mc_vs_pde_minus_to_plus", agree_lr, 1.0, Comparison::less_equal,
                             "max_t |MC - PDE| / max(3 SE, 5e-3)"});
    r.diagnostics.push_back({"mc_vs_pde_plus_to_minus", agree_rl, 1.0, Comparison::less_equal,
                             "max_t |MC - PDE| / max(3 SE, 5e-3)"});

    r.findings["low_dispersion_side"] = minus_is_low ? "minus" : "plus";
    r.findings["factored_bound_factor"] = bound_factor;
    r.findings["first_time_factored_bound_holds_mc"] =
        first_bound_mc ? OrderedJson(*first_bound_mc) : OrderedJson(nullptr);
    r.findings["first_time_factored_bound_holds_pde"] =
        first_bound_pde ? OrderedJson(*first_bound_pde) : OrderedJson(nullptr);
    {
        const auto& a = mc.minus_to_plus.back();
        const auto& b = mc.plus_to_minus.back();
        const double z = (a.mean - b.mean) / std::max(pooled_se(a.se, b.se), 1e-300);
        r.findings["retrieved_first"] = z < -kNullSe ? "injection_on_minus_side"
                                        : z > kNullSe ? "injection_on_plus_side"
                                                      : "indistinguishable";
    }
    std::vector<std::string> warnings = pde_lr.warnings;
    warnings.insert(warnings.end(), pde_rl.warnings.begin(), pde_rl.warnings.end());
    r.findings["pde_warnings"] = warnings;
    r.tables.push_back(std::move(table));
    r.wall_time_seconds = clock.seconds();
    return r;
}

// ---------------------------------------------------------------------------
// occupation

struct OccupationConfig {
    double d_plus = 4.0;
    double d_minus = 1.0;
    /// Empty = {0.3, critical lambda, 0.9}.
    std::vector<double> lambdas;
    double horizon = 3.0;
    double dt = 1e-3;
    double report_every = 1.0;
    std::size_t paths = 100000;
    double y0 = 0.0;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 0;
};

/// lambda above which the plus side is occupied longer: sqrt(D+)/(sqrt(D+) + sqrt(D-)).
inline double critical_lambda(double d_plus, double d_minus) {
    return std::sqrt(d_plus) / (std::sqrt(d_plus) + std::sqrt(d_minus));
}

inline ExperimentReport run_occupation_experiment(const OccupationConfig& cfg) {
    detail::Stopwatch clock;
    detail::validate_paths(cfg.paths, 2);
    if (!(cfg.report_every > 0.0) || cfg.report_every > cfg.horizon) throw ConfigError("bad report grid");
    const double lambda_c = critical_lambda(cfg.d_plus, cfg.d_minus);
    const std::vector<double> lambdas = cfg.lambdas.empty() ? std::vector<double>{0.3, lambda_c, 0.9} : cfg.lambdas;
    std::vector<TwoSidedMedium> media;
    for (double lam : lambdas) media.push_back(make_medium(cfg.d_plus, cfg.d_minus, lam));

    ExperimentReport r;
    r.experiment = "occupation";
    r.config["d_plus"] = cfg.d_plus;
    r.config["d_minus"] = cfg.d_minus;
    r.config["lambdas"] = lambdas;
    {
        std::vector<double> alphas;
        for (const auto& m : media) alphas.push_back(m.alpha_star());
        r.config["alpha_stars"] = alphas;
    }
    r.config["critical_lambda"] = lambda_c;
    r.config["horizon"] = cfg.horizon;
    r.config["dt"] = cfg.dt;
    r.config["report_every"] = cfg.report_every;
    r.config["paths"] = cfg.paths;
    r.config["y0"] = cfg.y0;
    r.config["master_seed"] = cfg.seed;

    const std::size_t steps = step_count(cfg.horizon, cfg.dt);
    const auto checkpoints = static_cast<std::size_t>(std::floor(cfg.horizon / cfg.report_every + 1e-9));
    std::vector<std::size_t> checkpoint_steps;
    for (std::size_t k = 1; k <= checkpoints; ++k)
        checkpoint_steps.push_back(step_count(static_cast<double>(k) * cfg.report_every, cfg.dt));

    CurveTable curve{"occupation_fraction", {"t"}, {}};
    for (std::size_t k = 1; k <= checkpoints; ++k) curve.rows.push_back({static_cast<double>(k) * cfg.report_every});
    CurveTable sweep{"lambda_sweep",
                     {"lambda", "alpha_star", "mean_plus_fraction", "se_plus_fraction", "mean_difference",
                      "se_difference"},
                     {}};
    OrderedJson ratio_findings = OrderedJson::array();

    for (std::size_t li = 0; li < media.size(); ++li) {
        const TwoSidedMedium& m = media[li];
        const double lam = m.lambda();
        const std::string label = "lambda=" + detail::num_label(lam);
        const double sqrt_dt = std::sqrt(cfg.dt);
        const double x0 = unscale(m, cfg.y0);
        // Per path: Gamma+ at each checkpoint, then the final Gamma-.
        const auto per_path = map_paths<std::vector<double>>(
            cfg.paths,
            [&](std::size_t i) {
                RngStream rng(cfg.seed, stream_id(10 + li, i));
                OccupationAccumulator acc;
                std::vector<double> out;
                out.reserve(checkpoint_steps.size() + 1);
                double x = x0;
                std::size_t next_cp = 0;
                for (std::size_t s = 1; s <= steps; ++s) {
                    const double nx = step_unchecked(m.alpha_star(), x, cfg.dt, sqrt_dt, rng);
                    acc.add_step(x, nx, cfg.dt);
                    x = nx;
                    while (next_cp < checkpoint_steps.size() && checkpoint_steps[next_cp] == s) {
                        out.push_back(acc.finish(m).gamma_plus_leb);
                        ++next_cp;
                    }
                }
                out.push_back(acc.finish(m).gamma_minus_leb);
                return out;
            },
            cfg.workers);

        curve.columns.push_back("mean_plus_fraction_" + label);
        curve.columns.push_back("se_" + label);
        std::vector<double> buf(cfg.paths);
        for (std::size_t k = 0; k < checkpoints; ++k) {
            const double t = curve.rows[k][0];
            for (std::size_t i = 0; i < cfg.paths; ++i) buf[i] = per_path[i][k] / t;
            const auto s = summarize(buf);
            curve.rows[k].push_back(s.mean);
            curve.rows[k].push_back(s.se);
        }
        const double horizon = static_cast<double>(steps) * cfg.dt;
        for (std::size_t i = 0; i < cfg.paths; ++i) buf[i] = per_path[i][checkpoints - 1] / horizon;
        const auto frac = summarize(buf);
        for (std::size_t i = 0; i < cfg.paths; ++i) buf[i] = horizon - 2.0 * per_path[i].back();
        // Gamma+ - Gamma- = horizon - 2 Gamma-.
        const auto diff = summarize(buf);

        r.diagnostics.push_back({label + ":plus_fraction_vs_alpha_star_z",
                                 std::abs(frac.mean - m.alpha_star()) / frac.se, kNullSe, Comparison::less_equal,
                                 "|mean Gamma+/t - alpha*| / SE"});
        const double z = diff.mean / diff.se;
        if (std::abs(lam - lambda_c) <= 1e-9) {
            r.diagnostics.push_back({label + ":difference_at_critical_z", std::abs(z), kNullSe, Comparison::less,
                                     "|mean(Gamma+ - Gamma-)| / SE at the critical lambda"});
        } else if (lam > lambda_c) {
            r.diagnostics.push_back({label + ":difference_positive_z", z, kNullSe, Comparison::greater,
                                     "mean(Gamma+ - Gamma-) / SE above the critical lambda"});
        } else {
            r.diagnostics.push_back({label + ":difference_negative_z", z, -kNullSe, Comparison::less,
                                     "mean(Gamma+ - Gamma-) / SE below the critical lambda"});
        }
        sweep.rows.push_back({lam, m.alpha_star(), frac.mean, frac.se, diff.mean, diff.se});

        // (D+/lambda^2) Gamma+ / ((D-/(1-lambda)^2) Gamma-), over paths with Gamma- > 0.
        std::vector<double> ratios;
        std::size_t one_sided = 0;
        for (std::size_t i = 0; i < cfg.paths; ++i) {
            const double gm = per_path[i].back();
            const double gp = horizon - gm;
            if (gm <= 0.0) {
                ++one_sided;
                continue;
            }
            ratios.push_back((cfg.d_plus / (lam * lam)) * gp / ((cfg.d_minus / ((1 - lam) * (1 - lam))) * gm));
        }
        OrderedJson rf = OrderedJson::object();
        rf["lambda"] = lam;
        rf["paths_with_zero_minus_time"] = one_sided;
        if (!ratios.empty()) {
            rf["q10"] = quantile(ratios, 0.1);
            rf["median"] = quantile(ratios, 0.5);
            rf["q90"] = quantile(ratios, 0.9);
            std::vector<double> logs;
            for (double v : ratios)
                if (v > 0.0) logs.push_back(std::log(v));
            if (logs.size() >= 2) rf["sd_log_ratio"] = summarize(logs).sd;
        }
        ratio_findings.push_back(std::move(rf));
    }
    r.findings["weighted_occupation_ratio"] = ratio_findings;
    r.tables.push_back(std::move(curve));
    r.tables.push_back(std::move(sweep));
    r.wall_time_seconds = clock.seconds();
    return r;
}

// ---------------------------------------------------------------------------
// martingale

struct MartingaleConfig {
    TwoSidedMedium medium = make_medium(4.0, 1.0, 0.8);
    /// Transmission parameters to test; empty = {alpha* - 0.15, alpha*, alpha* + 0.15} clamped into (0,1).
    std::vector<double> alphas;
    double horizon = 1.0;
    double dt = 1e-3;
    std::size_t paths = 100000;
    double y0 = 0.0;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 0;
};

/// Linear, symmetric quadratic, and one-sided quadratic members of D_lambda.
inline std::vector<TestFunction> default_test_family(double lambda) {
    return {make_test_function(lambda, 1.0, 0.0, 0.0), make_test_function(lambda, 0.0, 0.5, 0.5),
            make_test_function(lambda, 1.0, 1.0, 0.0)};
}

inline std::vector<double> default_martingale_alphas(double alpha_star) {
    auto clamp = [](double a) { return std::clamp(a, 0.01, 0.99); };
    return {clamp(alpha_star - 0.15), alpha_star, clamp(alpha_star + 0.15)};
}

inline ExperimentReport run_martingale_experiment(const MartingaleConfig& cfg) {
    detail::Stopwatch clock;
    detail::validate_paths(cfg.paths, 2);
    const TwoSidedMedium& m = cfg.medium;
    const auto alphas = cfg.alphas.empty() ? default_martingale_alphas(m.alpha_star()) : cfg.alphas;
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha values must lie in (0,1)");
    const auto family = default_test_family(m.lambda());

    ExperimentReport r;
    r.experiment = "martingale";
    r.config = detail::medium_json(m);
    r.config["alphas"] = alphas;
    OrderedJson fam = OrderedJson::array();
    for (const auto& f : family)
        fam.push_back(OrderedJson{{"kappa", f.kappa}, {"beta_plus", f.beta_plus}, {"beta_minus", f.beta_minus}});
    r.config["test_functions"] = fam;
    r.config["horizon"] = cfg.horizon;
    r.config["dt"] = cfg.dt;
    r.config["paths"] = cfg.paths;
    r.config["y0"] = cfg.y0;
    r.config["master_seed"] = cfg.seed;

    CurveTable sweep{"alpha_sweep", {"alpha", "test_function", "mean_residual", "se", "z"}, {}};
    const std::size_t steps = step_count(cfg.horizon, cfg.dt);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double x0 = unscale(m, cfg.y0);
    const std::size_t nf = family.size();

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const double alpha = alphas[ai];
        const auto per_path = map_paths<std::vector<double>>(
            cfg.paths,
            [&](std::size_t i) {
                RngStream rng(cfg.seed, stream_id(20 + ai, i));
                std::vector<MartingaleAccumulator> acc;
                acc.reserve(nf);
                for (const auto& f : family) acc.emplace_back(m, f, cfg.y0);
                double x = x0;
                for (std::size_t s = 0; s < steps; ++s) {
                    x = step_unchecked(alpha, x, cfg.dt, sqrt_dt, rng);
                    const double y = scale(m, x);
                    for (auto& a : acc) a.add_step(y, cfg.dt);
                }
                std::vector<double> out(nf);
                for (std::size_t k = 0; k < nf; ++k) out[k] = acc[k].residual();
                return out;
            },
            cfg.workers);

        const bool at_star = std::abs(alpha - m.alpha_star()) <= 1e-12;
        const std::string label = "alpha=" + detail::num_label(alpha);
        double max_z = 0.0;
        std::vector<double> buf(cfg.paths);
        for (std::size_t k = 0; k < nf; ++k) {
            for (std::size_t i = 0; i < cfg.paths; ++i) buf[i] = per_path[i][k];
            const auto s = summarize(buf);
            const double z = s.se > 0.0 ? std::abs(s.mean) / s.se : 0.0;
            max_z = std::max(max_z, z);
            sweep.rows.push_back({alpha, static_cast<double>(k), s.mean, s.se, s.mean / std::max(s.se, 1e-300)});
            if (at_star)
                r.diagnostics.push_back({label + ":f" + std::to_string(k) + ":null_z", z, kNullSe, Comparison::less,
                                         "|mean residual| / SE at alpha*"});
        }
        if (!at_star)
            r.diagnostics.push_back({label + ":max_rejection_z", max_z, kRejectSe, Comparison::greater,
                                     "max over test functions of |mean residual| / SE"});
    }
    r.tables.push_back(std::move(sweep));
    r.wall_time_seconds = clock.seconds();
    return r;
}

// ---------------------------------------------------------------------------
// pde-vs-mc

struct PdeVsMcConfig {
    TwoSidedMedium medium = make_medium(4.0, 1.0, 0.8);
    /// Replaces alpha* in the asserted comparison.
    double alpha_override = 0.0;
    /// c0(y) = exp(-((y - center) / width)^2).
    double c0_center = 1.0;
    double c0_width = 1.0;
    double horizon = 1.0;
    std::vector<double> probes{-1.0, 0.0, 1.0};
    std::size_t paths = 100000;
    double dt = 1e-3;
    double pde_dt = 1e-3;
    double half_width = 10.0;
    std::size_t grid_nodes = 1001;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 0;
};

inline ExperimentReport run_pde_vs_mc(const PdeVsMcConfig& cfg) {
    detail::Stopwatch clock;
    detail::validate_paths(cfg.paths, 2);
    if (cfg.probes.empty()) throw ConfigError("at least one probe point is required");
    const TwoSidedMedium& m = cfg.medium;
    const double alpha_test = cfg.alpha_override > 0.0 ? cfg.alpha_override : m.alpha_star();
    const double alpha_literal = literal_flux_alpha(m.d_plus(), m.d_minus());
    auto c0 = [&](double y) {
        const double u = (y - cfg.c0_center) / cfg.c0_width;
        return std::exp(-u * u);
    };

    ExperimentReport r;
    r.experiment = "pde-vs-mc";
    r.config = detail::medium_json(m);
    r.config["alpha_tested"] = alpha_test;
    r.config["alpha_literal_candidate"] = alpha_literal;
    r.config["c0"] = OrderedJson{{"form", "exp(-((y-center)/width)^2)"}, {"center", cfg.c0_center}, {"width", cfg.c0_width}};
    r.config["horizon"] = cfg.horizon;
    r.config["probes"] = cfg.probes;
    r.config["paths"] = cfg.paths;
    r.config["dt"] = cfg.dt;
    r.config["pde_dt"] = cfg.pde_dt;
    r.config["half_width"] = cfg.half_width;
    r.config["grid_nodes"] = cfg.grid_nodes;
    r.config["master_seed"] = cfg.seed;

    const Grid grid = make_symmetric_grid(cfg.half_width, cfg.grid_nodes);
    PdeProblem problem{m, grid, sample_on_grid(grid, c0)};
    problem.dt = cfg.pde_dt;
    problem.t_max = cfg.horizon;
    for (double y : cfg.probes) {
        const auto idx = grid.index_of(y);
        if (!idx) throw ConfigError("probe " + detail::num_label(y) + " is not a grid node");
        problem.probe_nodes.push_back(*idx);
    }
    const PdeSolution pde = solve(problem);

    const std::size_t steps = step_count(cfg.horizon, cfg.dt);
    const double sqrt_dt = std::sqrt(cfg.dt);
    auto monte_carlo = [&](double alpha, std::uint64_t component, double y0) {
        const double x0 = unscale(m, y0);
        const auto values = map_paths<double>(
            cfg.paths,
            [&](std::size_t i) {
                RngStream rng(cfg.seed, stream_id(component, i));
                double x = x0;
                for (std::size_t s = 0; s < steps; ++s) x = step_unchecked(alpha, x, cfg.dt, sqrt_dt, rng);
                return c0(scale(m, x));
            },
            cfg.workers);
        return summarize(values);
    };

    const bool candidates_differ = std::abs(alpha_literal - alpha_test) > 1e-9;
    CurveTable probes{"probes",
                      {"y0", "pde", "mc_tested", "se_tested", "mc_literal", "se_literal", "deviation_literal_z"},
                      {}};
    double max_literal_z = 0.0;
    OrderedJson deviations = OrderedJson::array();
    for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
        const double y0 = cfg.probes[p];
        const double c_pde = pde.probe_series[p].back();
        const auto tested = monte_carlo(alpha_test, 30 + 2 * p, y0);
        const auto literal = candidates_differ ? monte_carlo(alpha_literal, 31 + 2 * p, y0) : tested;
        const double tol = std::max(kNullSe * tested.se, 2e-3);
        r.diagnostics.push_back({"agreement:y0=" + detail::num_label(y0), std::abs(c_pde - tested.mean) / tol, 1.0,
                                 Comparison::less_equal, "|PDE - MC| / max(3 SE, 2e-3) with the tested alpha"});
        const double lz = literal.se > 0.0 ? std::abs(c_pde - literal.mean) / literal.se : 0.0;
        max_literal_z = std::max(max_literal_z, lz);
        probes.rows.push_back({y0, c_pde, tested.mean, tested.se, literal.mean, literal.se, lz});
        deviations.push_back(OrderedJson{{"y0", y0}, {"deviation", literal.mean - c_pde}, {"z", lz}});
    }
    if (candidates_differ)
        r.diagnostics.push_back({"literal_candidate_rejection_z", max_literal_z, kRejectSe, Comparison::greater,
                                 "max over probes of |PDE - MC| / SE with alpha = D+/(D+ + D-)"});
    r.findings["literal_candidate_deviation"] = deviations;
    r.findings["candidates_coincide"] = !candidates_differ;
    r.findings["pde_warnings"] = pde.warnings;
    r.findings["pde_diffusion_number"] = pde.diffusion_number;
    r.findings["max_interface_flux_residual"] = [&] {
        double mx = 0.0;
        for (double v : interface_flux_residual(pde, m, grid)) mx = std::max(mx, std::abs(v));
        return mx;
    }();

    CurveTable series{"pde_probe_series", {"t"}, {}};
    for (double y : cfg.probes) series.columns.push_back("c_y0=" + detail::num_label(y));
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.01 / cfg.pde_dt)));
    for (std::size_t k = 0; k < pde.times.size(); k += stride) {
        std::vector<double> row{pde.times[k]};
        for (const auto& s : pde.probe_series) row.push_back(s[k]);
        series.rows.push_back(std::move(row));
    }
    r.tables.push_back(std::move(probes));
    r.tables.push_back(std::move(series));
    r.wall_time_seconds = clock.seconds();
    return r;
}

}  // namespace interface_lab
