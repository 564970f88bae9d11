#pragma once

// Command-line front end: `interface_lab <subcommand> [flags]`.
//
// Flag values are collected as raw strings, merged with an optional JSON
// config file (explicit flags win), then converted and validated, so every
// error names the offending setting. Exit codes: 0 all asserted checks pass,
// 1 some check failed, 2 configuration error, 3 I/O error.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interface_lab/experiments.hpp"
#include "interface_lab/report.hpp"

namespace interface_lab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"kernel-check", "fpt", "occupation", "martingale", "pde-vs-mc"};
    return names;
}

struct RunConfig {
    std::string subcommand;
    double d_plus = 4.0;
    double d_minus = 1.0;
    /// "flux", "half" or "custom:<value>".
    std::string interface_spec = "flux";
    double lambda = 0.8;
    std::optional<double> alpha;
    std::optional<std::size_t> paths;
    std::optional<double> dt;
    std::optional<double> t_max;
    std::optional<double> y0;
    std::optional<double> detector;
    std::vector<double> lambdas;
    std::size_t grid_nodes = 1001;
    double half_width = 10.0;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string format = "json";
    unsigned workers = 0;

    TwoSidedMedium medium() const { return make_medium(d_plus, d_minus, lambda); }
    double grid_spacing() const { return 2.0 * half_width / static_cast<double>(grid_nodes - 1); }
};

struct ParseOutcome {
    std::optional<RunConfig> config;
    int exit_code = kExitPass;
    std::string message;
};

namespace detail {

/// Accepts decimal numbers and simple fractions such as "2/3".
inline std::optional<double> parse_real(std::string_view s) {
    auto parse_plain = [](std::string_view t) -> std::optional<double> {
        double v = 0.0;
        const auto* end = t.data() + t.size();
        auto [p, ec] = std::from_chars(t.data(), end, v);
        if (ec != std::errc() || p != end || t.empty()) return std::nullopt;
        return v;
    };
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto num = parse_plain(s.substr(0, slash));
        const auto den = parse_plain(s.substr(slash + 1));
        if (!num || !den || *den == 0.0) return std::nullopt;
        return *num / *den;
    }
    return parse_plain(s);
}

template <class Int>
std::optional<Int> parse_integer(std::string_view s) {
    Int v{};
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
    return v;
}

struct FlagSpec {
    const char* key;
    const char* flag;
    const char* help;
};

inline const std::vector<FlagSpec>& flag_specs() {
    static const std::vector<FlagSpec> specs{
        {"d_plus", "--d-plus", "dispersion coefficient on y >= 0"},
        {"d_minus", "--d-minus", "dispersion coefficient on y < 0"},
        {"interface", "--interface", "flux | half | custom:<lambda>"},
        {"alpha", "--alpha", "transmission parameter override (discrepancy runs)"},
        {"paths", "--paths", "Monte Carlo path count"},
        {"dt", "--dt", "time step (kernel-check: single step length)"},
        {"t_max", "--t-max", "horizon"},
        {"y0", "--y0", "start point (pde-vs-mc: single probe point)"},
        {"detector", "--detector", "fpt: detector distance y (injection at -y and +y)"},
        {"lambdas", "--lambdas", "occupation: comma-separated lambda sweep (fractions allowed)"},
        {"grid_nodes", "--grid-nodes", "PDE grid nodes across [-half_width, half_width] (odd)"},
        {"half_width", "--half-width", "PDE domain half-width"},
        {"seed", "--seed", "master seed"},
        {"out", "--out", "output file (default stdout)"},
        {"format", "--format", "csv | json"},
        {"threads", "--threads", "worker threads (0 = INTERFACE_LAB_THREADS or hardware)"},
    };
    return specs;
}

inline std::string json_to_raw(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : ",") + json_to_raw(e);
        return s;
    }
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

class ConfigProblem : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double real_setting(const std::string& key, const std::string& raw) {
    const auto v = parse_real(raw);
    if (!v) throw ConfigProblem(key + ": invalid number '" + raw + "'");
    return *v;
}

inline double positive_setting(const std::string& key, const std::string& raw) {
    const double v = real_setting(key, raw);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigProblem(key + ": must be > 0");
    return v;
}

}  // namespace detail

inline ParseOutcome parse(const std::vector<std::string>& args) {
    CLI::App app{"Interfacial diffusion laboratory: skew Brownian motion, first passage and occupation times, "
                 "and the interface PDE",
                 "interface_lab"};
    app.require_subcommand(1, 1);
    std::map<std::string, std::string> raw;
    std::string config_file;
    std::vector<CLI::App*> subs;
    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name);
        for (const auto& spec : detail::flag_specs()) sub->add_option(spec.flag, raw[spec.key], spec.help);
        sub->add_option("--config", config_file, "JSON file supplying defaults; explicit flags win");
        subs.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {std::nullopt, kExitPass, app.help()};
    } catch (const CLI::CallForAllHelp&) {
        return {std::nullopt, kExitPass, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        return {std::nullopt, kExitConfig, std::string(e.what()) + "\n" + app.help()};
    }

    RunConfig cfg;
    CLI::App* active = nullptr;
    for (auto* s : subs)
        if (s->parsed()) active = s;
    cfg.subcommand = active->get_name();

    // Flags given explicitly on the command line.
    std::map<std::string, bool> explicit_flag;
    for (const auto& spec : detail::flag_specs()) explicit_flag[spec.key] = active->count(spec.flag) > 0;

    try {
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw detail::ConfigProblem("config: cannot read '" + config_file + "'");
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw detail::ConfigProblem(std::string("config: invalid JSON: ") + e.what());
            }
            if (!j.is_object()) throw detail::ConfigProblem("config: top level must be an object");
            for (const auto& [key, value] : j.items()) {
                if (!explicit_flag.contains(key)) throw detail::ConfigProblem("config: unknown key '" + key + "'");
                if (!explicit_flag[key]) {
                    raw[key] = detail::json_to_raw(value);
                    explicit_flag[key] = true;
                }
            }
        }
        auto given = [&](const char* key) { return explicit_flag[key]; };

        if (given("d_plus")) cfg.d_plus = detail::real_setting("d_plus", raw["d_plus"]);
        if (given("d_minus")) cfg.d_minus = detail::real_setting("d_minus", raw["d_minus"]);
        if (given("interface")) cfg.interface_spec = raw["interface"];
        if (!(cfg.d_plus > 0.0) || !std::isfinite(cfg.d_plus)) throw detail::ConfigProblem("d_plus: must be > 0");
        if (!(cfg.d_minus > 0.0) || !std::isfinite(cfg.d_minus)) throw detail::ConfigProblem("d_minus: must be > 0");
        if (cfg.interface_spec == "flux") {
            cfg.lambda = flux_continuity_lambda(cfg.d_plus, cfg.d_minus);
        } else if (cfg.interface_spec == "half") {
            cfg.lambda = 0.5;
        } else if (cfg.interface_spec.starts_with("custom:")) {
            cfg.lambda = detail::real_setting("interface", cfg.interface_spec.substr(7));
            if (!(cfg.lambda > 0.0 && cfg.lambda < 1.0))
                throw detail::ConfigProblem("interface: custom lambda must lie in (0,1)");
        } else {
            throw detail::ConfigProblem("interface: expected flux, half or custom:<value>");
        }
        if (given("alpha")) {
            const double a = detail::real_setting("alpha", raw["alpha"]);
            if (!(a > 0.0 && a < 1.0)) throw detail::ConfigProblem("alpha: must lie in (0,1)");
            cfg.alpha = a;
        }
        if (given("paths")) {
            const auto p = detail::parse_integer<std::size_t>(raw["paths"]);
            if (!p || *p < 2) throw detail::ConfigProblem("paths: must be an integer >= 2");
            cfg.paths = *p;
        }
        if (given("dt")) cfg.dt = detail::positive_setting("dt", raw["dt"]);
        if (given("t_max")) cfg.t_max = detail::positive_setting("t_max", raw["t_max"]);
        if (cfg.dt && cfg.t_max && *cfg.t_max < *cfg.dt) throw detail::ConfigProblem("t_max: must be >= dt");
        if (given("y0")) cfg.y0 = detail::real_setting("y0", raw["y0"]);
        if (given("detector")) cfg.detector = detail::positive_setting("detector", raw["detector"]);
        if (given("lambdas")) {
            std::stringstream ss(raw["lambdas"]);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const double v = detail::real_setting("lambdas", item);
                if (!(v > 0.0 && v < 1.0)) throw detail::ConfigProblem("lambdas: each value must lie in (0,1)");
                cfg.lambdas.push_back(v);
            }
            if (cfg.lambdas.empty()) throw detail::ConfigProblem("lambdas: empty list");
        }
        if (given("grid_nodes")) {
            const auto n = detail::parse_integer<std::size_t>(raw["grid_nodes"]);
            if (!n || *n < 7 || *n % 2 == 0) throw detail::ConfigProblem("grid_nodes: must be an odd integer >= 7");
            cfg.grid_nodes = *n;
        }
        if (given("half_width")) cfg.half_width = detail::positive_setting("half_width", raw["half_width"]);
        if (given("seed")) {
            const auto s = detail::parse_integer<std::uint64_t>(raw["seed"]);
            if (!s) throw detail::ConfigProblem("seed: must be a non-negative integer");
            cfg.seed = *s;
        }
        if (given("out")) cfg.out = raw["out"];
        if (given("format")) cfg.format = raw["format"];
        if (cfg.format != "csv" && cfg.format != "json") throw detail::ConfigProblem("format: expected csv or json");
        if (given("threads")) {
            const auto t = detail::parse_integer<unsigned>(raw["threads"]);
            if (!t) throw detail::ConfigProblem("threads: must be a non-negative integer");
            cfg.workers = *t;
        }
        (void)cfg.medium();
    } catch (const detail::ConfigProblem& e) {
        return {std::nullopt, kExitConfig, e.what()};
    } catch (const DomainError& e) {
        return {std::nullopt, kExitConfig, e.what()};
    }
    return {cfg, kExitPass, ""};
}

inline ParseOutcome parse(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return parse(args);
}

/// Runs the configured experiment. Throws ConfigError / DomainError for
/// settings the experiment rejects.
inline ExperimentReport run(const RunConfig& c) {
    const TwoSidedMedium m = c.medium();
    const double alpha_override = c.alpha.value_or(0.0);
    ExperimentReport r;
    if (c.subcommand == "kernel-check") {
        KernelCheckConfig k;
        k.medium = m;
        k.alpha_override = alpha_override;
        k.paths = c.paths.value_or(k.paths);
        k.step_length = c.dt.value_or(k.step_length);
        k.seed = c.seed;
        k.workers = c.workers;
        r = run_kernel_check(k);
    } else if (c.subcommand == "fpt") {
        FptConfig f;
        f.medium = m;
        f.alpha_override = alpha_override;
        f.paths = c.paths.value_or(f.paths);
        f.dt = c.dt.value_or(f.dt);
        f.pde_dt = f.dt;
        f.t_max = c.t_max.value_or(f.t_max);
        f.y = c.detector.value_or(f.y);
        f.pde_h = c.grid_spacing();
        f.seed = c.seed;
        f.workers = c.workers;
        r = run_fpt_experiment(f);
    } else if (c.subcommand == "occupation") {
        OccupationConfig o;
        o.d_plus = c.d_plus;
        o.d_minus = c.d_minus;
        o.lambdas = c.lambdas;
        o.paths = c.paths.value_or(o.paths);
        o.dt = c.dt.value_or(o.dt);
        o.horizon = c.t_max.value_or(o.horizon);
        o.report_every = std::min(o.report_every, o.horizon);
        o.y0 = c.y0.value_or(o.y0);
        o.seed = c.seed;
        o.workers = c.workers;
        r = run_occupation_experiment(o);
    } else if (c.subcommand == "martingale") {
        MartingaleConfig mc;
        mc.medium = m;
        if (c.alpha) mc.alphas = {m.alpha_star(), *c.alpha};
        mc.paths = c.paths.value_or(mc.paths);
        mc.dt = c.dt.value_or(mc.dt);
        mc.horizon = c.t_max.value_or(mc.horizon);
        mc.y0 = c.y0.value_or(mc.y0);
        mc.seed = c.seed;
        mc.workers = c.workers;
        r = run_martingale_experiment(mc);
    } else if (c.subcommand == "pde-vs-mc") {
        PdeVsMcConfig p;
        p.medium = m;
        p.alpha_override = alpha_override;
        p.paths = c.paths.value_or(p.paths);
        p.dt = c.dt.value_or(p.dt);
        p.pde_dt = p.dt;
        p.horizon = c.t_max.value_or(p.horizon);
        if (c.y0) p.probes = {*c.y0};
        p.half_width = c.half_width;
        p.grid_nodes = c.grid_nodes;
        p.seed = c.seed;
        p.workers = c.workers;
        r = run_pde_vs_mc(p);
    } else {
        throw ConfigError("unknown subcommand '" + c.subcommand + "'");
    }
    r.config["interface"] = c.interface_spec;
    return r;
}

/// CSV output: one file per table, `<stem>_<table>.csv` next to --out, or all
/// tables on stdout separated by "# table: <name>" lines.
inline int emit(const RunConfig& c, const ExperimentReport& r, std::ostream& out, std::ostream& err) {
    try {
        if (c.format == "json") {
            const std::string text = dump_json(to_json(r));
            if (c.out.empty()) {
                out << text;
            } else {
                std::ofstream f(c.out, std::ios::binary);
                if (!f || !(f << text) || !f.flush()) throw std::ios_base::failure("cannot write " + c.out);
            }
        } else if (c.out.empty()) {
            for (const auto& t : r.tables) out << "# table: " << t.name << '\n' << to_csv(t);
        } else {
            const std::filesystem::path base(c.out);
            for (const auto& t : r.tables) {
                auto path = base.parent_path() / (base.stem().string() + "_" + t.name + ".csv");
                std::ofstream f(path, std::ios::binary);
                if (!f || !(f << to_csv(t)) || !f.flush()) throw std::ios_base::failure("cannot write " + path.string());
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return r.passed() ? kExitPass : kExitAssertionFailed;
}

inline int run_and_emit(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    ExperimentReport r;
    try {
        r = run(c);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ResourceError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    for (const auto& d : r.diagnostics)
        err << (d.passed() ? "PASS " : "FAIL ") << d.name << ": " << format_double(d.measured) << ' '
            << to_string(d.comparison) << ' ' << format_double(d.threshold) << '\n';
    return emit(c, r, out, err);
}

inline int main(int argc, const char* const* argv) {
    const auto parsed = parse(argc, argv);
    if (!parsed.config) {
        (parsed.exit_code == kExitPass ? std::cout : std::cerr) << parsed.message << '\n';
        return parsed.exit_code;
    }
    return run_and_emit(*parsed.config);
}

}  // namespace interface_lab::cli
