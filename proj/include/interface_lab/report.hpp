#pragma once

// Experiment reports and their deterministic JSON / CSV serialisation.
// Floating-point values are written with 17 significant digits ("%.17g":
// '.' separator, lowercase 'e' exponent); non-finite values become null in
// JSON and "nan"/"inf" in CSV.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace interface_lab {

using OrderedJson = nlohmann::ordered_json;

struct CurveTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

enum class Comparison { less, less_equal, greater, greater_equal };

inline const char* to_string(Comparison c) noexcept {
    switch (c) {
        case Comparison::less: return "<";
        case Comparison::less_equal: return "<=";
        case Comparison::greater: return ">";
        case Comparison::greater_equal: return ">=";
    }
    return "?";
}

/// An asserted check: passed iff `measured <comparison> threshold`.
struct Diagnostic {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    Comparison comparison = Comparison::less_equal;
    std::string note;

    bool passed() const noexcept {
        if (std::isnan(measured)) return false;
        switch (comparison) {
            case Comparison::less: return measured < threshold;
            case Comparison::less_equal: return measured <= threshold;
            case Comparison::greater: return measured > threshold;
            case Comparison::greater_equal: return measured >= threshold;
        }
        return false;
    }
};

struct ExperimentReport {
    std::string experiment;
    OrderedJson config = OrderedJson::object();
    std::vector<CurveTable> tables;
    std::vector<Diagnostic> diagnostics;
    /// Measured but not asserted quantities.
    OrderedJson findings = OrderedJson::object();
    double wall_time_seconds = 0.0;

    bool passed() const noexcept {
        for (const auto& d : diagnostics)
            if (!d.passed()) return false;
        return true;
    }

    const Diagnostic* diagnostic(const std::string& name) const noexcept {
        for (const auto& d : diagnostics)
            if (d.name == name) return &d;
        return nullptr;
    }

    const CurveTable* table(const std::string& name) const noexcept {
        for (const auto& t : tables)
            if (t.name == name) return &t;
        return nullptr;
    }
};

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline OrderedJson to_json(const ExperimentReport& r) {
    OrderedJson j = OrderedJson::object();
    j["experiment"] = r.experiment;
    j["config"] = r.config;
    j["passed"] = r.passed();
    auto& diags = j["diagnostics"] = OrderedJson::array();
    for (const auto& d : r.diagnostics) {
        OrderedJson e = OrderedJson::object();
        e["name"] = d.name;
        e["measured"] = d.measured;
        e["comparison"] = to_string(d.comparison);
        e["threshold"] = d.threshold;
        e["passed"] = d.passed();
        if (!d.note.empty()) e["note"] = d.note;
        diags.push_back(std::move(e));
    }
    j["findings"] = r.findings;
    auto& tables = j["tables"] = OrderedJson::array();
    for (const auto& t : r.tables) {
        OrderedJson e = OrderedJson::object();
        e["name"] = t.name;
        e["columns"] = t.columns;
        e["rows"] = t.rows;
        tables.push_back(std::move(e));
    }
    j["wall_time_seconds"] = r.wall_time_seconds;
    return j;
}

namespace detail {

inline void write_json_string(std::ostream& os, const std::string& s) {
    os << OrderedJson(s).dump();
}

inline void write_json(std::ostream& os, const OrderedJson& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad;
                write_json_string(os, key);
                os << (indent > 0 ? ": " : ":");
                write_json(os, value, indent, depth + 1);
            }
            os << nl << close_pad << '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool scalar = true;
            for (const auto& e : j) scalar = scalar && !e.is_structured();
            if (scalar) {
                os << '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << (indent > 0 ? ", " : ",");
                    write_json(os, j[i], indent, depth + 1);
                }
                os << ']';
                return;
            }
            os << '[' << nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ',' << nl;
                os << pad;
                write_json(os, j[i], indent, depth + 1);
            }
            os << nl << close_pad << ']';
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) os << format_double(v);
            else os << "null";
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace detail

/// JSON text with numbers written by format_double.
inline std::string dump_json(const OrderedJson& j, int indent = 2) {
    std::ostringstream os;
    detail::write_json(os, j, indent, 0);
    os << '\n';
    return os.str();
}

inline std::string to_csv(const CurveTable& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
    return os.str();
}

}  // namespace interface_lab
