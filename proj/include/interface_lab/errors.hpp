#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace interface_lab {

/// Argument outside the domain of an operation. `field()` names the offending input.
class DomainError : public std::domain_error {
public:
    DomainError(std::string field, const std::string& what)
        : std::domain_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A configured resource cap (path length, grid size) would be exceeded.
class ResourceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A test function's interface class does not match the medium under test.
class MismatchError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class SingularSystemError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid or contradictory experiment / command-line configuration.
class ConfigError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw DomainError(field, "must be finite");
}

inline void require_positive(double v, const char* field) {
    require_finite(v, field);
    if (!(v > 0.0)) throw DomainError(field, "must be > 0");
}

inline void require_open_unit(double v, const char* field) {
    require_finite(v, field);
    if (!(v > 0.0 && v < 1.0)) throw DomainError(field, "must lie in (0,1)");
}

}  // namespace detail
}  // namespace interface_lab
