#pragma once

#include <stdexcept>
#include <string>

namespace rdent {

/// A state left the admissible range of the flux (e.g. u <= 0 for the sqrt flux).
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, double value, int location = -1)
        : std::domain_error(what), value_(value), location_(location) {}

    double value() const { return value_; }
    /// Element or DoF index where it happened, -1 if unknown.
    int location() const { return location_; }

private:
    double value_;
    int location_;
};

/// Non-finite values, Newton failures and similar.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rdent
