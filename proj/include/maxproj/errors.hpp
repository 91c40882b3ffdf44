#pragma once

#include <stdexcept>
#include <string>

namespace maxproj {

/// Argument outside the mathematical domain of a function (e.g. |t| > 1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent user input (dimension mismatch, bad CSV row, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A valid request the library deliberately does not support.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace maxproj
