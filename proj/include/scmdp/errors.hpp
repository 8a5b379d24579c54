#pragma once

#include <stdexcept>
#include <string>

namespace scmdp {

/// Malformed or out-of-range arguments (bad indices, roster mismatch, bad config).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A function was asked for a value outside its domain, e.g. a tabular reward
/// lookup for a profile it was never given.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A check mode that cannot run against the supplied reward.
class ModeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Enumeration would exceed the configured cap.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

}  // namespace scmdp
