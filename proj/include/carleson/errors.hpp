#pragma once

#include <stdexcept>
#include <string>

namespace carleson {

/// Wrong dimensions or a parameter outside its admissible range.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure ran out of refinement budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An integral was found to grow without bound under refinement.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double partial)
        : std::runtime_error(what), partial_(partial) {}
    double partial_value() const { return partial_; }

private:
    double partial_;
};

}  // namespace carleson
