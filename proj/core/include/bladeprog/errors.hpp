#pragma once

#include <stdexcept>
#include <string>

namespace bladeprog {

/// Invalid input: bad arguments, malformed files, violated preconditions.
/// Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative numerical method failed to reach its tolerance.
/// Maps to CLI exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, long iterations)
        : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations_(iterations) {}

    long iterations() const { return iterations_; }

private:
    long iterations_;
};

}  // namespace bladeprog
