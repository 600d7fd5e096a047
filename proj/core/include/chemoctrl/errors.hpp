#pragma once

#include <stdexcept>
#include <string>

namespace chemoctrl {

// Bad user input: shapes, signs, missing keys, out-of-range parameters.
class InvalidInputError : public std::invalid_argument {
public:
    explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative solve failed to reach its tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double achieved_residual, int iterations)
        : std::runtime_error(what),
          achieved_residual(achieved_residual),
          iterations(iterations) {}

    double achieved_residual;
    int iterations;
};

// Config file problems; line = 0 when no line applies.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line(line) {}
    int line;
};

// Snapshot file problems (bad magic, truncation, shape mismatch).
class SnapshotError : public std::runtime_error {
public:
    explicit SnapshotError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chemoctrl
