#pragma once

#include <stdexcept>
#include <string>

namespace fuzzybox {

// Error taxonomy mirrored by the CLI exit codes:
//   io_error -> 2, config_error -> 3, numerical_error -> 4.
// Bad user-supplied values (geometry, grid, parameters) are config errors;
// quadrature non-convergence, divergence and singular mass regions are
// numerical errors.

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fuzzybox
