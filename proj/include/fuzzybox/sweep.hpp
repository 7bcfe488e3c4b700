#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fuzzybox::par {

// Execution policy for the embarrassingly parallel sweeps (curve sampling,
// scan loops, phase-space grids, trajectory batches).  Every kernel writes
// result i into slot i, so the two policies produce bitwise-identical output;
// `serial` is the reference implementation the tests compare against.
enum class Exec { serial, openmp };

int max_threads();

// Runs fn(i) for i in [0, n).  fn must be thread-safe and must only write to
// its own output slot.
void for_index(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn);

inline std::vector<double> map_to_doubles(std::size_t n, Exec exec,
                                          const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(n);
    for_index(n, exec, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

// Samples f over xs.
inline std::vector<double> sample_curve(const std::vector<double>& xs, Exec exec,
                                        const std::function<double(double)>& f) {
    return map_to_doubles(xs.size(), exec, [&](std::size_t i) { return f(xs[i]); });
}

} // namespace fuzzybox::par
