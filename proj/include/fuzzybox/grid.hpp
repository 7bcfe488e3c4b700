#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fuzzybox/errors.hpp"

namespace fuzzybox {

// Uniform position grid x_j = x_min + j*h, j = 0..n-1.
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 2;

    Grid() = default;
    Grid(double lo, double hi, int points) : x_min(lo), x_max(hi), n(points) {
        if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
            throw config_error("grid: require finite x_min < x_max");
        if (n < 3) throw config_error("grid: need at least 3 points");
    }

    // Grid with spacing <= h_max covering [lo, hi] exactly.
    static Grid with_spacing(double lo, double hi, double h_max) {
        if (!(h_max > 0.0)) throw config_error("grid: spacing must be positive");
        const int n = static_cast<int>(std::ceil((hi - lo) / h_max)) + 1;
        return Grid(lo, hi, n < 3 ? 3 : n);
    }

    double h() const { return (x_max - x_min) / (n - 1); }
    double x(int j) const { return x_min + j * h(); }

    bool operator==(const Grid& o) const {
        return x_min == o.x_min && x_max == o.x_max && n == o.n;
    }
};

// Complex wave function sampled on a Grid.  Inner products use the trapezoid
// rule; for states that vanish near the grid edges this is spectrally accurate.
struct WaveFunction {
    Grid grid;
    std::vector<std::complex<double>> values;

    WaveFunction() = default;
    explicit WaveFunction(const Grid& g) : grid(g), values(g.n, {0.0, 0.0}) {}

    double trapezoid_weight(int j) const { return (j == 0 || j == grid.n - 1) ? 0.5 : 1.0; }

    double norm_squared() const {
        double s = 0.0;
        for (int j = 0; j < grid.n; ++j) s += trapezoid_weight(j) * std::norm(values[j]);
        return s * grid.h();
    }
    double norm() const { return std::sqrt(norm_squared()); }

    void normalize() {
        const double nn = norm();
        if (!(nn > 0.0)) throw numerical_error("wavefunction: cannot normalize zero state");
        for (auto& v : values) v /= nn;
    }
};

inline std::complex<double> inner_product(const WaveFunction& bra, const WaveFunction& ket) {
    if (!(bra.grid == ket.grid)) throw config_error("inner_product: grid mismatch");
    std::complex<double> s{0.0, 0.0};
    for (int j = 0; j < bra.grid.n; ++j)
        s += bra.trapezoid_weight(j) * std::conj(bra.values[j]) * ket.values[j];
    return s * bra.grid.h();
}

// Fourth-order centered first derivative (second-order one-sided at the two
// points nearest each edge).  Used by the quadrature oracle so its derivative
// route stays independent of the second-order stencils in the matrix builders.
inline std::vector<std::complex<double>> derivative_fd4(const WaveFunction& f) {
    const int n = f.grid.n;
    const double h = f.grid.h();
    const auto& v = f.values;
    std::vector<std::complex<double>> d(n);
    if (n < 5) throw config_error("derivative_fd4: need at least 5 points");
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[1] = (v[2] - v[0]) / (2.0 * h);
    for (int j = 2; j < n - 2; ++j)
        d[j] = (-v[j + 2] + 8.0 * v[j + 1] - 8.0 * v[j - 1] + v[j - 2]) / (12.0 * h);
    d[n - 2] = (v[n - 1] - v[n - 3]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

} // namespace fuzzybox
