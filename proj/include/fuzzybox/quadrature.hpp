#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fuzzybox/errors.hpp"

namespace fuzzybox::quad {

// Adaptive Gauss-Kronrod 7/15 integration with a deterministic, depth-first
// subdivision order (left half first).  Callers pass explicit breakpoints for
// known kinks (interval endpoints, state centers); each sub-interval is then
// refined independently, so results never depend on thread count or timing.

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // accumulated error estimate
    long evaluations = 0;
    bool converged = true;
};

struct QuadResultC {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

namespace detail {

// Kronrod nodes (positive half) and weights of the classic 7/15 pair.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T> inline double absval(T v) { return std::abs(v); }

// One GK15 panel: returns the Kronrod estimate; err receives |K15 - G7|.
template <class T, class F>
T panel(F&& f, double lo, double hi, double& err, long& evals) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const T fc = f(c);
    T resg = kWg[3] * fc;
    T resk = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        const T fsum = f1 + f2;
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum; // odd indices are Gauss nodes
    }
    evals += 15;
    err = absval((resk - resg) * h);
    return resk * h;
}

template <class T, class F>
void refine(F&& f, double lo, double hi, double tol, int depth, int max_depth,
            T& acc, double& err_acc, long& evals, bool& converged) {
    double perr = 0.0;
    const T pval = panel<T>(f, lo, hi, perr, evals);
    if (perr <= tol || depth >= max_depth) {
        acc += pval;
        err_acc += perr;
        if (perr > tol) converged = false;
        return;
    }
    const double mid = 0.5 * (lo + hi);
    refine<T>(f, lo, mid, 0.5 * tol, depth + 1, max_depth, acc, err_acc, evals, converged);
    refine<T>(f, mid, hi, 0.5 * tol, depth + 1, max_depth, acc, err_acc, evals, converged);
}

template <class T, class F>
auto integrate_impl(F&& f, const std::vector<double>& breaks, double abs_tol, int max_depth) {
    if (breaks.size() < 2) throw config_error("quadrature: need at least two breakpoints");
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (!(breaks[i] < breaks[i + 1]))
            throw config_error("quadrature: breakpoints must be strictly increasing");
    if (!(abs_tol > 0.0)) throw config_error("quadrature: tolerance must be positive");

    T acc{};
    double err = 0.0;
    long evals = 0;
    bool converged = true;
    const double total = breaks.back() - breaks.front();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double frac = (breaks[i + 1] - breaks[i]) / total;
        refine<T>(f, breaks[i], breaks[i + 1], abs_tol * std::max(frac, 1e-3), 0, max_depth,
                  acc, err, evals, converged);
    }
    return std::tuple<T, double, long, bool>{acc, err, evals, converged};
}

} // namespace detail

// Sorts/deduplicates interior split points and clamps them into [lo,hi].
inline std::vector<double> make_breaks(double lo, double hi, std::vector<double> splits = {}) {
    std::vector<double> b{lo};
    std::sort(splits.begin(), splits.end());
    for (double s : splits)
        if (s > lo && s < hi && (b.empty() || s > b.back())) b.push_back(s);
    b.push_back(hi);
    return b;
}

inline QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                            double abs_tol, std::vector<double> splits = {}, int max_depth = 40) {
    if (!(lo < hi)) throw config_error("quadrature: require lo < hi");
    auto [v, e, n, ok] =
        detail::integrate_impl<double>(f, make_breaks(lo, hi, std::move(splits)), abs_tol, max_depth);
    return QuadResult{v, e, n, ok};
}

inline QuadResultC integrate_complex(const std::function<std::complex<double>(double)>& f,
                                     double lo, double hi, double abs_tol,
                                     std::vector<double> splits = {}, int max_depth = 40) {
    if (!(lo < hi)) throw config_error("quadrature: require lo < hi");
    auto [v, e, n, ok] = detail::integrate_impl<std::complex<double>>(
        f, make_breaks(lo, hi, std::move(splits)), abs_tol, max_depth);
    return QuadResultC{v, e, n, ok};
}

// Throwing convenience wrapper: most internal callers want a hard failure when
// the requested tolerance cannot be met.
inline double integrate_or_throw(const std::function<double(double)>& f, double lo, double hi,
                                 double abs_tol, std::vector<double> splits = {},
                                 const char* who = "integral") {
    QuadResult r = integrate(f, lo, hi, abs_tol, std::move(splits));
    if (!r.converged)
        throw numerical_error(std::string(who) + ": quadrature achieved " +
                              std::to_string(r.error) + " > requested tolerance " +
                              std::to_string(abs_tol));
    return r.value;
}

} // namespace fuzzybox::quad
