#include "fuzzybox/operators.hpp"

#include <cmath>
#include <vector>

#include "fuzzybox/quadrature.hpp"
#include "fuzzybox/windowfn.hpp"

namespace fuzzybox::operators {

namespace {
constexpr double kInvSqrtPi = 0.56418958354775628695;

void check_resolution(const Grid& grid, const QuantizationParams& p, const char* who) {
    p.validate();
    if (grid.h() > p.ell / 10.0 * (1.0 + 1e-12))
        throw config_error(std::string(who) +
                           ": grid under-resolves the smearing width (need h <= ell/10)");
}

std::vector<double> sample_diag(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> d(grid.n);
    for (int j = 0; j < grid.n; ++j) d[j] = f(grid.x(j));
    return d;
}
} // namespace

double position_symbol(double x, const Geometry& g, const QuantizationParams& p) {
    p.validate();
    return x * windowfn::window_profile(x, g, p.ell) +
           0.5 * p.ell * p.ell * windowfn::window_profile_d1(x, g, p.ell);
}

double spectral_density(double x, const Geometry& g, const QuantizationParams& p) {
    p.validate();
    return windowfn::window_profile(x, g, p.ell) +
           x * windowfn::window_profile_d1(x, g, p.ell) +
           0.5 * p.ell * p.ell * windowfn::window_profile_d2(x, g, p.ell);
}

double spectral_weight(double c, double d, const Geometry& g, const QuantizationParams& p,
                       double abs_tol) {
    p.validate();
    if (!(c < d)) throw config_error("spectral_weight: require c < d");
    std::vector<double> splits{g.a};
    if (g.is_bounded()) splits.push_back(g.b);
    return quad::integrate_or_throw([&](double x) { return spectral_density(x, g, p); }, c, d,
                                    abs_tol, splits, "spectral_weight");
}

double mass_inverse(double x, const Geometry& g, const QuantizationParams& p) {
    p.validate();
    return windowfn::window_profile(x, g, p.ell) / p.mass;
}

double mass_effective(double x, const Geometry& g, const QuantizationParams& p) {
    // Reciprocal of the primary inverse form; +inf deep outside where the
    // window underflows, which callers report rather than fear.
    return 1.0 / mass_inverse(x, g, p);
}

double potential(PotentialSign sign, double x, const Geometry& g, const QuantizationParams& p) {
    p.validate();
    // (ell^2/2) W'' = -[u e^{-u^2} - v e^{-v^2}]/sqrt(pi); evaluating the
    // Gaussians directly keeps the two branches consistent to the last bit
    // with the separately exported window derivatives.
    const double ell = p.ell;
    const double u = (x - g.a) / ell;
    double gauss = u * std::exp(-u * u);
    if (g.is_bounded()) {
        const double v = (x - g.b) / ell;
        gauss -= v * std::exp(-v * v);
    }
    const double half_l2_wpp = -kInvSqrtPi * gauss;
    const double w = windowfn::window_profile(x, g, ell);
    const double pref = p.hbar * p.hbar / (4.0 * p.mass * ell * ell);
    return sign == PotentialSign::plus ? pref * (w + half_l2_wpp) : pref * (w - half_l2_wpp);
}

double commutator_symbol(double x, const Geometry& g, const QuantizationParams& p) {
    return windowfn::window_profile(x, g, p.ell) * spectral_density(x, g, p);
}

double poisson_bracket_symbols(double q, const Geometry& g, const QuantizationParams& p) {
    p.validate();
    const double wide = std::sqrt(2.0) * p.ell;
    const double w = windowfn::window_profile(q, g, wide);
    const double w1 = windowfn::window_profile_d1(q, g, wide);
    const double w2 = windowfn::window_profile_d2(q, g, wide);
    return w * (w + q * w1 + p.ell * p.ell * w2);
}

std::vector<double> weak_limit_errors(const std::function<double(double)>& phi, double lo,
                                      double hi, const Geometry& g,
                                      const QuantizationParams& base,
                                      const std::vector<double>& ells, double abs_tol) {
    base.validate();
    if (!(lo < hi)) throw config_error("weak_limit_errors: require lo < hi");
    if (ells.empty()) throw config_error("weak_limit_errors: need at least one width");

    // Distributional target: indicator plus the coordinate-weighted endpoint
    // spikes +a/2 at a and -b/2 at b.
    const double ia = std::max(lo, g.a);
    const double ib = g.is_bounded() ? std::min(hi, g.b) : hi;
    double target = 0.0;
    if (ia < ib) target = quad::integrate_or_throw(phi, ia, ib, abs_tol, {}, "weak_limit target");
    target += 0.5 * g.a * phi(g.a);
    if (g.is_bounded()) target -= 0.5 * g.b * phi(g.b);

    std::vector<double> errors;
    errors.reserve(ells.size());
    std::vector<double> splits{g.a};
    if (g.is_bounded()) splits.push_back(g.b);
    for (double ell : ells) {
        const QuantizationParams prm = base.with_ell(ell);
        const double val = quad::integrate_or_throw(
            [&](double x) { return commutator_symbol(x, g, prm) * phi(x); }, lo, hi, abs_tol,
            splits, "weak_limit integral");
        errors.push_back(std::fabs(val - target));
    }
    return errors;
}

BandedOperator window_matrix(const Grid& grid, const Geometry& g, const QuantizationParams& p) {
    check_resolution(grid, p, "window_matrix");
    return BandedOperator::diagonal(grid,
                                    sample_diag(grid, [&](double x) {
                                        return windowfn::window_profile(x, g, p.ell);
                                    }));
}

BandedOperator position_matrix(const Grid& grid, const Geometry& g, const QuantizationParams& p) {
    check_resolution(grid, p, "position_matrix");
    return BandedOperator::diagonal(
        grid, sample_diag(grid, [&](double x) { return position_symbol(x, g, p); }));
}

BandedOperator momentum_matrix(const Grid& grid, const Geometry& g, const QuantizationParams& p) {
    check_resolution(grid, p, "momentum_matrix");
    const int n = grid.n;
    const double h = grid.h();
    const std::vector<double> w =
        sample_diag(grid, [&](double x) { return windowfn::window_profile(x, g, p.ell); });

    // R = -i hbar diag(W) D with centered interior rows and one-sided
    // 2nd-order boundary rows, then the exact Hermitization (R+R^dagger)/2.
    BandedOperator R(grid, 2, false);
    const std::complex<double> c(0.0, -p.hbar);
    R.at(0, 0) = c * w[0] * (-1.5 / h);
    R.at(0, 1) = c * w[0] * (2.0 / h);
    R.at(0, 2) = c * w[0] * (-0.5 / h);
    for (int j = 1; j < n - 1; ++j) {
        R.at(j, j - 1) = c * w[j] * (-0.5 / h);
        R.at(j, j + 1) = c * w[j] * (0.5 / h);
    }
    R.at(n - 1, n - 1) = c * w[n - 1] * (1.5 / h);
    R.at(n - 1, n - 2) = c * w[n - 1] * (-2.0 / h);
    R.at(n - 1, n - 3) = c * w[n - 1] * (0.5 / h);
    R.hermitize();
    return R;
}

BandedOperator hamiltonian_matrix(OrderingChoice ordering, const Grid& grid, const Geometry& g,
                                  const QuantizationParams& p) {
    check_resolution(grid, p, "hamiltonian_matrix");
    const int n = grid.n;
    const double h = grid.h();
    const double h2 = h * h;

    if (ordering == OrderingChoice::p_sandwich) {
        // Conservative three-point form with the inverse mass at midpoints:
        // exactly symmetric by construction, plus diag V-.
        BandedOperator H(grid, 1, true);
        auto ginv = [&](double x) { return mass_inverse(x, g, p); };
        const double pref = 0.5 * p.hbar * p.hbar / h2;
        // One inverse-mass value per bond, shared by the two rows that touch
        // it; evaluating x(j)+h/2 and x(j+1)-h/2 separately differs by an ulp
        // and would leave a ~1e-15 asymmetry.
        std::vector<double> gmid(n > 1 ? n - 1 : 0);
        for (int j = 0; j + 1 < n; ++j) gmid[j] = ginv(grid.x(j) + 0.5 * h);
        for (int j = 0; j < n; ++j) {
            const double gp = j + 1 < n ? gmid[j] : 0.0;
            const double gm = j > 0 ? gmid[j - 1] : 0.0;
            H.at(j, j) = pref * (gp + gm) + potential(PotentialSign::minus, grid.x(j), g, p);
            if (j + 1 < n) H.at(j, j + 1) = -pref * gp;
            if (j > 0) H.at(j, j - 1) = -pref * gm;
        }
        return H;
    }

    // anticommutator_half: K = -(hbar^2/4)(diag(g) D2 + D2 diag(g)), with a
    // 2nd-order one-sided D2 boundary row, Hermitized, plus diag V+.
    BandedOperator D2(grid, 3, false);
    D2.at(0, 0) = 2.0 / h2;
    D2.at(0, 1) = -5.0 / h2;
    D2.at(0, 2) = 4.0 / h2;
    D2.at(0, 3) = -1.0 / h2;
    for (int j = 1; j < n - 1; ++j) {
        D2.at(j, j - 1) = 1.0 / h2;
        D2.at(j, j) = -2.0 / h2;
        D2.at(j, j + 1) = 1.0 / h2;
    }
    D2.at(n - 1, n - 1) = 2.0 / h2;
    D2.at(n - 1, n - 2) = -5.0 / h2;
    D2.at(n - 1, n - 3) = 4.0 / h2;
    D2.at(n - 1, n - 4) = -1.0 / h2;

    const std::vector<double> ginv =
        sample_diag(grid, [&](double x) { return mass_inverse(x, g, p); });
    BandedOperator K(grid, 3, false);
    for (int j = 0; j < n; ++j)
        for (int k = std::max(0, j - 3); k <= std::min(n - 1, j + 3); ++k)
            K.at(j, k) = -0.25 * p.hbar * p.hbar * (ginv[j] + ginv[k]) * D2.get(j, k);
    K.hermitize();
    for (int j = 0; j < n; ++j)
        K.at(j, j) += potential(PotentialSign::plus, grid.x(j), g, p);
    return K;
}

BandedOperator commutator_matrix(const Grid& grid, const Geometry& g,
                                 const QuantizationParams& p) {
    const BandedOperator Q = position_matrix(grid, g, p);
    const BandedOperator P = momentum_matrix(grid, g, p);
    const BandedOperator QP = BandedOperator::multiply(Q, P);
    BandedOperator PQ = BandedOperator::multiply(P, Q);
    PQ.scale(-1.0);
    BandedOperator C = BandedOperator::add(QP, PQ);
    C.scale(std::complex<double>(0.0, -1.0 / p.hbar)); // divide by i hbar
    return C;
}

} // namespace fuzzybox::operators
