#include "fuzzybox/states.hpp"

#include <cmath>

#include "fuzzybox/operators.hpp"
#include "fuzzybox/quadrature.hpp"
#include "fuzzybox/windowfn.hpp"

namespace fuzzybox::states {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

double GaussianProbe::amplitude(double x) const {
    const double d = (x - center) / width;
    return std::pow(kPi * width * width, -0.25) * std::exp(-0.5 * d * d);
}

double GaussianProbe::amplitude_d1(double x) const {
    return -(x - center) / (width * width) * amplitude(x);
}

std::complex<double> GaussianProbe::value(double x) const {
    const double ph = boost * x;
    return amplitude(x) * std::complex<double>(std::cos(ph), std::sin(ph));
}

WaveFunction sample_probe(const GaussianProbe& probe, const Grid& grid) {
    probe.validate();
    WaveFunction f(grid);
    for (int j = 0; j < grid.n; ++j) f.values[j] = probe.value(grid.x(j));
    return f;
}

std::complex<double> expectation(const BandedOperator& op, const WaveFunction& state) {
    if (!(state.grid == op.grid())) throw config_error("expectation: grid mismatch");
    const WaveFunction applied = op.apply(state);
    return inner_product(state, applied);
}

UncertaintyResult uncertainty_product(const GaussianProbe& probe, const Geometry& g,
                                      const QuantizationParams& p, double abs_tol) {
    probe.validate();
    p.validate();

    // All integrands carry the probe envelope squared, so 12 widths of reach
    // suffice; split at the interval endpoints where the window has structure.
    const double lo = probe.center - 12.0 * probe.width;
    const double hi = probe.center + 12.0 * probe.width;
    std::vector<double> splits{g.a};
    if (g.is_bounded()) splits.push_back(g.b);

    auto integrate = [&](const std::function<double(double)>& f, const char* who) {
        return quad::integrate_or_throw(f, lo, hi, abs_tol, splits, who);
    };

    auto rho2 = [&](double x) {
        const double r = probe.amplitude(x);
        return r * r;
    };
    auto Q = [&](double x) { return operators::position_symbol(x, g, p); };
    auto W = [&](double x) { return windowfn::window_profile(x, g, p.ell); };

    UncertaintyResult res;
    res.q_mean = integrate([&](double x) { return Q(x) * rho2(x); }, "q mean");
    const double q2 = integrate([&](double x) { return Q(x) * Q(x) * rho2(x); }, "q second");
    res.q_spread = std::sqrt(std::max(0.0, q2 - res.q_mean * res.q_mean));

    // Modified momentum on psi = rho e^{i k x}:
    //   A_p psi = e^{ikx} [ hbar k W rho - i hbar (W rho' + W' rho / 2) ],
    // so <A_p> = hbar k Int W rho^2 and
    // <A_p^2> = hbar^2 k^2 Int W^2 rho^2 + hbar^2 Int (W rho' + W' rho / 2)^2.
    const double k = probe.boost;
    const double hb = p.hbar;
    res.p_mean = hb * k * integrate([&](double x) { return W(x) * rho2(x); }, "p mean");
    const double p2_wave =
        hb * hb * k * k * integrate([&](double x) { return W(x) * W(x) * rho2(x); }, "p wave");
    const double p2_env = hb * hb *
        integrate(
            [&](double x) {
                const double t = W(x) * probe.amplitude_d1(x) +
                                 0.5 * windowfn::window_profile_d1(x, g, p.ell) *
                                     probe.amplitude(x);
                return t * t;
            },
            "p envelope");
    const double p2 = p2_wave + p2_env;
    res.p_spread = std::sqrt(std::max(0.0, p2 - res.p_mean * res.p_mean));

    res.commutator_mean =
        integrate([&](double x) { return operators::commutator_symbol(x, g, p) * rho2(x); },
                  "commutator mean");
    return res;
}

UncertaintyResult uncertainty_product_grid(const GaussianProbe& probe, const Grid& grid,
                                           const Geometry& g, const QuantizationParams& p) {
    const WaveFunction psi = sample_probe(probe, grid);
    const BandedOperator Q = operators::position_matrix(grid, g, p);
    const BandedOperator P = operators::momentum_matrix(grid, g, p);

    UncertaintyResult res;
    res.q_mean = expectation(Q, psi).real();
    const WaveFunction Qpsi = Q.apply(psi);
    res.q_spread = std::sqrt(std::max(0.0, inner_product(Qpsi, Qpsi).real() -
                                               res.q_mean * res.q_mean));
    res.p_mean = expectation(P, psi).real();
    const WaveFunction Ppsi = P.apply(psi);
    res.p_spread = std::sqrt(std::max(0.0, inner_product(Ppsi, Ppsi).real() -
                                               res.p_mean * res.p_mean));

    std::vector<double> com(grid.n);
    for (int j = 0; j < grid.n; ++j) com[j] = operators::commutator_symbol(grid.x(j), g, p);
    res.commutator_mean = expectation(BandedOperator::diagonal(grid, com), psi).real();
    return res;
}

std::vector<double> com_scan(const std::vector<double>& centers, const Geometry& g,
                             const QuantizationParams& p, double width, par::Exec exec,
                             double abs_tol) {
    p.validate();
    if (!(width > 0.0)) throw config_error("com_scan: width must be positive");
    return par::map_to_doubles(centers.size(), exec, [&](std::size_t i) {
        GaussianProbe probe{centers[i], width, 0.0};
        const double lo = probe.center - 12.0 * width;
        const double hi = probe.center + 12.0 * width;
        std::vector<double> splits{g.a};
        if (g.is_bounded()) splits.push_back(g.b);
        return quad::integrate_or_throw(
            [&](double x) {
                const double r = probe.amplitude(x);
                return operators::commutator_symbol(x, g, p) * r * r;
            },
            lo, hi, abs_tol, splits, "com_scan");
    });
}

} // namespace fuzzybox::states
