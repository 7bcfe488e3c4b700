#include "fuzzybox/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fuzzybox/quadrature.hpp"
#include "fuzzybox/windowfn.hpp"

namespace fuzzybox::quantizer {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Centroid of |f|^2, used only as a quadrature split hint.
double centroid(const WaveFunction& f) {
    double m0 = 0.0, m1 = 0.0;
    for (int j = 0; j < f.grid.n; ++j) {
        const double w = f.trapezoid_weight(j) * std::norm(f.values[j]);
        m0 += w;
        m1 += w * f.grid.x(j);
    }
    return m0 > 0.0 ? m1 / m0 : 0.5 * (f.grid.x_min + f.grid.x_max);
}
} // namespace

WaveFunction cs_sample(const PhaseState& s, const Grid& g, const QuantizationParams& prm) {
    prm.validate();
    if (!(std::isfinite(s.q) && std::isfinite(s.p)))
        throw config_error("cs_sample: non-finite phase-space label");
    if (s.q - 6.0 * prm.ell < g.x_min || s.q + 6.0 * prm.ell > g.x_max)
        throw config_error("cs_sample: grid does not cover the packet (need q +- 6 ell)");

    WaveFunction out(g);
    const double norm = std::pow(kPi * prm.ell * prm.ell, -0.25);
    const double inv2l2 = 1.0 / (2.0 * prm.ell * prm.ell);
    const double phase0 = -s.p * s.q / (2.0 * prm.hbar);
    for (int j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        const double dx = x - s.q;
        const double amp = norm * std::exp(-dx * dx * inv2l2);
        const double phase = phase0 + s.p * x / prm.hbar;
        out.values[j] = amp * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return out;
}

std::complex<double> cs_overlap(const PhaseState& s1, const PhaseState& s2,
                                const QuantizationParams& prm) {
    prm.validate();
    const double dq = s1.q - s2.q;
    const double dp = s1.p - s2.p;
    const double mag = std::exp(-dq * dq / (4.0 * prm.ell * prm.ell) -
                                prm.ell * prm.ell * dp * dp / (4.0 * prm.hbar * prm.hbar));
    const double phase = (s2.p * s1.q - s2.q * s1.p) / (2.0 * prm.hbar);
    return mag * std::complex<double>(std::cos(phase), std::sin(phase));
}

namespace {

// Shared precomputation for the q-kernels: windowed products of the two states
// and of their 4th-order derivatives.
struct ElementKernel {
    const WaveFunction* bra;
    const WaveFunction* ket;
    std::vector<std::complex<double>> p0;  // conj(bra)*ket
    std::vector<std::complex<double>> pa;  // conj(bra')*ket - conj(bra)*ket'
    std::vector<std::complex<double>> p1;  // conj(bra')*ket + conj(bra)*ket'
    std::vector<std::complex<double>> p2;  // conj(bra')*ket'
    double ell, hbar, mass;

    ElementKernel(const WaveFunction& b, const WaveFunction& k, const QuantizationParams& prm,
                  bool need_derivs)
        : bra(&b), ket(&k), ell(prm.ell), hbar(prm.hbar), mass(prm.mass) {
        const int n = b.grid.n;
        p0.resize(n);
        for (int j = 0; j < n; ++j) p0[j] = std::conj(b.values[j]) * k.values[j];
        if (need_derivs) {
            const auto db = derivative_fd4(b);
            const auto dk = derivative_fd4(k);
            pa.resize(n);
            p1.resize(n);
            p2.resize(n);
            for (int j = 0; j < n; ++j) {
                const auto cb = std::conj(b.values[j]);
                const auto cdb = std::conj(db[j]);
                pa[j] = cdb * k.values[j] - cb * dk[j];
                p1[j] = cdb * k.values[j] + cb * dk[j];
                p2[j] = cdb * dk[j];
            }
        }
    }

    // Index range of grid points within the Gaussian window |y - q| <= 7 ell.
    void window_range(double q, int& j0, int& j1) const {
        const Grid& g = bra->grid;
        const double lo = q - 7.0 * ell, hi = q + 7.0 * ell;
        j0 = std::max(0, static_cast<int>(std::ceil((lo - g.x_min) / g.h())));
        j1 = std::min(g.n - 1, static_cast<int>(std::floor((hi - g.x_min) / g.h())));
    }

    // J_0(q): (pi ell^2)^{-1/2} * integral of conj(bra) ket exp(-(y-q)^2/ell^2).
    std::complex<double> j_unit(double q) const {
        const Grid& g = bra->grid;
        int j0, j1;
        window_range(q, j0, j1);
        std::complex<double> s{0.0, 0.0};
        const double inv_l2 = 1.0 / (ell * ell);
        for (int j = j0; j <= j1; ++j) {
            const double d = g.x(j) - q;
            s += bra->trapezoid_weight(j) * p0[j] * std::exp(-d * d * inv_l2);
        }
        return s * (g.h() / (std::sqrt(kPi) * ell));
    }

    // J_1(q): momentum kernel, (i hbar / 2) * windowed antisymmetric product.
    std::complex<double> j_momentum(double q) const {
        const Grid& g = bra->grid;
        int j0, j1;
        window_range(q, j0, j1);
        std::complex<double> s{0.0, 0.0};
        const double inv_l2 = 1.0 / (ell * ell);
        for (int j = j0; j <= j1; ++j) {
            const double d = g.x(j) - q;
            s += bra->trapezoid_weight(j) * pa[j] * std::exp(-d * d * inv_l2);
        }
        return std::complex<double>(0.0, 0.5 * hbar) * s * (g.h() / (std::sqrt(kPi) * ell));
    }

    // J_2(q): kinetic kernel,
    //   (hbar^2/2m) * integral exp(-(y-q)^2/ell^2)
    //        [conj(bra') - (y-q)/ell^2 conj(bra)] [ket' - (y-q)/ell^2 ket].
    std::complex<double> j_kinetic(double q) const {
        const Grid& g = bra->grid;
        int j0, j1;
        window_range(q, j0, j1);
        std::complex<double> s{0.0, 0.0};
        const double inv_l2 = 1.0 / (ell * ell);
        for (int j = j0; j <= j1; ++j) {
            const double d = g.x(j) - q;
            const double w = bra->trapezoid_weight(j) * std::exp(-d * d * inv_l2);
            const double r = d * inv_l2;
            s += w * (p2[j] - r * p1[j] + r * r * p0[j]);
        }
        return s * (g.h() / (std::sqrt(kPi) * ell)) * (hbar * hbar / (2.0 * mass));
    }
};

} // namespace

std::complex<double> quantize_element(const ObservableSpec& f, const WaveFunction& bra,
                                      const WaveFunction& ket, const Geometry& geo,
                                      const QuantizationParams& prm, double abs_tol) {
    prm.validate();
    if (!(bra.grid == ket.grid)) throw config_error("quantize_element: grid mismatch");
    if (!(abs_tol > 0.0)) throw config_error("quantize_element: tolerance must be positive");

    const bool need_derivs =
        f.kind == ObservableKind::momentum || f.kind == ObservableKind::kinetic;
    ElementKernel kern(bra, ket, prm, need_derivs);

    // Integration range over the packet center q.  The y-window means J(q)
    // vanishes once q is more than 7 ell outside the grid; restricting clips
    // at the accessible region.
    double lo = bra.grid.x_min, hi = bra.grid.x_max;
    if (f.restricted) {
        lo = std::max(lo, geo.a);
        if (geo.is_bounded()) hi = std::min(hi, geo.b);
    }
    if (!(lo < hi)) throw config_error("quantize_element: empty integration range");

    std::vector<double> splits;
    if (geo.a > lo && geo.a < hi) splits.push_back(geo.a);
    if (geo.is_bounded() && geo.b > lo && geo.b < hi) splits.push_back(geo.b);
    splits.push_back(centroid(bra));
    splits.push_back(centroid(ket));

    std::function<std::complex<double>(double)> integrand;
    switch (f.kind) {
        case ObservableKind::unit:
            integrand = [&](double q) { return kern.j_unit(q); };
            break;
        case ObservableKind::position:
            integrand = [&](double q) { return q * kern.j_unit(q); };
            break;
        case ObservableKind::momentum:
            integrand = [&](double q) { return kern.j_momentum(q); };
            break;
        case ObservableKind::kinetic:
            integrand = [&](double q) { return kern.j_kinetic(q); };
            break;
        default:
            throw std::domain_error("quantize_element: unsupported observable kind");
    }

    quad::QuadResultC r = quad::integrate_complex(integrand, lo, hi, abs_tol, splits);
    if (!r.converged)
        throw numerical_error("quantize_element: quadrature achieved " +
                              std::to_string(r.error) + " > tolerance " + std::to_string(abs_tol));
    return r.value;
}

double portrait(const ObservableSpec& f, const PhaseState& at, const Geometry& geo,
                const QuantizationParams& prm, PortraitMethod method, double abs_tol) {
    prm.validate();
    if (!(std::isfinite(at.q) && std::isfinite(at.p)))
        throw config_error("portrait: non-finite phase-space point");

    const double ell = prm.ell;
    const double wide = std::sqrt(2.0) * ell; // packet-vs-packet smearing width
    const double hbar = prm.hbar;
    const double m = prm.mass;
    const double zero_point = hbar * hbar / (2.0 * m * ell * ell);

    if (method == PortraitMethod::closed_form) {
        if (!f.restricted) {
            switch (f.kind) {
                case ObservableKind::unit: return 1.0;
                case ObservableKind::position: return at.q;
                case ObservableKind::momentum: return at.p;
                case ObservableKind::kinetic: return at.p * at.p / (2.0 * m) + zero_point;
            }
            throw std::domain_error("portrait: unsupported observable kind");
        }
        const double B = windowfn::window_profile(at.q, geo, wide);
        switch (f.kind) {
            case ObservableKind::unit: return B;
            case ObservableKind::position:
                return at.q * B + ell * ell * windowfn::window_profile_d1(at.q, geo, wide);
            case ObservableKind::momentum: return at.p * B;
            case ObservableKind::kinetic:
                return B * (at.p * at.p / (2.0 * m) + zero_point);
        }
        throw std::domain_error("portrait: unsupported observable kind");
    }

    // Quadrature route: after the closed-form momentum moments, the portrait is
    //   (1/(sqrt(2 pi) ell)) * integral over the accessible region of
    //   m_f(q', p) exp(-(q-q')^2/(2 ell^2)) dq'
    // with m_f = 1, q', p, (p^2 + hbar^2/ell^2)/(2m) respectively.
    std::function<double(double)> moment;
    switch (f.kind) {
        case ObservableKind::unit: moment = [](double) { return 1.0; }; break;
        case ObservableKind::position: moment = [](double qp) { return qp; }; break;
        case ObservableKind::momentum: moment = [&, p = at.p](double) { return p; }; break;
        case ObservableKind::kinetic:
            moment = [&, p = at.p](double) {
                return (p * p + hbar * hbar / (ell * ell)) / (2.0 * m);
            };
            break;
        default: throw std::domain_error("portrait: unsupported observable kind");
    }

    const double reach = 12.0 * ell;
    double lo = at.q - reach, hi = at.q + reach;
    if (f.restricted) {
        lo = std::max(lo, geo.a);
        if (geo.is_bounded()) hi = std::min(hi, geo.b);
        if (!(lo < hi)) return 0.0; // packet is entirely outside the region
    }
    const double pref = 1.0 / (std::sqrt(2.0 * kPi) * ell);
    const double inv = 1.0 / (2.0 * ell * ell);
    auto integrand = [&](double qp) {
        const double d = qp - at.q;
        return moment(qp) * std::exp(-d * d * inv);
    };
    std::vector<double> splits;
    if (geo.a > lo && geo.a < hi) splits.push_back(geo.a);
    if (geo.is_bounded() && geo.b > lo && geo.b < hi) splits.push_back(geo.b);
    quad::QuadResult r = quad::integrate(integrand, lo, hi, abs_tol / pref, splits);
    if (!r.converged)
        throw numerical_error("portrait: quadrature achieved " + std::to_string(r.error) +
                              " > tolerance " + std::to_string(abs_tol));
    return pref * r.value;
}

} // namespace fuzzybox::quantizer
