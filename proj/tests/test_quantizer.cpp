#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "fuzzybox/quantizer.hpp"
#include "fuzzybox/states.hpp"
#include "fuzzybox/windowfn.hpp"

using namespace fuzzybox;
using quantizer::ObservableKind;
using quantizer::ObservableSpec;
using quantizer::PhaseState;
using quantizer::PortraitMethod;

namespace {

QuantizationParams params(double ell) {
    QuantizationParams p;
    p.ell = ell;
    return p;
}

} // namespace

TEST_SUITE("quantizer") {

TEST_CASE("packet samples reproduce the closed-form amplitude and unit norm") {
    const QuantizationParams prm = params(1.0);
    const Grid g(-10.0, 10.0, 2001);
    const WaveFunction f = quantizer::cs_sample({0.0, 0.0}, g, prm);
    // (pi)^{-1/4} at the peak for ell = 1
    CHECK(f.values[1000].real() == doctest::Approx(0.7511255444649425).epsilon(1e-14));
    CHECK(f.values[1000].imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-12));

    const WaveFunction fb = quantizer::cs_sample({1.5, 4.0}, g, prm);
    CHECK(fb.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("packet sampling demands grid coverage of the core") {
    const QuantizationParams prm = params(1.0);
    const Grid g(-5.0, 5.0, 501);
    CHECK_THROWS_AS(quantizer::cs_sample({4.5, 0.0}, g, prm), config_error);
    CHECK_THROWS_AS(quantizer::cs_sample({-8.0, 0.0}, g, prm), config_error);
}

TEST_CASE("closed-form overlap against direct grid integration") {
    const QuantizationParams prm = params(1.0);
    const Grid g(-14.0, 14.0, 5601);
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> qd(-3.0, 3.0), pd(-4.0, 4.0);
    for (int k = 0; k < 6; ++k) {
        const PhaseState s1{qd(rng), pd(rng)}, s2{qd(rng), pd(rng)};
        const std::complex<double> closed = quantizer::cs_overlap(s1, s2, prm);
        const std::complex<double> direct =
            inner_product(quantizer::cs_sample(s1, g, prm), quantizer::cs_sample(s2, g, prm));
        CHECK(std::abs(closed - direct) <= 1e-10);
    }
    // same-label overlap is exactly 1
    const std::complex<double> self = quantizer::cs_overlap({1.0, 2.0}, {1.0, 2.0}, prm);
    CHECK(self.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(self.imag() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("overlap worked example: unit q-offset at matched momentum") {
    // |<q,p|q+2ell,p>| = exp(-(2ell)^2/(4ell^2)) = 1/e, phase p*ell/hbar
    const QuantizationParams prm = params(0.5);
    const PhaseState s1{3.0, 2.0}, s2{4.0, 2.0};
    const std::complex<double> ov = quantizer::cs_overlap(s1, s2, prm);
    CHECK(std::abs(ov) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // exp(i (p2 q1 - q2 p1)/(2 hbar)) = exp(i (6-8)/2) = exp(-i)
    CHECK(std::arg(ov) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("quantizing the unit symbol resolves the identity") {
    const QuantizationParams prm = params(0.1);
    const Geometry geo = Geometry::bounded(0.0, 10.0);
    const Grid g(-4.0, 14.0, 3601);
    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> cd(3.0, 7.0), kd(-2.0, 2.0);
    for (int k = 0; k < 3; ++k) {
        const states::GaussianProbe pb{cd(rng), 0.9, kd(rng)};
        const states::GaussianProbe pk{cd(rng), 1.2, kd(rng)};
        const WaveFunction bra = states::sample_probe(pb, g);
        const WaveFunction ket = states::sample_probe(pk, g);
        const std::complex<double> got =
            quantizer::quantize_element({ObservableKind::unit, false}, bra, ket, geo, prm);
        CHECK(std::abs(got - inner_product(bra, ket)) <= 1e-8);
    }
}

TEST_CASE("quantized momentum on a boosted envelope returns the boost") {
    // Away from the walls the modified momentum acts like -i hbar d/dx; on
    // exp(i k x) times a wide envelope the expectation is hbar k.
    const QuantizationParams prm = params(0.1);
    const Geometry geo = Geometry::bounded(0.0, 10.0);
    const Grid g(-4.0, 14.0, 3601);
    const states::GaussianProbe probe{5.0, 1.0, 3.0};
    const WaveFunction psi = states::sample_probe(probe, g);
    const std::complex<double> got =
        quantizer::quantize_element({ObservableKind::momentum, true}, psi, psi, geo, prm);
    CHECK(std::fabs(got.real() - prm.hbar * 3.0) / (prm.hbar * 3.0) <= 1e-3);
    CHECK(std::fabs(got.imag()) <= 1e-9);
}

TEST_CASE("quantized kinetic symbol carries the smearing zero-point term") {
    // With no walls in reach, A_{p^2/2m} = p_op^2/2m + hbar^2/(4 m ell^2); on a
    // real Gaussian of width w, <p_op^2> = hbar^2/(2 w^2).
    const QuantizationParams prm = params(0.1);
    const Geometry geo = Geometry::bounded(0.0, 10.0);
    const Grid g(-4.0, 14.0, 3601);
    const double w = 0.8;
    const states::GaussianProbe probe{5.0, w, 0.0};
    const WaveFunction psi = states::sample_probe(probe, g);
    const std::complex<double> got =
        quantizer::quantize_element({ObservableKind::kinetic, true}, psi, psi, geo, prm);
    const double expect = prm.hbar * prm.hbar / (2.0 * prm.mass) *
                              (0.5 / (w * w)) +
                          prm.hbar * prm.hbar / (4.0 * prm.mass * prm.ell * prm.ell);
    CHECK(got.real() == doctest::Approx(expect).epsilon(1e-6));
    CHECK(std::fabs(got.imag()) <= 1e-9);
}

TEST_CASE("quantized position agrees with the smeared position symbol") {
    const QuantizationParams prm = params(0.2);
    const Geometry geo = Geometry::bounded(0.0, 10.0);
    const Grid g(-4.0, 14.0, 1801);
    // probe centred near the wall where Q(x) departs from x
    const states::GaussianProbe probe{0.6, 0.5, 0.0};
    const WaveFunction psi = states::sample_probe(probe, g);
    const std::complex<double> got =
        quantizer::quantize_element({ObservableKind::position, true}, psi, psi, geo, prm);
    // independent route: diagonal multiplication by Q(x) on the grid
    double ref = 0.0, nrm = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double rho2 = std::norm(psi.values[j]) * psi.trapezoid_weight(j);
        const double q = windowfn::window_profile(g.x(j), geo, prm.ell) * g.x(j) +
                         0.5 * prm.ell * prm.ell * windowfn::window_profile_d1(g.x(j), geo, prm.ell);
        ref += rho2 * q;
        nrm += rho2;
    }
    ref /= nrm;
    CHECK(got.real() == doctest::Approx(ref).epsilon(1e-6));
    CHECK(std::fabs(got.imag()) <= 1e-9);
}

TEST_CASE("portrait closed forms match the quadrature route") {
    const Geometry geo = Geometry::bounded(0.0, 10.0);
    const QuantizationParams prm = params(0.3);
    const std::array<ObservableKind, 4> kinds{ObservableKind::unit, ObservableKind::position,
                                              ObservableKind::momentum, ObservableKind::kinetic};
    for (ObservableKind kind : kinds)
        for (double q : {-0.5, 0.0, 0.45, 5.0, 9.7, 10.8})
            for (double p : {0.0, 6.0, -14.0}) {
                const double cf = quantizer::portrait({kind, true}, {q, p}, geo, prm,
                                                      PortraitMethod::closed_form);
                const double qd = quantizer::portrait({kind, true}, {q, p}, geo, prm,
                                                      PortraitMethod::quadrature, 1e-10);
                CHECK(cf == doctest::Approx(qd).epsilon(1e-8).scale(1.0));
            }
}

TEST_CASE("portraits deep inside reproduce the free symbols") {
    const Geometry geo = Geometry::bounded(0.0, 10.0);
    const QuantizationParams prm = params(0.1);
    const PhaseState at{5.0, 7.0};
    CHECK(quantizer::portrait({ObservableKind::unit, true}, at, geo, prm,
                              PortraitMethod::closed_form) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quantizer::portrait({ObservableKind::position, true}, at, geo, prm,
                              PortraitMethod::closed_form) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(quantizer::portrait({ObservableKind::momentum, true}, at, geo, prm,
                              PortraitMethod::closed_form) == doctest::Approx(7.0).epsilon(1e-12));
    const double kin = 7.0 * 7.0 / 2.0 + 1.0 / (2.0 * prm.ell * prm.ell);
    CHECK(quantizer::portrait({ObservableKind::kinetic, true}, at, geo, prm,
                              PortraitMethod::closed_form) == doctest::Approx(kin).epsilon(1e-12));
}

TEST_CASE("portrait smearing widens the window by sqrt(2)") {
    // The unit-symbol portrait equals the window evaluated at sqrt(2)*ell; the
    // same scaling identity in the equivalent form
    // W_ell(q/sqrt2, a/sqrt2, b/sqrt2) = W_{sqrt2 ell}(q, a, b).
    const double ell = 0.35;
    const Geometry geo = Geometry::bounded(1.0, 6.0);
    const Geometry scaled = Geometry::bounded(1.0 / std::sqrt(2.0), 6.0 / std::sqrt(2.0));
    const QuantizationParams prm = params(ell);
    for (double q : {0.4, 1.0, 1.3, 3.5, 5.8, 6.6}) {
        const double lhs = quantizer::portrait({ObservableKind::unit, true}, {q, 0.0}, geo, prm,
                                               PortraitMethod::closed_form);
        const double rhs = windowfn::window_profile(q / std::sqrt(2.0), scaled, ell);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
        CHECK(lhs == doctest::Approx(windowfn::window_profile(q, geo, std::sqrt(2.0) * ell))
                         .epsilon(1e-14));
    }
}

TEST_CASE("unrestricted portraits are the flat-space symbols everywhere") {
    const Geometry geo = Geometry::bounded(0.0, 10.0);
    const QuantizationParams prm = params(0.25);
    for (double q : {-2.0, 0.0, 5.0, 12.0}) {
        const PhaseState at{q, 3.0};
        CHECK(quantizer::portrait({ObservableKind::unit, false}, at, geo, prm,
                                  PortraitMethod::closed_form) == doctest::Approx(1.0));
        CHECK(quantizer::portrait({ObservableKind::position, false}, at, geo, prm,
                                  PortraitMethod::closed_form) == doctest::Approx(q));
        CHECK(quantizer::portrait({ObservableKind::momentum, false}, at, geo, prm,
                                  PortraitMethod::closed_form) == doctest::Approx(3.0));
        const double kin = 4.5 + 1.0 / (2.0 * prm.ell * prm.ell);
        CHECK(quantizer::portrait({ObservableKind::kinetic, false}, at, geo, prm,
                                  PortraitMethod::closed_form) == doctest::Approx(kin));
    }
}

TEST_CASE("half-line portraits follow the one-wall window") {
    const Geometry hl = Geometry::half_line(0.0);
    const QuantizationParams prm = params(0.4);
    const double wide = std::sqrt(2.0) * prm.ell;
    for (double q : {-0.8, 0.0, 0.3, 2.0}) {
        const double got = quantizer::portrait({ObservableKind::unit, true}, {q, 0.0}, hl, prm,
                                               PortraitMethod::closed_form);
        CHECK(got == doctest::Approx(windowfn::window_profile(q, hl, wide)).epsilon(1e-14));
    }
    // far from the wall the full symbol is recovered
    CHECK(quantizer::portrait({ObservableKind::position, true}, {30.0, 0.0}, hl, prm,
                              PortraitMethod::closed_form) == doctest::Approx(30.0).epsilon(1e-12));
}

} // TEST_SUITE
