#include <doctest.h>

#include <cmath>
#include <complex>

#include "fuzzybox/operators.hpp"
#include "fuzzybox/quadrature.hpp"
#include "fuzzybox/states.hpp"

using namespace fuzzybox;
namespace ops = fuzzybox::operators;

namespace {

QuantizationParams params(double ell) {
    QuantizationParams p;
    p.ell = ell;
    return p;
}

const Geometry kBox = Geometry::bounded(0.0, 10.0);

} // namespace

TEST_SUITE("states") {

TEST_CASE("probe samples are normalized and match the closed amplitude") {
    const states::GaussianProbe probe{2.0, 0.7, 1.5};
    const Grid g(-8.0, 12.0, 4001);
    const WaveFunction psi = states::sample_probe(probe, g);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const int j = 2000; // x = 2.0 must be the peak
    CHECK(std::abs(psi.values[j]) ==
          doctest::Approx(std::pow(3.14159265358979323846 * 0.49, -0.25)).epsilon(1e-13));
    CHECK_THROWS_AS((states::GaussianProbe{0.0, -1.0, 0.0}.validate()), config_error);
}

TEST_CASE("expectation contracts matrices with the trapezoid rule") {
    const QuantizationParams prm = params(0.1);
    const Grid g = Grid::with_spacing(-2.0, 12.0, prm.ell / 10.0);
    const WaveFunction psi = states::sample_probe({5.0, 1.0, 0.0}, g);
    const BandedOperator W = ops::window_matrix(g, kBox, prm);
    const std::complex<double> got = states::expectation(W, psi);
    CHECK(got.real() == doctest::Approx(psi.norm_squared()).epsilon(1e-10));
    CHECK(std::fabs(got.imag()) <= 1e-14);
}

TEST_CASE("deep-interior probes saturate the Heisenberg bound data") {
    const QuantizationParams prm = params(0.1);
    // width-1 Gaussian at the centre: q/p spreads are the textbook pair and the
    // commutator expectation is 1 to wall-tail accuracy
    const auto r = states::uncertainty_product({5.0, 1.0, 0.0}, kBox, prm);
    CHECK(r.q_mean == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(r.q_spread == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.p_mean == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.p_spread == doctest::Approx(prm.hbar / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.commutator_mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.product() == doctest::Approx(0.5 * prm.hbar).epsilon(1e-9));
    CHECK(std::fabs(r.slack(prm.hbar)) <= 1e-9);
}

TEST_CASE("a boost shifts the momentum mean without touching the spreads") {
    const QuantizationParams prm = params(0.1);
    const auto r0 = states::uncertainty_product({5.0, 1.0, 0.0}, kBox, prm);
    const auto rb = states::uncertainty_product({5.0, 1.0, 4.0}, kBox, prm);
    CHECK(rb.p_mean == doctest::Approx(prm.hbar * 4.0).epsilon(1e-9));
    CHECK(rb.p_spread == doctest::Approx(r0.p_spread).epsilon(1e-8));
    CHECK(rb.q_spread == doctest::Approx(r0.q_spread).epsilon(1e-8));
}

TEST_CASE("the uncertainty product never undercuts the state-dependent bound") {
    const QuantizationParams prm = params(0.1);
    int idx = 0;
    for (double c = -2.0; c <= 12.0 + 1e-9; c += 0.29, ++idx) {
        const double width = 0.6 + 0.05 * (idx % 7);
        const auto r = states::uncertainty_product({c, width, 0.0}, kBox, prm);
        CHECK(r.slack(prm.hbar) >= -1e-8);
    }
}

TEST_CASE("grid route reproduces the analytic route to stencil accuracy") {
    const QuantizationParams prm = params(0.1);
    const Grid g = Grid::with_spacing(-3.0, 13.0, prm.ell / 10.0);
    for (double c : {5.0, 1.0, 0.2}) {
        const states::GaussianProbe probe{c, 0.8, 0.0};
        const auto ra = states::uncertainty_product(probe, kBox, prm);
        const auto rg = states::uncertainty_product_grid(probe, g, kBox, prm);
        CHECK(rg.q_mean == doctest::Approx(ra.q_mean).epsilon(1e-4).scale(1.0));
        CHECK(rg.q_spread == doctest::Approx(ra.q_spread).epsilon(1e-3).scale(1.0));
        CHECK(rg.p_spread == doctest::Approx(ra.p_spread).epsilon(1e-3).scale(1.0));
        CHECK(rg.commutator_mean ==
              doctest::Approx(ra.commutator_mean).epsilon(1e-3).scale(1.0));
    }
}

TEST_CASE("com_scan equals pointwise uncertainty commutator means") {
    const QuantizationParams prm = params(0.1);
    const std::vector<double> centers{-1.0, 0.0, 2.5, 5.0, 8.0, 10.0, 11.0};
    const auto scan = states::com_scan(centers, kBox, prm);
    REQUIRE(scan.size() == centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const auto r = states::uncertainty_product({centers[i], 1.0, 0.0}, kBox, prm);
        CHECK(scan[i] == doctest::Approx(r.commutator_mean).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("com_scan on a zero-centred interval is reflection symmetric") {
    const QuantizationParams prm = params(0.1);
    const Geometry sym = Geometry::bounded(-5.0, 5.0);
    const std::vector<double> centers{-7.0, -5.0, -2.0, -0.5, 0.5, 2.0, 5.0, 7.0};
    const auto scan = states::com_scan(centers, sym, prm);
    const std::size_t n = centers.size();
    for (std::size_t i = 0; i < n / 2; ++i)
        CHECK(scan[i] == doctest::Approx(scan[n - 1 - i]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("com_scan wall anatomy on (0,10): left plateau-edge value and right overshoot") {
    // The scan is dominated by <W^2-ish> near the left wall (a = 0 kills the
    // a-weighted term) but dives negative past the right wall, where the
    // -b-weighted boundary term takes over: the curve is NOT symmetric.
    const QuantizationParams prm = params(0.1);
    const std::vector<double> centers{0.0, 5.0, 10.0};
    const auto scan = states::com_scan(centers, kBox, prm);
    // half the probe mass is inside, minus an O(ell) window-softening deficit
    CHECK(scan[0] > 0.44);
    CHECK(scan[0] < 0.5);
    CHECK(scan[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(scan[2] < -1.5); // coordinate-weighted drop at the far wall
    CHECK(std::fabs(scan[0] - scan[2]) > 1.0);
}

TEST_CASE("uncertainty rejects invalid probes") {
    const QuantizationParams prm = params(0.1);
    CHECK_THROWS_AS(states::uncertainty_product({5.0, 0.0, 0.0}, kBox, prm), config_error);
    CHECK_THROWS_AS(states::uncertainty_product({NAN, 1.0, 0.0}, kBox, prm), config_error);
}

} // TEST_SUITE
