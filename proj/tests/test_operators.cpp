#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "fuzzybox/operators.hpp"
#include "fuzzybox/quadrature.hpp"
#include "fuzzybox/quantizer.hpp"
#include "fuzzybox/states.hpp"
#include "fuzzybox/windowfn.hpp"

using namespace fuzzybox;
namespace ops = fuzzybox::operators;
namespace wf = fuzzybox::windowfn;

namespace {

QuantizationParams params(double ell) {
    QuantizationParams p;
    p.ell = ell;
    return p;
}

const Geometry kBox = Geometry::bounded(0.0, 10.0);

// Dense matrix multiply reference for the banded product.
std::vector<std::complex<double>> dense_of(const BandedOperator& A) {
    const int n = A.size();
    std::vector<std::complex<double>> d(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(j) * n + k] = A.get(j, k);
    return d;
}

} // namespace

TEST_SUITE("operators") {

TEST_CASE("banded algebra matches a dense reference") {
    const Grid g(0.0, 1.0, 7);
    std::mt19937 rng(1234u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BandedOperator A(g, 2), B(g, 1);
    for (int j = 0; j < g.n; ++j) {
        for (int k = std::max(0, j - 2); k <= std::min(g.n - 1, j + 2); ++k)
            A.at(j, k) = {u(rng), u(rng)};
        for (int k = std::max(0, j - 1); k <= std::min(g.n - 1, j + 1); ++k)
            B.at(j, k) = {u(rng), u(rng)};
    }

    const BandedOperator C = BandedOperator::multiply(A, B);
    CHECK(C.bandwidth() == 3);
    const auto da = dense_of(A), db = dense_of(B), dc = dense_of(C);
    const int n = g.n;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            std::complex<double> s{0.0, 0.0};
            for (int m = 0; m < n; ++m)
                s += da[static_cast<std::size_t>(j) * n + m] * db[static_cast<std::size_t>(m) * n + k];
            CHECK(std::abs(dc[static_cast<std::size_t>(j) * n + k] - s) <= 1e-14);
        }

    const BandedOperator S = BandedOperator::add(A, B);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            CHECK(std::abs(S.get(j, k) - (A.get(j, k) + B.get(j, k))) <= 1e-15);

    // adjoint then hermitize gives a Hermitian matrix with zero defect
    BandedOperator H = A;
    CHECK(H.hermiticity_defect() > 0.0);
    H.hermitize();
    CHECK(H.hermiticity_defect() == 0.0);

    // apply: y_j = sum_k A(j,k) x_k against the dense route
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {u(rng), u(rng)};
    const auto y = A.apply(x);
    for (int j = 0; j < n; ++j) {
        std::complex<double> s{0.0, 0.0};
        for (int k = 0; k < n; ++k) s += da[static_cast<std::size_t>(j) * n + k] * x[k];
        CHECK(std::abs(y[j] - s) <= 1e-14);
    }
}

TEST_CASE("band dump has the documented shape") {
    const Grid g(0.0, 1.0, 5);
    BandedOperator A(g, 1);
    for (int j = 0; j < g.n; ++j)
        for (int k = std::max(0, j - 1); k <= std::min(g.n - 1, j + 1); ++k)
            A.at(j, k) = {1.0 * j, 1.0 * k};
    std::ostringstream os;
    A.write_csv(os);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "row,col,x_row [q0],real,imag");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 13); // 5 diagonal + 2*4 off-diagonal stored entries
}

TEST_CASE("position symbol is x deep inside and 0 deep outside") {
    const QuantizationParams prm = params(0.1);
    for (double x : {3.0, 5.0, 7.5})
        CHECK(ops::position_symbol(x, kBox, prm) == doctest::Approx(x).epsilon(1e-13));
    for (double x : {-2.0, 12.5})
        CHECK(std::fabs(ops::position_symbol(x, kBox, prm)) <= 1e-12);
}

TEST_CASE("spectral density is the derivative of the position symbol") {
    const QuantizationParams prm = params(0.4);
    const double h = 1e-5;
    for (double x = -1.0; x <= 11.0 + 1e-12; x += 0.13) {
        const double fd = (ops::position_symbol(x + h, kBox, prm) -
                           ops::position_symbol(x - h, kBox, prm)) /
                          (2.0 * h);
        CHECK(ops::spectral_density(x, kBox, prm) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("spectral weight: interior length, disjoint zero, whole-line zero") {
    const QuantizationParams prm = params(0.1);
    CHECK(ops::spectral_weight(2.0, 8.0, kBox, prm) == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(std::fabs(ops::spectral_weight(-5.0, -1.0, kBox, prm)) <= 1e-9);
    // over the whole line the boundary drops +a and -b cancel the interior
    // growth: the total weight is 0, not b-a
    CHECK(std::fabs(ops::spectral_weight(-40.0, 50.0, kBox, prm)) <= 1e-7);
}

TEST_CASE("effective mass: m inside, divergent outside, W/m inverse form") {
    const QuantizationParams prm = params(0.1);
    CHECK(ops::mass_effective(5.0, kBox, prm) == doctest::Approx(prm.mass).epsilon(1e-13));
    CHECK(ops::mass_inverse(5.0, kBox, prm) == doctest::Approx(1.0 / prm.mass).epsilon(1e-13));
    CHECK(ops::mass_effective(-3.0, kBox, prm) > 1e10);
    for (double x : {-0.3, 0.0, 0.4, 5.0, 10.0})
        CHECK(ops::mass_inverse(x, kBox, prm) ==
              doctest::Approx(wf::window_profile(x, kBox, prm.ell) / prm.mass).epsilon(1e-15));
}

TEST_CASE("ordering potentials share the interior plateau and differ by the curvature term") {
    const QuantizationParams prm = params(0.1);
    const double plateau = prm.hbar * prm.hbar / (4.0 * prm.mass * prm.ell * prm.ell);
    CHECK(ops::potential(ops::PotentialSign::plus, 5.0, kBox, prm) ==
          doctest::Approx(plateau).epsilon(1e-13));
    CHECK(ops::potential(ops::PotentialSign::minus, 5.0, kBox, prm) ==
          doctest::Approx(plateau).epsilon(1e-13));
    for (double x : {-0.2, 0.0, 0.15, 0.5, 9.8, 10.1}) {
        const double vp = ops::potential(ops::PotentialSign::plus, x, kBox, prm);
        const double vm = ops::potential(ops::PotentialSign::minus, x, kBox, prm);
        const double curv = prm.hbar * prm.hbar * wf::window_profile_d2(x, kBox, prm.ell) /
                            (4.0 * prm.mass);
        CHECK(vp - vm == doctest::Approx(curv).epsilon(1e-11).scale(1.0));
        // and each one separately matches its defining combination
        const double w = wf::window_profile(x, kBox, prm.ell);
        CHECK(vp == doctest::Approx(plateau * w + 0.5 * curv).epsilon(1e-11).scale(1.0));
        CHECK(vm == doctest::Approx(plateau * w - 0.5 * curv).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("commutator symbol: unity inside, frozen wall values, reflection identity") {
    const QuantizationParams prm = params(0.5);
    CHECK(ops::commutator_symbol(5.0, kBox, prm) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ops::commutator_symbol(1.0, kBox, prm) ==
          doctest::Approx(0.9953277353200909).epsilon(1e-12));
    CHECK(ops::commutator_symbol(9.0, kBox, prm) ==
          doctest::Approx(0.7891412551808887).epsilon(1e-12));
    // C(a+b-x) = C(x) - (a+b) W(x) W'(x): the wall structure is inherently
    // asymmetric whenever a+b != 0
    for (double x : {0.5, 1.0, 2.5, 7.0, 9.0, 9.5}) {
        const double lhs = ops::commutator_symbol(10.0 - x, kBox, prm);
        const double rhs = ops::commutator_symbol(x, kBox, prm) -
                           10.0 * wf::window_profile(x, kBox, prm.ell) *
                               wf::window_profile_d1(x, kBox, prm.ell);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
    // on a zero-centred interval the same identity forces exact symmetry
    const Geometry sym = Geometry::bounded(-5.0, 5.0);
    for (double x : {0.7, 2.0, 4.6, 5.3})
        CHECK(ops::commutator_symbol(-x, sym, prm) ==
              doctest::Approx(ops::commutator_symbol(x, sym, prm)).epsilon(1e-12));
}

TEST_CASE("poisson bracket of the lower symbols via a numerical jacobian") {
    const QuantizationParams prm = params(0.3);
    CHECK(ops::poisson_bracket_symbols(5.0, kBox, prm) == doctest::Approx(1.0).epsilon(1e-10));
    const double h = 1e-5;
    using quantizer::ObservableKind;
    using quantizer::PortraitMethod;
    for (double q : {-0.4, 0.0, 0.35, 1.0, 9.6, 10.2}) {
        auto qcheck = [&](double qq) {
            return quantizer::portrait({ObservableKind::position, true}, {qq, 0.0}, kBox, prm,
                                       PortraitMethod::closed_form);
        };
        auto punit = quantizer::portrait({ObservableKind::unit, true}, {q, 0.0}, kBox, prm,
                                         PortraitMethod::closed_form);
        // {qcheck, pcheck} = dqcheck/dq * dpcheck/dp = qcheck'(q) * W2(q)
        const double jac = (qcheck(q + h) - qcheck(q - h)) / (2.0 * h) * punit;
        CHECK(ops::poisson_bracket_symbols(q, kBox, prm) ==
              doctest::Approx(jac).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("weak limit of the commutator symbol against a test function") {
    const QuantizationParams base = params(0.1);
    auto phi = [](double x) { return std::exp(-0.1 * (x - 3.0) * (x - 3.0)); };
    const std::vector<double> ells{0.4, 0.2, 0.1, 0.05};
    const auto errs = ops::weak_limit_errors(phi, -4.0, 14.0, kBox, base, ells);
    REQUIRE(errs.size() == 4);
    for (std::size_t i = 1; i < errs.size(); ++i) {
        CHECK(errs[i] < errs[i - 1]);
        CHECK(errs[i - 1] / errs[i] >= 1.5); // first-order shrinkage in ell
    }
    CHECK(errs.back() <= 0.05);
}

TEST_CASE("matrix builders enforce grid resolution of the smearing width") {
    const QuantizationParams prm = params(0.1);
    const Grid coarse = Grid::with_spacing(-2.0, 12.0, 0.02); // h = 2 ell/10
    CHECK_THROWS_AS(ops::window_matrix(coarse, kBox, prm), config_error);
    CHECK_THROWS_AS(ops::momentum_matrix(coarse, kBox, prm), config_error);
    CHECK_THROWS_AS(
        ops::hamiltonian_matrix(ops::OrderingChoice::p_sandwich, coarse, kBox, prm), config_error);
}

TEST_CASE("assembled matrices are Hermitian to the last bit") {
    const QuantizationParams prm = params(0.1);
    const Grid g = Grid::with_spacing(-2.0, 12.0, prm.ell / 10.0);
    CHECK(ops::window_matrix(g, kBox, prm).hermiticity_defect() == 0.0);
    CHECK(ops::position_matrix(g, kBox, prm).hermiticity_defect() == 0.0);
    CHECK(ops::momentum_matrix(g, kBox, prm).hermiticity_defect() == 0.0);
    CHECK(ops::hamiltonian_matrix(ops::OrderingChoice::p_sandwich, g, kBox, prm)
              .hermiticity_defect() == 0.0);
    CHECK(ops::hamiltonian_matrix(ops::OrderingChoice::anticommutator_half, g, kBox, prm)
              .hermiticity_defect() == 0.0);
    CHECK(ops::commutator_matrix(g, kBox, prm).hermiticity_defect() <= 1e-14);
}

TEST_CASE("deep inside, the momentum matrix reduces to the textbook stencil") {
    const QuantizationParams prm = params(0.1);
    const Grid g = Grid::with_spacing(-2.0, 12.0, prm.ell / 10.0);
    const BandedOperator P = ops::momentum_matrix(g, kBox, prm);
    const double h = g.h();
    const int mid = g.n / 2;
    // rows where the window is exactly 1: A(j, j+-1) = -+ i hbar/(2h), diag 0
    for (int j = mid - 5; j <= mid + 5; ++j) {
        CHECK(std::abs(P.get(j, j)) <= 1e-12 / h);
        CHECK(std::abs(P.get(j, j + 1) - std::complex<double>(0.0, -prm.hbar / (2.0 * h))) <=
              1e-12 / h);
        CHECK(std::abs(P.get(j, j - 1) - std::complex<double>(0.0, prm.hbar / (2.0 * h))) <=
              1e-12 / h);
    }
}

TEST_CASE("momentum matrix returns the boost on an interior wave packet") {
    const QuantizationParams prm = params(0.1);
    const Grid g = Grid::with_spacing(-2.0, 12.0, prm.ell / 10.0);
    const BandedOperator P = ops::momentum_matrix(g, kBox, prm);
    const double k = 4.0;
    WaveFunction psi = states::sample_probe({5.0, 0.9, k}, g);
    psi.normalize();
    const std::complex<double> got = inner_product(psi, P.apply(psi));
    CHECK(std::fabs(got.real() - prm.hbar * k) / (prm.hbar * k) <= 1e-3);
    CHECK(std::fabs(got.imag()) <= 1e-12);
}

TEST_CASE("interior hamiltonian expectation: envelope kinetic term plus plateau") {
    const QuantizationParams prm = params(0.1);
    const Grid g = Grid::with_spacing(-2.0, 12.0, prm.ell / 10.0);
    const double w = 1.0;
    WaveFunction psi = states::sample_probe({5.0, w, 0.0}, g);
    psi.normalize();
    const double expect = prm.hbar * prm.hbar / (4.0 * prm.mass * w * w) +
                          prm.hbar * prm.hbar / (4.0 * prm.mass * prm.ell * prm.ell);
    for (auto ord : {ops::OrderingChoice::p_sandwich, ops::OrderingChoice::anticommutator_half}) {
        const BandedOperator H = ops::hamiltonian_matrix(ord, g, kBox, prm);
        const std::complex<double> got = inner_product(psi, H.apply(psi));
        CHECK(got.real() == doctest::Approx(expect).epsilon(1e-4));
        CHECK(std::fabs(got.imag()) <= 1e-12);
    }
}

TEST_CASE("the two orderings agree on wall-hugging states at O(h^2)") {
    const QuantizationParams prm = params(0.1);
    WaveFunction psi;
    auto diff = [&](double h) {
        const Grid g = Grid::with_spacing(-2.0, 12.0, h);
        psi = states::sample_probe({0.5, 0.7, 0.0}, g);
        psi.normalize();
        const BandedOperator H1 =
            ops::hamiltonian_matrix(ops::OrderingChoice::anticommutator_half, g, kBox, prm);
        const BandedOperator H2 =
            ops::hamiltonian_matrix(ops::OrderingChoice::p_sandwich, g, kBox, prm);
        return std::abs(inner_product(psi, H1.apply(psi)) - inner_product(psi, H2.apply(psi)));
    };
    const double d1 = diff(prm.ell / 10.0);
    const double d2 = diff(prm.ell / 20.0);
    CHECK(d1 <= 5e-3);
    CHECK(d1 / d2 >= 2.5); // second-order shrinkage
    CHECK(d1 / d2 <= 6.0);
}

TEST_CASE("matrix commutator expectation converges to the symbol at second order") {
    const QuantizationParams prm = params(0.1);
    const states::GaussianProbe probe{0.8, 0.5, 0.0};
    // analytic reference: <C> = int C_om(x) rho^2 dx
    auto rho2 = [&](double x) {
        const double d = (x - probe.center) / probe.width;
        return std::exp(-d * d);
    };
    const double nrm = quad::integrate_or_throw(rho2, -4.0, 6.0, 1e-13);
    const double ref = quad::integrate_or_throw(
                           [&](double x) { return rho2(x) * ops::commutator_symbol(x, kBox, prm); },
                           -4.0, 6.0, 1e-13, {0.0}) /
                       nrm;
    auto matrix_route = [&](double h) {
        const Grid g = Grid::with_spacing(-2.0, 12.0, h);
        WaveFunction psi = states::sample_probe(probe, g);
        psi.normalize();
        const BandedOperator C = ops::commutator_matrix(g, kBox, prm);
        return inner_product(psi, C.apply(psi)).real();
    };
    const double e1 = std::fabs(matrix_route(prm.ell / 10.0) - ref);
    const double e2 = std::fabs(matrix_route(prm.ell / 20.0) - ref);
    CHECK(e1 < 5e-3);
    CHECK(std::log2(e1 / e2) >= 1.8);
}

TEST_CASE("half-line matrices mirror the bounded ones away from the far wall") {
    const QuantizationParams prm = params(0.1);
    const Geometry hl = Geometry::half_line(0.0);
    const Grid g = Grid::with_spacing(-2.0, 12.0, prm.ell / 10.0);
    CHECK(ops::momentum_matrix(g, hl, prm).hermiticity_defect() == 0.0);
    CHECK(ops::hamiltonian_matrix(ops::OrderingChoice::p_sandwich, g, hl, prm)
              .hermiticity_defect() == 0.0);
    // near the shared left wall the two geometries give identical rows
    const BandedOperator Pb = ops::momentum_matrix(g, kBox, prm);
    const BandedOperator Ph = ops::momentum_matrix(g, hl, prm);
    const int jwall = static_cast<int>(std::lround((0.0 - g.x_min) / g.h()));
    for (int j = jwall - 20; j <= jwall + 20; ++j)
        for (int k = j - 2; k <= j + 2; ++k)
            if (Pb.in_band(j, k)) CHECK(std::abs(Pb.get(j, k) - Ph.get(j, k)) <= 1e-15 / g.h());
}

} // TEST_SUITE
