#pragma once

#include <complex>
#include <vector>

#include "fuzzybox/banded.hpp"
#include "fuzzybox/geometry.hpp"
#include "fuzzybox/sweep.hpp"

namespace fuzzybox::states {

// Normalized Gaussian probe  psi(x) = (pi width^2)^{-1/4}
//   exp(-(x-center)^2/(2 width^2)) exp(i boost x).
// boost is a wave number (momentum / hbar).
struct GaussianProbe {
    double center = 0.0;
    double width = 1.0;
    double boost = 0.0;

    void validate() const {
        if (!(std::isfinite(center) && std::isfinite(width) && std::isfinite(boost)))
            throw config_error("probe: non-finite parameter");
        if (!(width > 0.0)) throw config_error("probe: width must be positive");
    }

    double amplitude(double x) const; // the real envelope rho(x)
    double amplitude_d1(double x) const;
    std::complex<double> value(double x) const;
};

WaveFunction sample_probe(const GaussianProbe& probe, const Grid& grid);

// <state| op |state> by trapezoid contraction; grids must match.
std::complex<double> expectation(const BandedOperator& op, const WaveFunction& state);

// Uncertainty diagnostics of the modified position/momentum pair on a probe.
struct UncertaintyResult {
    double q_mean = 0.0, q_spread = 0.0;
    double p_mean = 0.0, p_spread = 0.0;
    double commutator_mean = 0.0; // <W dQ/dx> on the probe
    double product() const { return q_spread * p_spread; }
    double bound(double hbar) const { return 0.5 * hbar * std::fabs(commutator_mean); }
    double slack(double hbar) const { return product() - bound(hbar); }
};

// Primary route: adaptive quadrature on the analytic probe moments (the
// modified operators act in closed form on the probe, so no grid enters).
UncertaintyResult uncertainty_product(const GaussianProbe& probe, const Geometry& g,
                                      const QuantizationParams& p, double abs_tol = 1e-11);

// Cross-check route through the assembled matrices; carries the O(h^2)
// discretization error of the stencils.
UncertaintyResult uncertainty_product_grid(const GaussianProbe& probe, const Grid& grid,
                                           const Geometry& g, const QuantizationParams& p);

// <commutator_symbol> for a family of probe centers (fixed width, no boost):
// the scan behind the minimum-uncertainty-departure figure.
std::vector<double> com_scan(const std::vector<double>& centers, const Geometry& g,
                             const QuantizationParams& p, double width = 1.0,
                             par::Exec exec = par::Exec::openmp, double abs_tol = 1e-11);

} // namespace fuzzybox::states
