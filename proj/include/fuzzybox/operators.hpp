#pragma once

#include <functional>
#include <vector>

#include "fuzzybox/banded.hpp"
#include "fuzzybox/geometry.hpp"

namespace fuzzybox::operators {

// ---- scalar symbols -------------------------------------------------------

// Multiplication symbol of the modified position operator:
//   Q(x) = x*W(x) + (ell^2/2) W'(x),  W the smooth window.
// Rises from 0 outside to ~x deep inside.
double position_symbol(double x, const Geometry& g, const QuantizationParams& p);

// dQ/dx = W + x W' + (ell^2/2) W'': the density of the position operator's
// spectral-like weight.  Integrates to d-c on interior subintervals and to 0
// over the whole line (the boundary drops carry +a and -b).
double spectral_density(double x, const Geometry& g, const QuantizationParams& p);
double spectral_weight(double c, double d, const Geometry& g, const QuantizationParams& p,
                       double abs_tol = 1e-9);

// Effective position-dependent mass M(x) = m / W(x) and its primary inverse
// form W(x)/m (finite everywhere; M itself diverges outside the window).
double mass_inverse(double x, const Geometry& g, const QuantizationParams& p);
double mass_effective(double x, const Geometry& g, const QuantizationParams& p);

// Kinetic-ordering potentials, evaluated from explicit Gaussians:
//   V+- = (hbar^2/(4 m ell^2)) (W +- (ell^2/2) W'').
// They differ by hbar^2 W''/(4m) and share the interior plateau
// hbar^2/(4 m ell^2).
enum class PotentialSign { plus, minus };
double potential(PotentialSign sign, double x, const Geometry& g, const QuantizationParams& p);

// Multiplication symbol of [A_q, A_p]/(i hbar): W * dQ/dx.  Equals 1 deep
// inside and carries coordinate-weighted boundary structure near a and b.
double commutator_symbol(double x, const Geometry& g, const QuantizationParams& p);

// Poisson bracket of the sqrt(2)ell-smeared lower symbols q-check, p-check:
//   {q,p}-check (q) = W2 * (W2 + q W2' + ell^2 W2''),  W2 at width sqrt(2)ell.
double poisson_bracket_symbols(double q, const Geometry& g, const QuantizationParams& p);

// |integral of commutator_symbol * phi  -  (integral_a^b phi
//   + (a phi(a) - b phi(b))/2)| for each smearing width in ells: the
// distributional limit of the commutator symbol under test function phi.
std::vector<double> weak_limit_errors(const std::function<double(double)>& phi, double lo,
                                      double hi, const Geometry& g,
                                      const QuantizationParams& base,
                                      const std::vector<double>& ells, double abs_tol = 1e-10);

// ---- grid realizations ----------------------------------------------------

// All builders require the grid to resolve the smearing width (h <= ell/10,
// enforced) and return exactly Hermitian matrices (symmetrized construction).

// diag W(x_j): the quantized indicator of the accessible region.
BandedOperator window_matrix(const Grid& grid, const Geometry& g, const QuantizationParams& p);

// diag Q(x_j): the quantized (restricted) position.
BandedOperator position_matrix(const Grid& grid, const Geometry& g, const QuantizationParams& p);

// Hermitization of -i hbar (W d/dx + W'/2) on the grid: centered 2nd-order
// interior stencil, one-sided 2nd-order boundary rows, then (R+R^dagger)/2.
BandedOperator momentum_matrix(const Grid& grid, const Geometry& g, const QuantizationParams& p);

// The two operator orderings of the quantized kinetic energy:
//   anticommutator_half: -(hbar^2/4) {1/M(x), d^2/dx^2} + V+
//   p_sandwich:          -(hbar^2/2) d/dx (1/M(x)) d/dx  + V-
// Equal in the continuum; their grid realizations differ at O(h^2).
enum class OrderingChoice { anticommutator_half, p_sandwich };
BandedOperator hamiltonian_matrix(OrderingChoice ordering, const Grid& grid, const Geometry& g,
                                  const QuantizationParams& p);

// [position_matrix, momentum_matrix]/(i hbar), assembled from the matrices.
BandedOperator commutator_matrix(const Grid& grid, const Geometry& g,
                                 const QuantizationParams& p);

} // namespace fuzzybox::operators
