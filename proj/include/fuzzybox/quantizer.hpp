#pragma once

#include <complex>

#include "fuzzybox/geometry.hpp"
#include "fuzzybox/grid.hpp"

namespace fuzzybox::quantizer {

// A point of classical phase space.
struct PhaseState {
    double q = 0.0;
    double p = 0.0;
};

// The catalog of classical symbols the quantizer handles.  `restricted`
// multiplies the symbol by the indicator of the accessible region before
// quantizing (the position symbol is always taken restricted by callers that
// build the modified operators).
enum class ObservableKind { unit, position, momentum, kinetic };

struct ObservableSpec {
    ObservableKind kind = ObservableKind::unit;
    bool restricted = true;
};

// Gaussian wave packet labelled by (q,p):
//   <x|q,p> = (pi ell^2)^{-1/4} exp(-i p q/(2 hbar)) exp(i p x/hbar)
//             exp(-(x-q)^2/(2 ell^2)).
// Pre: the grid covers q +- 6 ell (else the sampled norm is visibly off 1 and
// a config error is thrown).
WaveFunction cs_sample(const PhaseState& s, const Grid& g, const QuantizationParams& prm);

// Overlap <s1|s2> of two packet labels in closed form:
//   exp(i (p2 q1 - q2 p1)/(2 hbar)) exp(-(q1-q2)^2/(4 ell^2))
//   exp(-ell^2 (p1-p2)^2/(4 hbar^2)).
std::complex<double> cs_overlap(const PhaseState& s1, const PhaseState& s2,
                                const QuantizationParams& prm);

// Matrix element <bra| A_f |ket> of the quantized symbol f between two grid
// states.  The momentum integral of the phase-space kernel is carried out in
// closed form, leaving a single adaptive quadrature over the packet center q
// (split at the interval endpoints and at the states' centroids).  Grid-state
// derivatives use the 4th-order stencil so this route is independent of the
// 2nd-order matrix discretizations it serves as an oracle for.
std::complex<double> quantize_element(const ObservableSpec& f, const WaveFunction& bra,
                                      const WaveFunction& ket, const Geometry& geo,
                                      const QuantizationParams& prm, double abs_tol = 1e-9);

// Lower symbol ("portrait") of the quantized observable at a phase-space
// point: the expectation in the packet |q,p>.  closed_form uses the
// sqrt(2)*ell-smeared window identities; quadrature re-derives the value by
// integrating the packet-averaged momentum moments.
enum class PortraitMethod { closed_form, quadrature };

double portrait(const ObservableSpec& f, const PhaseState& at, const Geometry& geo,
                const QuantizationParams& prm, PortraitMethod method,
                double abs_tol = 1e-7);

} // namespace fuzzybox::quantizer
