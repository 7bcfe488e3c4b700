#pragma once

#include "fuzzybox/geometry.hpp"

namespace fuzzybox::windowfn {

// Complementary error function via the Cody rational-kernel scheme
// (three regimes with a split exponential for accuracy at large argument).
// Throws std::domain_error on non-finite input.
double erfc(double x);

// Smooth window of the accessible region at explicit smearing width `ell`:
//   bounded:   0.5*[erfc((a-x)/ell) - erfc((b-x)/ell)]
//   half line: 0.5* erfc((a-x)/ell)         (the far wall is absent, its terms
//                                            are dropped exactly, not merely small)
// window_profile rises from 0 outside to 1 deep inside over a scale ~ell and
// equals 1/2 exactly at an endpoint.
double window_profile(double x, const Geometry& g, double ell);
double window_profile_d1(double x, const Geometry& g, double ell); // d/dx, a pair of Gaussians
double window_profile_d2(double x, const Geometry& g, double ell); // d2/dx2

// Parameter-pack entry points used across the library.
double window(double x, const Geometry& g, const QuantizationParams& p);
// order = 1 or 2; anything else is a domain error.
double window_derivative(int order, double x, const Geometry& g, const QuantizationParams& p);

} // namespace fuzzybox::windowfn
