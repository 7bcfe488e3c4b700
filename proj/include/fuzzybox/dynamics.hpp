#pragma once

#include <functional>
#include <vector>

#include "fuzzybox/geometry.hpp"
#include "fuzzybox/quantizer.hpp"
#include "fuzzybox/sweep.hpp"

namespace fuzzybox::dynamics {

using quantizer::PhaseState;

// Mechanical system in inverse-mass form (the primary representation: the
// inverse mass g(q) = 1/M(q) stays finite where M diverges).
//   H(q,p) = p^2 g(q)/2 + V(q)
//   dq/dt = p g,   dp/dt = -V' - (p^2/2) g'
struct MechanicalSystem {
    std::function<double(double)> inverse_mass;
    std::function<double(double)> inverse_mass_d1;
    std::function<double(double)> potential;
    std::function<double(double)> potential_d1;
};

// Constant mass m with potential V.
MechanicalSystem constant_mass_system(double mass, std::function<double(double)> V,
                                      std::function<double(double)> V_d1);

// The smeared effective system of the quantized free particle in a region:
//   g(q) = W2(q)/m,  V(q) = (hbar^2/(2 m ell^2)) W2(q),
// with W2 the window at width sqrt(2) ell.  The force vanishes identically at
// the critical momentum |p| = hbar/ell.
MechanicalSystem semiclassical_system(const Geometry& g, const QuantizationParams& p);

struct Derivatives {
    double dq = 0.0;
    double dp = 0.0;
};

Derivatives canonical_rhs(const MechanicalSystem& sys, const PhaseState& s);

// Generalized force M(q) * d2q/dt2 = -V' + (p^2/2) g' (note the sign flip of
// the g' term relative to dp/dt: F - dp/dt = p^2 g' identically).
double force(const MechanicalSystem& sys, const PhaseState& s);

// Second-order form: d2q/dt2 = -[V' + (1/2) M'(q) qdot^2] / M(q); requires a
// non-vanishing inverse mass (throws numerical_error in the deep exterior).
double lagrangian_accel(const MechanicalSystem& sys, double q, double qdot);

double energy(const MechanicalSystem& sys, const PhaseState& s);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;
    std::vector<double> energies;
    double dt = 0.0;
    bool truncated = false; // stopped early (inverse mass underflow)

    double max_relative_energy_drift() const;
};

// Fixed-step classical RK4 on (q,p).  Non-finite states raise numerical_error
// reporting the last valid time; an inverse mass underflowing below 1e-12
// truncates the trajectory and sets the flag (deep-exterior creep).
Trajectory integrate(const MechanicalSystem& sys, const PhaseState& s0, double T, double dt);

// RK4 on (q, qdot) through lagrangian_accel; p is reconstructed as qdot/g.
Trajectory integrate_lagrangian(const MechanicalSystem& sys, double q0, double qdot0, double T,
                                double dt);

// Specular hard-wall kinematics in (a,b) (or the half line): exact unfolding,
// machine-precision positions and reflected momenta at arbitrary times.
PhaseState hard_wall_state(const PhaseState& s0, const Geometry& g, double mass, double t);
Trajectory hard_wall_reference(const PhaseState& s0, const Geometry& g, double mass, double T,
                               double dt_sample);

// One row per smearing step of the classical-limit study  ell_n = ell0/2^n,
// hbar_n = ell_n^2.
struct LimitStudyRow {
    int n = 0;
    double ell = 0.0;
    double hbar = 0.0;
    double interior_deviation = 0.0; // sup |q - q_hard_wall| while the hard-wall
                                     // reference stays 6*sqrt(2)*ell from walls
    double penetration = 0.0;        // sup (q - b) over the trajectory
    double max_force = 0.0;          // sup |F| over the trajectory
};

std::vector<LimitStudyRow> classical_limit_study(const PhaseState& s0, const Geometry& g,
                                                 double mass, double ell0, int steps, double T,
                                                 double dt,
                                                 par::Exec exec = par::Exec::openmp);

} // namespace fuzzybox::dynamics
