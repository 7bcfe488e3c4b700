#include "fuzzybox/dynamics.hpp"

#include <cmath>
#include <string>

#include "fuzzybox/windowfn.hpp"

namespace fuzzybox::dynamics {

namespace {
// Inverse-mass floor for the Lagrangian form: below this the division by g is
// meaningless (deep exterior) and the caller gets a singularity error.
constexpr double kGFloor = 1e-12;
} // namespace

MechanicalSystem constant_mass_system(double mass, std::function<double(double)> V,
                                      std::function<double(double)> V_d1) {
    if (!(mass > 0.0)) throw config_error("constant_mass_system: mass must be positive");
    return MechanicalSystem{
        [mass](double) { return 1.0 / mass; },
        [](double) { return 0.0; },
        std::move(V),
        std::move(V_d1),
    };
}

MechanicalSystem semiclassical_system(const Geometry& g, const QuantizationParams& p) {
    p.validate();
    const double wide = std::sqrt(2.0) * p.ell;
    const double m = p.mass;
    const double vscale = p.hbar * p.hbar / (2.0 * m * p.ell * p.ell);
    return MechanicalSystem{
        [g, wide, m](double q) { return windowfn::window_profile(q, g, wide) / m; },
        [g, wide, m](double q) { return windowfn::window_profile_d1(q, g, wide) / m; },
        [g, wide, vscale](double q) { return vscale * windowfn::window_profile(q, g, wide); },
        [g, wide, vscale](double q) { return vscale * windowfn::window_profile_d1(q, g, wide); },
    };
}

Derivatives canonical_rhs(const MechanicalSystem& sys, const PhaseState& s) {
    const double gq = sys.inverse_mass(s.q);
    const double gp = sys.inverse_mass_d1(s.q);
    return Derivatives{s.p * gq, -sys.potential_d1(s.q) - 0.5 * s.p * s.p * gp};
}

double force(const MechanicalSystem& sys, const PhaseState& s) {
    return -sys.potential_d1(s.q) + 0.5 * s.p * s.p * sys.inverse_mass_d1(s.q);
}

double lagrangian_accel(const MechanicalSystem& sys, double q, double qdot) {
    const double gq = sys.inverse_mass(q);
    if (!(gq > kGFloor))
        throw numerical_error("lagrangian_accel: inverse mass vanished at q = " +
                              std::to_string(q) + " (deep exterior)");
    // M' = -g'/g^2, so -(1/2) M' qdot^2 / M = + qdot^2 g' / (2 g).
    return -sys.potential_d1(q) * gq + 0.5 * qdot * qdot * sys.inverse_mass_d1(q) / gq;
}

double energy(const MechanicalSystem& sys, const PhaseState& s) {
    return 0.5 * s.p * s.p * sys.inverse_mass(s.q) + sys.potential(s.q);
}

double Trajectory::max_relative_energy_drift() const {
    if (energies.empty()) return 0.0;
    const double e0 = energies.front();
    const double scale = std::max(std::fabs(e0), 1e-300);
    double worst = 0.0;
    for (double e : energies) worst = std::max(worst, std::fabs(e - e0) / scale);
    return worst;
}

namespace {

void check_time_step(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0)) throw config_error("integrate: require T > 0 and dt > 0");
    if (T / dt > 5e8) throw config_error("integrate: step count exceeds 5e8");
}

[[noreturn]] void throw_divergence(double t_last, const PhaseState& s_last) {
    throw numerical_error("integrate: non-finite state after t = " + std::to_string(t_last) +
                          " (last valid q = " + std::to_string(s_last.q) +
                          ", p = " + std::to_string(s_last.p) + ")");
}

} // namespace

Trajectory integrate(const MechanicalSystem& sys, const PhaseState& s0, double T, double dt) {
    check_time_step(T, dt);
    const long nsteps = static_cast<long>(std::ceil(T / dt - 1e-9));

    Trajectory tr;
    tr.dt = dt;
    tr.times.reserve(nsteps + 1);
    tr.states.reserve(nsteps + 1);
    tr.energies.reserve(nsteps + 1);

    PhaseState s = s0;
    tr.times.push_back(0.0);
    tr.states.push_back(s);
    tr.energies.push_back(energy(sys, s));

    for (long i = 0; i < nsteps; ++i) {
        const Derivatives k1 = canonical_rhs(sys, s);
        const PhaseState s2{s.q + 0.5 * dt * k1.dq, s.p + 0.5 * dt * k1.dp};
        const Derivatives k2 = canonical_rhs(sys, s2);
        const PhaseState s3{s.q + 0.5 * dt * k2.dq, s.p + 0.5 * dt * k2.dp};
        const Derivatives k3 = canonical_rhs(sys, s3);
        const PhaseState s4{s.q + dt * k3.dq, s.p + dt * k3.dp};
        const Derivatives k4 = canonical_rhs(sys, s4);
        const PhaseState next{
            s.q + dt / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq),
            s.p + dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp)};
        if (!(std::isfinite(next.q) && std::isfinite(next.p)))
            throw_divergence(tr.times.back(), s);
        s = next;
        tr.times.push_back((i + 1) * dt);
        tr.states.push_back(s);
        tr.energies.push_back(energy(sys, s));
        if (!(sys.inverse_mass(s.q) > kGFloor)) {
            tr.truncated = true; // deep-exterior creep: stop instead of
            break;               // grinding through denormal mass values
        }
    }
    return tr;
}

Trajectory integrate_lagrangian(const MechanicalSystem& sys, double q0, double qdot0, double T,
                                double dt) {
    check_time_step(T, dt);
    const long nsteps = static_cast<long>(std::ceil(T / dt - 1e-9));

    Trajectory tr;
    tr.dt = dt;
    auto push = [&](double t, double q, double qdot) {
        const double gq = sys.inverse_mass(q);
        const PhaseState s{q, qdot / gq}; // p = M(q) qdot
        tr.times.push_back(t);
        tr.states.push_back(s);
        tr.energies.push_back(energy(sys, s));
    };

    double q = q0, v = qdot0;
    push(0.0, q, v);
    for (long i = 0; i < nsteps; ++i) {
        const double a1 = lagrangian_accel(sys, q, v);
        const double q2 = q + 0.5 * dt * v, v2 = v + 0.5 * dt * a1;
        const double a2 = lagrangian_accel(sys, q2, v2);
        const double q3 = q + 0.5 * dt * v2, v3 = v + 0.5 * dt * a2;
        const double a3 = lagrangian_accel(sys, q3, v3);
        const double q4 = q + dt * v3, v4 = v + dt * a3;
        const double a4 = lagrangian_accel(sys, q4, v4);
        const double qn = q + dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
        const double vn = v + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        if (!(std::isfinite(qn) && std::isfinite(vn)))
            throw_divergence(tr.times.back(), tr.states.back());
        q = qn;
        v = vn;
        push((i + 1) * dt, q, v);
    }
    return tr;
}

PhaseState hard_wall_state(const PhaseState& s0, const Geometry& g, double mass, double t) {
    if (!(mass > 0.0)) throw config_error("hard_wall_state: mass must be positive");
    if (s0.q < g.a || (g.is_bounded() && s0.q > g.b))
        throw config_error("hard_wall_state: start outside the region");
    const double v = s0.p / mass;

    if (g.is_bounded()) {
        // Unfold onto the double cover of length 2L.
        const double L = g.b - g.a;
        double s = std::fmod(s0.q - g.a + v * t, 2.0 * L);
        if (s < 0.0) s += 2.0 * L;
        if (s <= L) return PhaseState{g.a + s, s0.p};
        return PhaseState{g.a + 2.0 * L - s, -s0.p};
    }
    // Half line: at most one reflection at a.
    const double reach = s0.q - g.a + v * t;
    if (reach >= 0.0) return PhaseState{g.a + reach, s0.p};
    return PhaseState{g.a - reach, -s0.p};
}

Trajectory hard_wall_reference(const PhaseState& s0, const Geometry& g, double mass, double T,
                               double dt_sample) {
    check_time_step(T, dt_sample);
    const long nsteps = static_cast<long>(std::ceil(T / dt_sample - 1e-9));
    Trajectory tr;
    tr.dt = dt_sample;
    const double e0 = 0.5 * s0.p * s0.p / mass;
    for (long i = 0; i <= nsteps; ++i) {
        const double t = i * dt_sample;
        tr.times.push_back(t);
        tr.states.push_back(hard_wall_state(s0, g, mass, t));
        tr.energies.push_back(e0);
    }
    return tr;
}

std::vector<LimitStudyRow> classical_limit_study(const PhaseState& s0, const Geometry& g,
                                                 double mass, double ell0, int steps, double T,
                                                 double dt, par::Exec exec) {
    if (!(ell0 > 0.0)) throw config_error("classical_limit_study: ell0 must be positive");
    if (steps < 1) throw config_error("classical_limit_study: need at least one step");
    if (!g.is_bounded())
        throw config_error("classical_limit_study: penetration metric needs a bounded region");

    std::vector<LimitStudyRow> rows(steps);
    par::for_index(static_cast<std::size_t>(steps), exec, [&](std::size_t i) {
        LimitStudyRow row;
        row.n = static_cast<int>(i);
        row.ell = ell0 / std::pow(2.0, row.n);
        row.hbar = row.ell * row.ell;

        QuantizationParams prm;
        prm.ell = row.ell;
        prm.hbar = row.hbar;
        prm.mass = mass;
        const MechanicalSystem sys = semiclassical_system(g, prm);
        const Trajectory tr = integrate(sys, s0, T, dt);

        // The comparison against the bouncing reference is meaningful only on
        // the initial free segment, i.e. until the reference first comes
        // within the wall-interaction margin; after the bounce the two flows
        // are different by design (reflection vs. creep).
        const double margin = 6.0 * std::sqrt(2.0) * row.ell;
        double dev = 0.0, pen = -1e300, fmax = 0.0;
        bool interior_segment = true;
        for (std::size_t j = 0; j < tr.times.size(); ++j) {
            if (interior_segment) {
                const PhaseState ref = hard_wall_state(s0, g, mass, tr.times[j]);
                if (ref.q - g.a >= margin && g.b - ref.q >= margin)
                    dev = std::max(dev, std::fabs(tr.states[j].q - ref.q));
                else
                    interior_segment = false;
            }
            pen = std::max(pen, tr.states[j].q - g.b);
            fmax = std::max(fmax, std::fabs(force(sys, tr.states[j])));
        }
        row.interior_deviation = dev;
        row.penetration = pen;
        row.max_force = fmax;
        rows[i] = row;
    });
    return rows;
}

} // namespace fuzzybox::dynamics
