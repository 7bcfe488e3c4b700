#pragma once

#include <cmath>
#include <string>

#include "fuzzybox/errors.hpp"

namespace fuzzybox {

// Configuration space: a bounded interval (a,b) or a half line (a,+inf).
// All lengths are expressed in units of the reference width q0.
enum class GeomKind { bounded, half_line };

struct Geometry {
    GeomKind kind = GeomKind::bounded;
    double a = 0.0;
    double b = 0.0; // meaningful only for bounded geometries

    static Geometry bounded(double a, double b) {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw config_error("geometry: endpoints must be finite");
        if (!(a < b))
            throw config_error("geometry: require a < b, got a=" + std::to_string(a) +
                               " b=" + std::to_string(b));
        return Geometry{GeomKind::bounded, a, b};
    }

    static Geometry half_line(double a) {
        if (!std::isfinite(a))
            throw config_error("geometry: endpoint must be finite");
        return Geometry{GeomKind::half_line, a, 0.0};
    }

    bool is_bounded() const { return kind == GeomKind::bounded; }

    // Midpoint of the accessible region (used by sweeps); half lines have none.
    double midpoint() const {
        if (!is_bounded()) throw config_error("geometry: half line has no midpoint");
        return 0.5 * (a + b);
    }
};

// Physical parameters of the quantization: smearing width ell, Planck constant,
// particle mass, and the reference length q0 that fixes the unit system.
struct QuantizationParams {
    double ell = 0.1;
    double hbar = 1.0;
    double mass = 1.0;
    double q0 = 1.0;

    void validate() const {
        if (!(std::isfinite(ell) && ell > 0.0))
            throw config_error("params: ell must be positive and finite");
        if (!(std::isfinite(hbar) && hbar > 0.0))
            throw config_error("params: hbar must be positive and finite");
        if (!(std::isfinite(mass) && mass > 0.0))
            throw config_error("params: mass must be positive and finite");
        if (!(std::isfinite(q0) && q0 > 0.0))
            throw config_error("params: q0 must be positive and finite");
    }

    QuantizationParams with_ell(double new_ell) const {
        QuantizationParams p = *this;
        p.ell = new_ell;
        return p;
    }

    // Energy unit alpha = hbar^2/(m q0^2) and force unit F0 = hbar^2/(2 m q0^3):
    // used only for CSV column scaling at the CLI boundary.
    double energy_unit() const { return hbar * hbar / (mass * q0 * q0); }
    double force_unit() const { return hbar * hbar / (2.0 * mass * q0 * q0 * q0); }
};

} // namespace fuzzybox
