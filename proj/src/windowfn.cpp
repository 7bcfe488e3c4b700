#include "fuzzybox/windowfn.hpp"

#include <cmath>
#include <stdexcept>

namespace fuzzybox::windowfn {

namespace {

// Rational-kernel erfc after W. J. Cody's CALERF tableau.  Three regimes:
// |x| <= 0.46875 uses the erf rational in x^2; the middle range uses a degree
// 8/8 rational times exp(-x^2); the far tail an asymptotic rational in 1/x^2.
// The exponential is evaluated as exp(-ysq^2)*exp(-del) with ysq the argument
// truncated to 1/16ths, which avoids cancellation in exp(-x^2) at large x.
constexpr double kA[5] = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                          3209.37758913846947, .185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                          2844.23683343917062};
constexpr double kC[9] = {.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                          298.635138197400131,  881.95222124176909,  1712.04761263407058,
                          2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                          1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                          3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {.305326634961232344, .360344899949804439,   .125781726111229246,
                          .0160837851487422766, 6.58749161529837803e-4, .0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242,  1.87295284992346047, .527905102951428412,
                          .0605183413124413191, .00233520497626869185};
constexpr double kSqrPi = 0.56418958354775628695; // 1/sqrt(pi)
constexpr double kThresh = 0.46875;
constexpr double kXBig = 26.543; // erfc underflows to 0 beyond this

double erfc_positive(double y) {
    // y > kThresh
    double xnum, xden;
    double result;
    if (y <= 4.0) {
        xnum = kC[8] * y;
        xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + kC[i]) * y;
            xden = (xden + kD[i]) * y;
        }
        result = (xnum + kC[7]) / (xden + kD[7]);
    } else {
        if (y >= kXBig) return 0.0;
        const double ysq = 1.0 / (y * y);
        xnum = kP[5] * ysq;
        xden = ysq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + kP[i]) * ysq;
            xden = (xden + kQ[i]) * ysq;
        }
        result = ysq * (xnum + kP[4]) / (xden + kQ[4]);
        result = (kSqrPi - result) / y;
    }
    // split exponential: exp(-y^2) = exp(-ysq^2)*exp(-del), ysq = trunc(16y)/16
    const double ysq = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

} // namespace

double erfc(double x) {
    if (!std::isfinite(x)) throw std::domain_error("erfc: non-finite argument");
    const double y = std::fabs(x);
    if (y <= kThresh) {
        // erf rational, then erfc = 1 - erf
        const double ysq = y > 1.11e-16 ? y * y : 0.0;
        double xnum = kA[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + kA[i]) * ysq;
            xden = (xden + kB[i]) * ysq;
        }
        const double erf_val = x * (xnum + kA[3]) / (xden + kB[3]);
        return 1.0 - erf_val;
    }
    const double r = erfc_positive(y);
    return x < 0.0 ? 2.0 - r : r;
}

double window_profile(double x, const Geometry& g, double ell) {
    if (!(ell > 0.0)) throw std::domain_error("window_profile: ell must be positive");
    if (!g.is_bounded()) return 0.5 * erfc((g.a - x) / ell);
    // Past the midpoint, mirror the difference so both erfc arguments lean
    // positive.  The naive form subtracts two numbers near 2 out in the right
    // tail and keeps only absolute accuracy there; the tail is ~1e-8 sized, so
    // that costs eight digits of relative accuracy.  Both branches evaluate to
    // the identical expression at the midpoint.
    if (x <= 0.5 * (g.a + g.b))
        return 0.5 * (erfc((g.a - x) / ell) - erfc((g.b - x) / ell));
    return 0.5 * (erfc((x - g.b) / ell) - erfc((x - g.a) / ell));
}

double window_profile_d1(double x, const Geometry& g, double ell) {
    if (!(ell > 0.0)) throw std::domain_error("window_profile_d1: ell must be positive");
    const double u = (x - g.a) / ell;
    double v2 = 0.0;
    if (g.is_bounded()) {
        const double v = (x - g.b) / ell;
        v2 = std::exp(-v * v);
    }
    return kSqrPi * (std::exp(-u * u) - v2) / ell;
}

double window_profile_d2(double x, const Geometry& g, double ell) {
    if (!(ell > 0.0)) throw std::domain_error("window_profile_d2: ell must be positive");
    const double u = (x - g.a) / ell;
    double vterm = 0.0;
    if (g.is_bounded()) {
        const double v = (x - g.b) / ell;
        vterm = v * std::exp(-v * v);
    }
    return -2.0 * kSqrPi * (u * std::exp(-u * u) - vterm) / (ell * ell);
}

double window(double x, const Geometry& g, const QuantizationParams& p) {
    return window_profile(x, g, p.ell);
}

double window_derivative(int order, double x, const Geometry& g, const QuantizationParams& p) {
    switch (order) {
        case 1: return window_profile_d1(x, g, p.ell);
        case 2: return window_profile_d2(x, g, p.ell);
        default: throw std::domain_error("window_derivative: order must be 1 or 2");
    }
}

} // namespace fuzzybox::windowfn
