#include "simplexconf/root_finding.hpp"

#include <cmath>
#include <sstream>

#include "simplexconf/errors.hpp"

namespace simplexconf {

double find_root(const std::function<double(double)>& objective, Bracket bracket,
                 RootOptions options) {
    constexpr double kEps = 2.220446049250313e-16;
    double a = bracket.lo, b = bracket.hi;
    if (!(a < b)) {
        throw BracketError("find_root: bracket must satisfy lo < hi");
    }
    double fa = objective(a);
    double fb = objective(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream msg;
        msg << "find_root: no sign change on [" << a << ", " << b << "]: f(lo)=" << fa
            << " f(hi)=" << fb;
        throw BracketError(msg.str());
    }

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < options.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::fabs(b) + 0.5 * options.tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // Inverse quadratic / secant step.
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
            const double min2 = std::fabs(e * q);
            if (2.0 * p < (min1 < min2 ? min1 : min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::fabs(d) > tol1) {
            b += d;
        } else {
            b += (xm > 0.0 ? tol1 : -tol1);
        }
        fb = objective(b);
    }
    throw ConvergenceError("find_root: iteration cap exceeded");
}

}  // namespace simplexconf
