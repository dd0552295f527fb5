#pragma once

#include <functional>

namespace simplexconf {

// Interval [lo, hi] with a sign change of the objective across it.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct RootOptions {
    double tol = 1e-10;
    int max_iter = 200;
};

// Brent's method. The objective must be continuous on the bracket and
// change sign across it; throws BracketError otherwise, ConvergenceError
// if the iteration cap is exceeded.
double find_root(const std::function<double(double)>& objective, Bracket bracket,
                 RootOptions options = {});

}  // namespace simplexconf
