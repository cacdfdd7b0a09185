#pragma once

#include <functional>

namespace censorlab {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    double l1 = 0.0;     // integral of |f|, the scale the tolerance refers to
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Terminates when
/// error <= rel_tol * l1 or the bisection depth is exhausted; callers decide
/// whether the returned error is acceptable.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-12, unsigned max_depth = 18);

}  // namespace censorlab
