#include "censorlab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace censorlab {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, unsigned max_depth) {
    QuadratureResult out;
    if (a == b) return out;
    out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, rel_tol, &out.error, &out.l1);
    return out;
}

}  // namespace censorlab
