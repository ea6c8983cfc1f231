#include "jcdm/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace jcdm {

double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double tol) {
    if (b == a) return 0.0;
    if (b < a) return -integrate_endpoint_singular(f, b, a, tol);
    static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    double err = 0.0;
    return ts.integrate(f, a, b, tol, &err);
}

double integrate_cos_substituted(const std::function<double(double)>& f, double a, double b,
                                 double tol) {
    if (b == a) return 0.0;
    const double half = 0.5 * (b - a);
    auto g = [&](double t) { return f(a + half * (1.0 - std::cos(t))) * half * std::sin(t); };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, std::numbers::pi, 15,
                                                                          tol, &err);
}

}  // namespace jcdm
