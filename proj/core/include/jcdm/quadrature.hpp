#pragma once

#include <functional>

namespace jcdm {

// Integral over [a, b] of an integrand that may behave like sqrt or 1/sqrt
// at either endpoint (turning points). Double-exponential rule, so the
// endpoint singularities cost nothing extra.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double tol = 1e-12);

// Same integral after x = a + (b-a)(1-cos t)/2, smooth for 1/sqrt endpoints.
double integrate_cos_substituted(const std::function<double(double)>& f, double a, double b,
                                 double tol = 1e-12);

}  // namespace jcdm
