#include "jcdm/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "jcdm/model.hpp"

namespace jcdm {

namespace {

// Lanczos-type series, gamma = 671/128 with 14 rational terms plus constant
constexpr std::array<double, 14> kCof = {
    57.1562356658629235,     -59.5979603554754912,     14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,   .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,   -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3,  .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

std::complex<double> lngamma_right(std::complex<double> z) {
    using cd = std::complex<double>;
    const cd t = z + 5.24218750000000000;
    cd ser = 0.999999999999997092;
    cd y = z;
    for (double c : kCof) {
        y += 1.0;
        ser += c / y;
    }
    // keep the pieces separate so the result stays on the continuous branch
    return (z + 0.5) * std::log(t) - t + std::log(2.5066282746310005) + std::log(ser) - std::log(z);
}

}  // namespace

std::complex<double> complex_log_gamma(std::complex<double> z) {
    const double nearest = std::round(z.real());
    if (z.real() <= 0.0 && nearest <= 0.0 && std::abs(z - nearest) < 1e-12)
        throw numerical_error("complex_log_gamma: argument at a pole");
    if (z.real() > 0.0) return lngamma_right(z);
    // reflection, Gamma(z) Gamma(1-z) = pi / sin(pi z)
    const double pi = std::numbers::pi;
    return std::log(pi) - std::log(std::sin(pi * z)) - lngamma_right(1.0 - z);
}

}  // namespace jcdm
