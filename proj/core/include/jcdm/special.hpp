#pragma once

#include <complex>

namespace jcdm {

// Principal (continuous) branch of log Gamma for Re z > 0, reflection otherwise.
std::complex<double> complex_log_gamma(std::complex<double> z);

}  // namespace jcdm
