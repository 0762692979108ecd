#pragma once

#include <complex>
#include <vector>

namespace jset {

using Complex = std::complex<double>;

bool is_power_of_two(size_t n);

// In-place radix-2 FFT; n must be a power of two.
// invert=true applies the inverse transform including the 1/n factor.
void fft(std::vector<Complex>& a, bool invert);

// Linear convolution of a and b, exact to rounding.
std::vector<Complex> convolve_fft(const std::vector<Complex>& a,
                                  const std::vector<Complex>& b);

}  // namespace jset
