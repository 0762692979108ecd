#include "jset/fft.hpp"

#include <cmath>

namespace jset {

bool is_power_of_two(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft(std::vector<Complex>& a, bool invert) {
  const size_t n = a.size();
  if (n <= 1) return;
  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; i++) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2 * M_PI / (double)len * (invert ? 1 : -1);
    Complex wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Complex w(1);
      for (size_t j = 0; j < len / 2; j++) {
        Complex u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (invert)
    for (auto& x : a) x /= (double)n;
}

std::vector<Complex> convolve_fft(const std::vector<Complex>& a,
                                  const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) return {};
  size_t need = a.size() + b.size() - 1, n = 1;
  while (n < need) n <<= 1;
  std::vector<Complex> fa(a.begin(), a.end()), fb(b.begin(), b.end());
  fa.resize(n);
  fb.resize(n);
  fft(fa, false);
  fft(fb, false);
  for (size_t i = 0; i < n; i++) fa[i] *= fb[i];
  fft(fa, true);
  fa.resize(need);
  return fa;
}

}  // namespace jset
