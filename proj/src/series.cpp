#include "jset/series.hpp"

#include <algorithm>
#include <cmath>

namespace jset {

TruncatedSeries TruncatedSeries::monomial(Complex c, int k, int order) {
  std::vector<Complex> v(order - std::min(k, 0) + 1, Complex(0));
  TruncatedSeries s(std::min(k, 0), std::move(v));
  s.ref(k) = c;
  return s;
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  int n = new_order - lowest_ + 1;
  if (n <= 0) return TruncatedSeries(lowest_, {});
  return TruncatedSeries(lowest_, std::vector<Complex>(coeffs_.begin(), coeffs_.begin() + n));
}

Complex TruncatedSeries::eval(Complex z) const {
  Complex acc(0);
  for (int i = (int)coeffs_.size() - 1; i >= 0; i--) acc = acc * z + coeffs_[i];
  if (lowest_ > 0)
    acc *= std::pow(z, lowest_);
  else
    for (int k = 0; k < -lowest_; k++) acc /= z;
  return acc;
}

double TruncatedSeries::sup_coeff() const {
  double m = 0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
  int lo = std::min(a.lowest_index(), b.lowest_index());
  int hi = std::min(a.order(), b.order());
  if (a.empty()) return b.truncated(hi);
  if (b.empty()) return a.truncated(hi);
  std::vector<Complex> v(hi - lo + 1, Complex(0));
  for (int k = lo; k <= hi; k++) v[k - lo] = a.at(k) + b.at(k);
  return TruncatedSeries(lo, std::move(v));
}

TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b) {
  return add(a, scale(b, Complex(-1)));
}

TruncatedSeries scale(const TruncatedSeries& a, Complex s) {
  std::vector<Complex> v(a.coeffs());
  for (auto& c : v) c *= s;
  return TruncatedSeries(a.lowest_index(), std::move(v));
}

static int product_order(const TruncatedSeries& a, const TruncatedSeries& b) {
  return std::min(a.order() + b.lowest_index(), b.order() + a.lowest_index());
}

TruncatedSeries mul_direct(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.empty() || b.empty()) return {};
  int lo = a.lowest_index() + b.lowest_index();
  int hi = product_order(a, b);
  std::vector<Complex> v(hi - lo + 1, Complex(0));
  for (int i = a.lowest_index(); i <= a.order(); i++) {
    Complex ai = a.at(i);
    if (ai == Complex(0)) continue;
    int jmax = std::min(b.order(), hi - i);
    for (int j = b.lowest_index(); j <= jmax; j++) v[i + j - lo] += ai * b.at(j);
  }
  return TruncatedSeries(lo, std::move(v));
}

TruncatedSeries mul_fft(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.empty() || b.empty()) return {};
  int lo = a.lowest_index() + b.lowest_index();
  int hi = product_order(a, b);
  auto full = convolve_fft(a.coeffs(), b.coeffs());
  full.resize(hi - lo + 1);
  return TruncatedSeries(lo, std::move(full));
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  // direct convolution wins below a few hundred coefficients
  if (a.size() < 192 || b.size() < 192) return mul_direct(a, b);
  return mul_fft(a, b);
}

TruncatedSeries derivative(const TruncatedSeries& a) {
  if (a.empty()) return {};
  std::vector<Complex> v;
  v.reserve(a.size());
  int lo = a.lowest_index() == 0 ? 0 : a.lowest_index() - 1;
  for (int k = lo + 1; k <= a.order(); k++) v.push_back((double)k * a.at(k));
  return TruncatedSeries(lo, std::move(v));
}

TruncatedSeries reciprocal(const TruncatedSeries& a) {
  if (a.empty() || a.at(a.lowest_index()) == Complex(0))
    throw IncompatibleIndex("reciprocal needs a nonzero leading coefficient");
  int l = a.lowest_index();
  int n = (int)a.size();  // coefficients of u(z) = z^{-l} a(z), u_0 != 0
  Complex u0 = a.at(l);
  std::vector<Complex> v(n, Complex(0));
  v[0] = 1.0 / u0;
  for (int m = 1; m < n; m++) {
    Complex s(0);
    for (int j = 1; j <= m; j++) s += a.at(l + j) * v[m - j];
    v[m] = -s / u0;
  }
  return TruncatedSeries(-l, std::move(v));
}

TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& h) {
  if (f.lowest_index() < 0)
    throw IncompatibleIndex("compose: outer series must be Taylor");
  if (h.lowest_index() < 1)
    throw IncompatibleIndex("compose: inner series needs lowest_index >= 1");
  int K = std::min(f.order(), h.order());
  TruncatedSeries acc = TruncatedSeries::zero(K);
  for (int k = f.order(); k >= 0; k--) {
    acc = mul(acc, h).truncated(K);
    // mul against lowest>=1 inner raises the lowest index; re-anchor at 0
    if (acc.lowest_index() > 0) {
      std::vector<Complex> v(K + 1, Complex(0));
      for (int j = acc.lowest_index(); j <= acc.order() && j <= K; j++) v[j] = acc.at(j);
      acc = TruncatedSeries(0, std::move(v));
    } else if (acc.order() < K) {
      std::vector<Complex> v(K + 1, Complex(0));
      for (int j = 0; j <= acc.order(); j++) v[j] = acc.at(j);
      acc = TruncatedSeries(0, std::move(v));
    }
    acc.ref(0) += f.at(k);
  }
  return acc;
}

TruncatedSeries compose_z_pow(const TruncatedSeries& f, int p) {
  if (f.empty()) return {};
  if (f.lowest_index() < 0) throw IncompatibleIndex("compose_z_pow: Taylor input required");
  std::vector<Complex> v((size_t)f.order() * p + 1, Complex(0));
  for (int k = f.lowest_index(); k <= f.order(); k++) v[(size_t)k * p] = f.at(k);
  return TruncatedSeries(0, std::move(v));
}

double sup_coeff_diff(const TruncatedSeries& a, const TruncatedSeries& b) {
  int lo = std::min(a.lowest_index(), b.lowest_index());
  int hi = std::max(a.order(), b.order());
  double m = 0;
  for (int k = lo; k <= hi; k++) m = std::max(m, std::abs(a.at(k) - b.at(k)));
  return m;
}

}  // namespace jset
