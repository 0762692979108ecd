#pragma once

#include <complex>
#include <vector>

#include "jset/errors.hpp"
#include "jset/fft.hpp"

namespace jset {

// Finite Laurent/Taylor series sum_{k=lowest}^{order} c_k z^k.
// Arithmetic is coefficient-exact up to the order that the operands
// determine: the retained coefficients of any result equal those of the
// exact operation on the underlying (infinite) series.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(int lowest, std::vector<Complex> coeffs)
      : lowest_(lowest), coeffs_(std::move(coeffs)) {}

  static TruncatedSeries taylor(std::vector<Complex> coeffs) {
    return TruncatedSeries(0, std::move(coeffs));
  }
  static TruncatedSeries zero(int order) {
    return TruncatedSeries(0, std::vector<Complex>(order + 1, Complex(0)));
  }
  // x one_z_k: c * z^k as a series of the given order
  static TruncatedSeries monomial(Complex c, int k, int order);

  int lowest_index() const { return lowest_; }
  int order() const { return lowest_ + (int)coeffs_.size() - 1; }
  size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  // coefficient of z^k (0 outside the stored window)
  Complex at(int k) const {
    int i = k - lowest_;
    return (i >= 0 && i < (int)coeffs_.size()) ? coeffs_[i] : Complex(0);
  }
  Complex& ref(int k) { return coeffs_[k - lowest_]; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  TruncatedSeries truncated(int new_order) const;

  // Horner evaluation; Laurent part handled by a final division.
  Complex eval(Complex z) const;

  double sup_coeff() const;

 private:
  int lowest_ = 0;
  std::vector<Complex> coeffs_;
};

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries scale(const TruncatedSeries& a, Complex s);

// Product, truncated to the largest order both operands support:
// min(orderA + lowestB, orderB + lowestA).
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries mul_direct(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries mul_fft(const TruncatedSeries& a, const TruncatedSeries& b);

TruncatedSeries derivative(const TruncatedSeries& a);

// 1/a; requires a nonzero coefficient at the lowest index, else
// IncompatibleIndex. Result order is orderA - 2*lowestA.
TruncatedSeries reciprocal(const TruncatedSeries& a);

// f(h(z)) for Taylor f and inner h with lowest_index >= 1.
TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& h);

// f(z^p)
TruncatedSeries compose_z_pow(const TruncatedSeries& f, int p);

double sup_coeff_diff(const TruncatedSeries& a, const TruncatedSeries& b);

}  // namespace jset
