#include <doctest.h>

#include <random>

#include "jset/series.hpp"

using namespace jset;

TEST_CASE("product (1+z)(1-z) = 1 - z^2") {
  TruncatedSeries a = TruncatedSeries::taylor({1, 1, 0, 0});
  TruncatedSeries b = TruncatedSeries::taylor({1, -1, 0, 0});
  auto p = mul(a, b);
  CHECK(p.at(0) == Complex(1));
  CHECK(p.at(1) == Complex(0));
  CHECK(p.at(2) == Complex(-1));
  CHECK(p.at(3) == Complex(0));
}

TEST_CASE("reciprocal of 2z/(1-z): product is 1 to order") {
  int K = 16;
  std::vector<Complex> c((size_t)K, Complex(2));
  TruncatedSeries f(1, c);  // 2z + 2z^2 + ...
  auto r = reciprocal(f);
  CHECK(r.lowest_index() == -1);
  CHECK(r.at(-1) == Complex(0.5));
  auto prod = mul(f, r);
  for (int k = 0; k <= prod.order(); k++)
    CHECK(std::abs(prod.at(k) - (k == 0 ? Complex(1) : Complex(0))) < 1e-14);
}

TEST_CASE("derivative of z^3") {
  auto d = derivative(TruncatedSeries::monomial(1.0, 3, 5));
  CHECK(d.at(2) == Complex(3));
  CHECK(d.at(1) == Complex(0));
  CHECK(d.at(3) == Complex(0));
}

TEST_CASE("reciprocal rejects zero leading coefficient") {
  TruncatedSeries f = TruncatedSeries::taylor({0, 1, 2});
  CHECK_THROWS_AS(reciprocal(f), IncompatibleIndex);
}

TEST_CASE("direct and transform products agree to 1e-12 relative") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  int K = 255;
  std::vector<Complex> a((size_t)K + 1), b((size_t)K + 1);
  for (auto& x : a) x = Complex(u(rng), u(rng));
  for (auto& x : b) x = Complex(u(rng), u(rng));
  TruncatedSeries fa(0, a), fb(0, b);
  auto d = mul_direct(fa, fb);
  auto f = mul_fft(fa, fb);
  double scale_ref = std::max(d.sup_coeff(), 1.0);
  CHECK(sup_coeff_diff(d, f) / scale_ref < 1e-12);
}

TEST_CASE("compose against pointwise evaluation") {
  TruncatedSeries f = TruncatedSeries::taylor({1, 2, 1, 0, 0, 0, 0, 0});
  TruncatedSeries h(1, {1, 1.0 / 3, 0, 0, 0, 0, 0});
  auto fh = compose(f, h);
  for (double x : {0.05, 0.1, -0.07}) {
    Complex z(x, 0.02);
    Complex want = f.eval(h.eval(z));
    CHECK(std::abs(fh.eval(z) - want) < 1e-9);
  }
}

TEST_CASE("laurent evaluation") {
  TruncatedSeries f(-1, {1, 3, 1});  // 1/z + 3 + z
  Complex z(0.25, 0.1);
  CHECK(std::abs(f.eval(z) - (1.0 / z + 3.0 + z)) < 1e-14);
}
