#include <doctest.h>

#include <cmath>
#include <random>

#include "jset/analysis.hpp"
#include "jset/boettcher.hpp"
#include "test_helpers.hpp"

using namespace jset;
using jset::testing::cached_phi;

TEST_CASE("beta_E is 1 at c=0") {
  auto r = beta_E(make_param(Complex(2)), cached_phi(Complex(2), 64), 1 << 12);
  CHECK(std::abs(r.beta_E - 1.0) <= 1e-6);
  CHECK(r.winding == -1);  // P'(phi) ~ 2/z winds once clockwise
}

TEST_CASE("beta_E respects the lambda -> 2 - lambda symmetry") {
  auto a = beta_E(make_param(Complex(0.5)), cached_phi(Complex(0.5), 1 << 12), 1 << 12);
  auto b = beta_E(make_param(Complex(1.5)), cached_phi(Complex(1.5), 1 << 12), 1 << 12);
  CHECK(std::abs(a.beta_E - b.beta_E) <= 1e-6);
}

TEST_CASE("beta_E quadrature is stable") {
  auto p = make_param(Complex(0.5));
  const auto& phi = cached_phi(Complex(0.5), 1 << 12);
  auto a = beta_E(p, phi, 1 << 12);
  auto b = beta_E(p, phi, 1 << 13, {0.9, 0.99, 0.999, 0.9995});
  CHECK(std::abs(a.beta_E - b.beta_E) < 1e-4);
}

TEST_CASE("derivative-vanishing guard") {
  // a synthetic 'phi' pinned at the critical point 1/2
  TruncatedSeries fake(0, {Complex(0.5), 0, 0, 0});
  CHECK_THROWS_AS(beta_E(make_param(Complex(0.9)), fake, 1 << 10), DerivativeVanishes);
}

TEST_CASE("dimension lower bound") {
  CHECK(dh_lower_bound(1.0) == 1.0);
  CHECK(dh_lower_bound(0.5) == 2.0);
  CHECK_THROWS_AS(dh_lower_bound(0.3), InvariantViolation);

  auto p = make_param(Complex(0.9));
  const auto& phi = cached_phi(Complex(0.9), 1 << 12);
  auto r = beta_E(p, phi, 1 << 12);
  double bound = dh_lower_bound(r.beta_E);
  auto orbs = periodic_points_on_J(p, 6, phi);
  double betaM = 0;
  for (const auto& o : orbs) betaM = std::max(betaM, std::log2(std::abs(o.w)) / o.N);
  CHECK(bound <= 2.0);
  CHECK(bound >= 1.0 / betaM);
}

TEST_CASE("ruelle dimension closed form at c=0") {
  auto p = make_param(Complex(2));
  const auto& phi = cached_phi(Complex(2), 64);
  auto orbs = periodic_points_on_J(p, 4, phi);
  double D = ruelle_dimension(orbs, 4);
  CHECK(std::abs(D - std::log2(15.0) / 4) <= 1e-9);

  double prev = 0;
  for (int n = 2; n <= 10; n++) {
    double Dn = ruelle_dimension(periodic_points_on_J(p, n, phi), n);
    CHECK(std::abs(Dn - std::log2(std::pow(2.0, n) - 1) / n) <= 1e-9);
    CHECK(Dn > prev);
    prev = Dn;
  }
  CHECK(prev < 1.0);

  // n=1 has a single point with A_1(0) = 1: no bracket
  CHECK_THROWS_AS(ruelle_dimension(periodic_points_on_J(p, 1, phi), 1), NoBracket);
}

TEST_CASE("ruelle dimension against the dimension bound at lambda=0.5") {
  auto p = make_param(Complex(0.5));
  const auto& phi = cached_phi(Complex(0.5), 1 << 12);
  double D = ruelle_dimension(periodic_points_on_J(p, 10, phi), 10);
  auto r = beta_E(p, phi, 1 << 12);
  CHECK(D >= 1.0 / r.beta_E - 0.02);
  CHECK(D > 0);
  CHECK(D <= 2);
}

TEST_CASE("beta_E cross-checks the fix(P_n) average") {
  auto p = make_param(Complex(0.5));
  const auto& phi = cached_phi(Complex(0.5), 1 << 12);
  auto dist = exponent_distribution(periodic_points_on_J(p, 12, phi), 12);
  double mean = 0;
  for (double b : dist.betas) mean += b;
  mean /= (double)dist.betas.size();
  auto r = beta_E(p, phi, 1 << 12);
  CHECK(std::abs(mean - r.beta_E) <= 1e-2);
}

TEST_CASE("exponent distribution at c=0 is a single step") {
  auto p = make_param(Complex(2));
  const auto& phi = cached_phi(Complex(2), 64);
  auto orbs = periodic_points_on_J(p, 6, phi);
  auto dist = exponent_distribution(orbs, 6);
  CHECK(dist.mu(dist.beta_M) == 1.0);
  CHECK(dist.mu(0.999) == 0.0);
  CHECK(dist.Phi(1.0 + 1e-12) == 0.0);  // exponents are 1 up to rounding
  double D = ruelle_dimension(orbs, 6);
  CHECK(std::abs(legendre_check(dist, D) + D) < 1e-3);  // max at s = 1
}

TEST_CASE("normality classification basics") {
  std::vector<uint8_t> zeros(12, 0);
  CHECK(!normality_classify(zeros, 1, 0.5).is_normal);

  std::vector<uint8_t> alt;
  for (int i = 0; i < 12; i++) alt.push_back((uint8_t)(i % 2));
  CHECK(normality_classify(alt, 1, 0.01).is_normal);
  CHECK(normality_classify(alt, 1, 0.9).is_normal);

  // eps >= 1 accepts everything at m = 1
  CHECK(normality_classify(zeros, 1, 1.0).is_normal);
}

TEST_CASE("normality is invariant under cyclic shifts") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; trial++) {
    int N = 4 + (int)(rng() % 5);
    int m = 1 + (int)(rng() % 2);
    std::vector<uint8_t> bits((size_t)(N * m));
    for (auto& b : bits) b = (uint8_t)(rng() & 1);
    bool base = normality_classify(bits, m, 0.5).is_normal;
    for (int s = 1; s < N * m; s++) {
      std::vector<uint8_t> rot;
      for (int i = 0; i < N * m; i++) rot.push_back(bits[(size_t)((i + s) % (N * m))]);
      CHECK(normality_classify(rot, m, 0.5).is_normal == base);
    }
  }
}

TEST_CASE("exact non-normal counts match enumeration") {
  for (int N = 2; N <= 14; N++) {
    for (double eps : {0.25, 0.5}) {
      uint64_t brute = 0;
      for (uint64_t s = 0; s < (1ULL << N); s++) {
        std::vector<uint8_t> bits((size_t)N);
        for (int i = 0; i < N; i++) bits[(size_t)i] = (uint8_t)((s >> i) & 1);
        if (!normality_classify(bits, 1, eps).is_normal) brute++;
      }
      CHECK(count_nonnormal_exact(N, 1, eps) == brute);
    }
  }
  for (int N = 2; N <= 8; N++) {
    for (double eps : {0.25, 0.5}) {
      uint64_t brute = 0;
      for (uint64_t s = 0; s < (1ULL << (2 * N)); s++) {
        std::vector<uint8_t> bits((size_t)(2 * N));
        for (int i = 0; i < 2 * N; i++) bits[(size_t)i] = (uint8_t)((s >> i) & 1);
        if (!normality_classify(bits, 2, eps).is_normal) brute++;
      }
      CHECK(count_nonnormal_exact(N, 2, eps) == brute);
    }
  }
}

TEST_CASE("hoeffding bound values and monotonicity") {
  CHECK(hoeffding_bound(100, 1, 0.5) == doctest::Approx(4 * std::exp(-12.5)).epsilon(1e-12));
  for (int N = 2; N < 60; N++)
    CHECK(hoeffding_bound(N + 1, 1, 0.5) < hoeffding_bound(N, 1, 0.5));

  // finite tail sums stay below the geometric bound
  double q = std::exp(-2.0 * 0.25 * 0.25 / 4.0);
  double tail = 0;
  for (int N = 20; N <= 200; N++) tail += hoeffding_bound(N, 1, 0.25);
  CHECK(tail <= hoeffding_bound(20, 1, 0.25) / (1 - q) + 1e-12);
}

TEST_CASE("bound dominates the exact fraction") {
  for (int N = 1; N <= 20; N++)
    for (int m : {1, 2})
      for (double eps : {0.25, 0.5}) {
        double frac =
            (double)count_nonnormal_exact(N, m, eps) / std::pow(2.0, (double)N * m);
        CHECK(frac <= hoeffding_bound(N, m, eps) + 1e-12);
      }
}

TEST_CASE("holder exponent diagnostics") {
  // straight segment
  std::vector<Complex> seg;
  for (int i = 0; i < 512; i++) seg.push_back(Complex(i / 512.0, 0));
  CHECK(holder_estimate(seg) == doctest::Approx(1.0).epsilon(0.05));

  // smooth circle (c=0 julia set)
  std::vector<Complex> circ;
  for (int i = 0; i < 512; i++) circ.push_back(0.5 + 0.5 * std::polar(1.0, 2 * M_PI * i / 512.0));
  CHECK(holder_estimate(circ) == doctest::Approx(1.0).epsilon(0.05));
}
