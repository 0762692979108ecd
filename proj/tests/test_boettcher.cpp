#include <doctest.h>

#include <cmath>
#include <random>

#include "jset/boettcher.hpp"
#include "test_helpers.hpp"

using namespace jset;
using jset::testing::cached_phi;

TEST_CASE("operator T on constants and monomials") {
  auto one = TruncatedSeries::monomial(1.0, 0, 8);
  auto t1 = operator_T(one);
  for (int k = 0; k <= 8; k++) CHECK(std::abs(t1.at(k) - (k == 0 ? 1.0 : 0.0)) < 1e-15);

  auto z = TruncatedSeries::monomial(1.0, 1, 8);
  auto tz = operator_T(z);
  CHECK(std::abs(tz.at(1) - 0.5) < 1e-15);
  CHECK(std::abs(tz.at(2) - 0.25) < 1e-15);
  CHECK(std::abs(tz.at(4) - 0.125) < 1e-15);
  CHECK(std::abs(tz.at(8) - 0.0625) < 1e-15);
  CHECK(std::abs(tz.at(3)) < 1e-15);
  CHECK(std::abs(tz.at(6)) < 1e-15);
}

TEST_CASE("T inverts f -> 2f - f(z^2)") {
  // f = z + z^3 at K = 8
  auto f = add(TruncatedSeries::monomial(1.0, 1, 8), TruncatedSeries::monomial(1.0, 3, 8));
  auto u = sub(scale(f, 2.0), compose_z_pow(f, 2).truncated(8));
  CHECK(sup_coeff_diff(operator_T(u), f) < 1e-15);
}

TEST_CASE("T is linear and sup-norm bounded on the disk") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Complex> ca(17), cb(17);
  for (auto& x : ca) x = Complex(u(rng), u(rng));
  for (auto& x : cb) x = Complex(u(rng), u(rng));
  TruncatedSeries fa(0, ca), fb(0, cb);
  Complex alpha(0.3, -1.2), beta(2.0, 0.5);
  auto lhs = operator_T(add(scale(fa, alpha), scale(fb, beta)));
  auto rhs = add(scale(operator_T(fa), alpha), scale(operator_T(fb), beta));
  CHECK(sup_coeff_diff(lhs, rhs) < 1e-13);

  auto tf = operator_T(fa);
  auto sup_on = [](const TruncatedSeries& s, double rho, int n) {
    double m = 0;
    for (int j = 0; j < n; j++) m = std::max(m, std::abs(s.eval(std::polar(rho, 2 * M_PI * j / n))));
    return m;
  };
  CHECK(sup_on(tf, 0.9, 256) <= 1.01 * sup_on(fa, 0.97, 1024) + 1e-12);
}

TEST_CASE("lambda=2 closed form: G is the geometric series") {
  auto res = bottcher_G(make_param(Complex(2)), 64);
  for (int k = 1; k <= 64; k++) CHECK(std::abs(res.G.at(k) - 2.0) < 1e-12);
  CHECK(res.residual < 1e-10);
}

TEST_CASE("G'(0) = lambda and the equation residual is small") {
  for (Complex lam : {Complex(0.5), Complex(0.9), Complex(0.5, 0.5), Complex(-1.25)}) {
    auto res = bottcher_G(make_param(lam), 64);
    CHECK(std::abs(res.G.at(1) - lam) < 1e-14);
    CHECK(res.residual <= 1e-10);
    CHECK(g_equation_residual(make_param(lam), res.G) <= 1e-10);
  }
}

TEST_CASE("iteration and recurrence agree where both converge") {
  for (Complex lam : {Complex(0.5), Complex(0.3, 0.2)}) {
    auto p = make_param(lam);
    BoettcherOptions it_only;
    it_only.force_iteration = true;
    BoettcherOptions rec_only;
    rec_only.force_recurrence = true;
    auto a = bottcher_G(p, 128, it_only);
    auto b = bottcher_G(p, 128, rec_only);
    CHECK(a.via_iteration);
    CHECK(!b.via_iteration);
    CHECK(sup_coeff_diff(a.G, b.G) < 1e-10);
  }
}

TEST_CASE("phi closed form at lambda=2") {
  const auto& phi = cached_phi(Complex(2), 64);
  CHECK(phi.lowest_index() == -1);
  CHECK(std::abs(phi.at(-1) - Complex(-0.5)) < 1e-12);
  CHECK(std::abs(phi.at(0) - Complex(0.5)) < 1e-12);
  for (int k = 1; k <= phi.order(); k++) CHECK(std::abs(phi.at(k)) < 1e-12);
  CHECK(std::abs(eval_phi(phi, Complex(0.5)) - Complex(-0.5)) < 1e-14);
}

TEST_CASE("leading Laurent coefficient is -1/lambda") {
  const auto& phi = cached_phi(Complex(0.9), 1 << 12);
  CHECK(std::abs(phi.at(-1) - Complex(-1.0 / 0.9)) < 1e-13);
}

TEST_CASE("K=1 truncation: equation residual starts at z^2") {
  // phi truncated to order 1, embedded exactly in a longer series
  auto p = make_param(Complex(0.9));
  const auto& phi = cached_phi(Complex(0.9), 16);
  TruncatedSeries phi1(-1, {phi.at(-1), phi.at(0), phi.at(1), 0, 0, 0, 0, 0, 0, 0});
  // R = lambda phi1 - lambda phi1^2 - phi1(z^2)
  auto sq = mul(phi1, phi1);
  auto lin = scale(phi1, p.lambda);
  auto r = sub(sub(lin, scale(sq, p.lambda)), [&] {
    // phi1(z^2): Laurent part by hand: coeff at -2 from index -1
    std::vector<Complex> c;
    TruncatedSeries out(-2, {phi.at(-1), 0, phi.at(0), 0, phi.at(1), 0, 0, 0, 0});
    return out;
  }());
  for (int k = -2; k <= 1; k++) CHECK(std::abs(r.at(k)) < 1e-13);
  CHECK(std::abs(r.at(2)) > 1e-3);  // genuinely truncated
}

TEST_CASE("conjugate symmetry for real lambda") {
  const auto& phi = cached_phi(Complex(0.9), 1 << 12);
  Complex z(0.3, 0.4);
  CHECK(std::abs(eval_phi(phi, std::conj(z)) - std::conj(eval_phi(phi, z))) < 1e-12);
}

TEST_CASE("circle evaluation matches Horner") {
  const auto& phi = cached_phi(Complex(0.9), 1 << 12);
  int n = 1 << 10;
  auto vals = eval_phi_circle(phi, 0.75, n);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 16; trial++) {
    int j = (int)(rng() % (uint64_t)n);
    Complex z = std::polar(0.75, 2 * M_PI * j / (double)n);
    CHECK(std::abs(vals[(size_t)j] - eval_phi(phi, z)) < 1e-12);
  }
}

TEST_CASE("refined evaluation is consistent across lift depths") {
  auto p = make_param(Complex(0.5));
  const auto& phi = cached_phi(Complex(0.5), 1 << 12);
  Complex z = std::polar(1 - 1e-3, 0.777);
  Complex a = eval_phi_refined(p, phi, z, 6);
  Complex b = eval_phi_refined(p, phi, z, 9);
  CHECK(std::abs(a - b) < 1e-12);
  CHECK(std::abs(a - eval_phi(phi, z)) < 1e-5);  // direct series is the cruder one
}

TEST_CASE("domain guards") {
  const auto& phi = cached_phi(Complex(2), 64);
  CHECK_THROWS_AS(eval_phi(phi, Complex(1.2)), OutOfDomain);
  CHECK_THROWS_AS(eval_phi(phi, Complex(0)), OutOfDomain);
  CHECK_THROWS_AS(eval_phi_circle(phi, 0.5, 100), DomainError);  // not a power of two
}

TEST_CASE("functional equation residual on |z| = 0.5") {
  for (Complex lam : {Complex(0.5), Complex(0.9), Complex(0, 0.5), Complex(-1.25)}) {
    const auto& phi = cached_phi(lam, 64);
    CHECK(phi_equation_residual(make_param(lam), phi, 0.5, 256) <= 1e-9);
  }
}

TEST_CASE("P' stays away from zero on the sampled boundary") {
  auto p = make_param(Complex(0.5));
  const auto& phi = cached_phi(Complex(0.5), 1 << 12);
  auto vals = eval_phi_circle(phi, 1 - 1e-3, 1 << 10);
  double mn = 1e300;
  for (const auto& v : vals) mn = std::min(mn, std::abs(deriv_P(p, v)));
  CHECK(mn > 0.1);
}
