#include <doctest.h>

#include <cmath>

#include "jset/transseries.hpp"
#include "test_helpers.hpp"

using namespace jset;
using jset::testing::cached_phi;

namespace {

// Lagrange inversion: b_n = (1/n) [y^{n-1}] (y / g(y))^n
std::vector<Complex> lagrange_inverse(const std::vector<Complex>& g, int n_max) {
  std::vector<Complex> out((size_t)n_max + 1, Complex(0));
  out[1] = 1.0;
  // h = y/g(y) as a Taylor series (g_1 = 1)
  std::vector<Complex> h((size_t)n_max + 1, Complex(0));
  {
    // reciprocal of u(y) = g(y)/y = 1 + g_2 y + ...
    std::vector<Complex> u((size_t)n_max + 1, Complex(0));
    for (int i = 0; i <= n_max; i++) u[(size_t)i] = (i + 1 < (int)g.size()) ? g[(size_t)i + 1] : Complex(0);
    h[0] = 1.0;
    for (int m = 1; m <= n_max; m++) {
      Complex s(0);
      for (int j = 1; j <= m; j++) s += u[(size_t)j] * h[(size_t)(m - j)];
      h[(size_t)m] = -s;
    }
  }
  for (int n = 2; n <= n_max; n++) {
    // (h)^n coefficient at y^{n-1}
    std::vector<Complex> pw((size_t)n_max + 1, Complex(0));
    pw[0] = 1.0;
    for (int rep = 0; rep < n; rep++) {
      std::vector<Complex> nx((size_t)n_max + 1, Complex(0));
      for (int i = 0; i <= n_max; i++) {
        if (pw[(size_t)i] == Complex(0)) continue;
        for (int j = 0; i + j <= n_max; j++) nx[(size_t)(i + j)] += pw[(size_t)i] * h[(size_t)j];
      }
      pw = std::move(nx);
    }
    out[(size_t)n] = pw[(size_t)(n - 1)] / (double)n;
  }
  return out;
}

TransseriesModel model05_t0() {
  return build_model(make_param(Complex(0.5)), ExternalAngle::make(0, 1),
                     cached_phi(Complex(0.5), 1 << 13));
}

TransseriesModel model09_t13() {
  return build_model(make_param(Complex(0.9)), ExternalAngle::make(1, 3),
                     cached_phi(Complex(0.9), 1 << 13));
}

TransseriesModel model2_t0() {
  return build_model(make_param(Complex(2)), ExternalAngle::make(0, 1),
                     cached_phi(Complex(2), 256));
}

}  // namespace

TEST_CASE("conjugated return map A") {
  auto p2 = make_param(Complex(2));
  auto orb = landing_point(p2, ExternalAngle::make(0, 1), cached_phi(Complex(2), 64));
  auto A = conjugacy_A(p2, orb);
  REQUIRE(A.size() == 3);
  CHECK(std::abs(A[0]) < 1e-10);
  CHECK(std::abs(A[1] - 2.0) < 1e-12);
  CHECK(std::abs(A[2] + 2.0) < 1e-12);

  auto p9 = make_param(Complex(0.9));
  auto orb9 = landing_point(p9, ExternalAngle::make(1, 3), cached_phi(Complex(0.9), 1 << 12));
  auto A9 = conjugacy_A(p9, orb9);
  CHECK(std::abs(A9[0]) < 1e-10);
  CHECK(std::abs(A9[1] - deriv_Pn(p9, orb9.landing(), 2)) < 1e-9);
  CHECK(std::abs(A9[1]) > 1.0);
}

TEST_CASE("normal form rejects non-repelling multipliers") {
  std::vector<Complex> A = {0.0, 0.9, 1.0};
  CHECK_THROWS_AS(normal_form_g(A, Complex(0.9), 8), NotRepelling);
}

TEST_CASE("normal form: linear map gives the identity") {
  std::vector<Complex> A = {0.0, Complex(3.0, 1.0)};
  auto g = normal_form_g(A, Complex(3.0, 1.0), 16);
  CHECK(g[1] == Complex(1));
  for (int n = 2; n <= 16; n++) CHECK(std::abs(g[(size_t)n]) < 1e-15);
}

TEST_CASE("normal form: quadratic example a_2 = 1/(w^2 - w)") {
  std::vector<Complex> A = {0.0, 4.0, 1.0};  // A = 4y + y^2
  auto g = normal_form_g(A, Complex(4.0), 8);
  CHECK(std::abs(g[2] - Complex(1.0 / 12)) < 1e-14);
}

TEST_CASE("normal form routes agree") {
  std::vector<Complex> A = {0.0, 4.0, 1.0};
  auto a = normal_form_g(A, Complex(4.0), 24, NormalFormRoute::OrderMatching);
  auto b = normal_form_g(A, Complex(4.0), 24, NormalFormRoute::Contraction);
  for (size_t i = 0; i < a.size(); i++) CHECK(std::abs(a[i] - b[i]) < 1e-12);

  auto p = make_param(Complex(0.5));
  auto orb = landing_point(p, ExternalAngle::make(0, 1), cached_phi(Complex(0.5), 1 << 12));
  auto Am = conjugacy_A(p, orb);
  auto am = normal_form_g(Am, orb.w, 32, NormalFormRoute::OrderMatching);
  auto bm = normal_form_g(Am, orb.w, 32, NormalFormRoute::Contraction);
  for (size_t i = 0; i < am.size(); i++) CHECK(std::abs(am[i] - bm[i]) < 1e-11);
}

TEST_CASE("normal form residual at r = 0.1 for lambda=0.9, t=0") {
  auto p = make_param(Complex(0.9));
  auto orb = landing_point(p, ExternalAngle::make(0, 1), cached_phi(Complex(0.9), 1 << 12));
  auto A = conjugacy_A(p, orb);
  auto g = normal_form_g(A, orb.w, 64);
  double worst = 0;
  for (int j = 0; j < 64; j++) {
    Complex y = std::polar(0.1, 2 * M_PI * j / 64.0);
    worst = std::max(worst,
                     std::abs(eval_series_poly(g, orb.w * y) -
                              eval_series_poly(A, eval_series_poly(g, y))));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("series inversion") {
  std::vector<Complex> id = {0.0, 1.0};
  auto idinv = invert_series(id);
  CHECK(idinv[1] == Complex(1));

  std::vector<Complex> g = {0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0};  // y + y^2
  auto gi = invert_series(g);
  auto oracle = lagrange_inverse(g, 6);
  for (int n = 1; n <= 6; n++) CHECK(std::abs(gi[(size_t)n] - oracle[(size_t)n]) < 1e-12);
  // catalan pattern 1, -1, 2, -5, 14
  CHECK(std::abs(gi[2] + 1.0) < 1e-14);
  CHECK(std::abs(gi[3] - 2.0) < 1e-14);
  CHECK(std::abs(gi[4] + 5.0) < 1e-14);

  // composition is the identity to high order
  auto m = model05_t0();
  for (int j = 0; j < 16; j++) {
    Complex y = std::polar(m.conv_radius_est / 2, 2 * M_PI * j / 16.0);
    CHECK(std::abs(eval_series_poly(m.ginv_coeffs, eval_series_poly(m.g_coeffs, y)) - y) <
          1e-12);
  }
}

TEST_CASE("omega is constant for lambda=2") {
  auto m = model2_t0();
  CHECK(std::abs(m.c(0) - Complex(-0.5)) < 1e-10);
  for (int k = 1; k <= m.k_max; k++) {
    CHECK(std::abs(m.c(k)) < 1e-10);
    CHECK(std::abs(m.c(-k)) < 1e-10);
  }
  CHECK(m.omega_stddev() < 1e-10);
}

TEST_CASE("omega modes for lambda=0.9, t=1/3") {
  auto m = model09_t13();
  CHECK(std::abs(m.c(1) / m.c(0)) <= 1e-4);
  CHECK(m.omega_stddev() > 1e-12);
}

TEST_CASE("fourier coefficients are window-invariant") {
  auto p = make_param(Complex(0.9));
  const auto& phi = cached_phi(Complex(0.9), 1 << 13);
  auto orb = landing_point(p, ExternalAngle::make(1, 3), phi);
  auto A = conjugacy_A(p, orb);
  auto g = normal_form_g(A, orb.w, 64);
  auto gi = invert_series(g);
  double r = certify_inversion_radius(g, gi);
  OmegaOptions o1;
  auto a = omega_fourier(p, phi, orb, g, gi, r, o1);
  OmegaOptions o2;
  o2.s0 = a.s0 / (double)orb.M;  // shift the window one full period
  auto b = omega_fourier(p, phi, orb, g, gi, r, o2);
  for (int k = -2; k <= 2; k++) {
    Complex ca = a.c[(size_t)(k + a.k_max)], cb = b.c[(size_t)(k + b.k_max)];
    CHECK(std::abs(ca - cb) <= 1e-6 * std::abs(a.c[(size_t)a.k_max]));
  }
}

TEST_CASE("fourier decay at the strip rate") {
  // analyticity in |Im zeta| < pi/2 gives |c_k| <~ C e^{-pi^2 |k| / ln M}
  auto m = model09_t13();
  double lnM = std::log((double)m.orbit.M);
  double d = std::exp(-M_PI * M_PI / lnM);
  for (int k = 1; k <= 3; k++) {
    CHECK(std::abs(m.c(k)) <= 1e3 * std::pow(d, k));
    CHECK(std::abs(m.c(-k)) <= 1e3 * std::pow(d, k));
  }
}

TEST_CASE("built models verify their invariants") {
  for (auto m : {model05_t0(), model09_t13()}) {
    CHECK(m.residual_conjugacy <= 1e-9);
    CHECK(m.residual_periodicity <= 1e-6);
    CHECK(model_self_similarity_residual(m) <= 1e-8);
    CHECK(m.orbit.b.real() >= 0);
  }
}

TEST_CASE("model exponents at known parameters") {
  auto m5 = model05_t0();
  CHECK(std::abs(m5.orbit.b - std::log2(1.5)) < 1e-11);
  auto m9 = model09_t13();
  Complex w_exact = 4.0 * (make_param(Complex(0.9)).c + 1.0);
  CHECK(std::abs(m9.orbit.b - std::log(w_exact) / (2 * std::log(2.0))) < 1e-10);
}

TEST_CASE("eval_model limits and closed form") {
  auto m2 = model2_t0();
  CHECK(std::abs(eval_model(m2, Complex(1e-12, 0)) - m2.orbit.landing()) < 1e-10);
  // exact local model: L + g(s^b omega) = -(e^{0.1} - 1)/2 at s = 0.1
  double want = -(std::exp(0.1) - 1.0) / 2.0;
  CHECK(std::abs(eval_model(m2, Complex(0.1, 0)) - want) < 1e-10);
  CHECK_THROWS_AS(eval_model(m2, Complex(-0.1, 0)), DomainError);
}

TEST_CASE("model tracks phi near the landing point") {
  auto m = model09_t13();
  auto p = make_param(Complex(0.9));
  const auto& phi = cached_phi(Complex(0.9), 1 << 13);
  double s = 1e-3;
  Complex z = std::polar(std::exp(-s), 2 * M_PI / 3.0);
  CHECK(std::abs(eval_model(m, Complex(s, 0)) - eval_phi_refined(p, phi, z, 12)) <= 1e-6);
}

TEST_CASE("coefficient table") {
  auto m = model09_t13();
  auto t = coefficient_table(m, 24, 4);
  for (int k = -4; k <= 4; k++) CHECK(std::abs(t.at(1, k) - m.c(k)) < 1e-15);

  auto m2 = model2_t0();
  auto t2 = coefficient_table(m2, 16, 2);
  for (int n = 1; n <= 8; n++) {
    Complex want = m2.g_coeffs[(size_t)n] * std::pow(Complex(-0.5), n);
    CHECK(std::abs(t2.at(n, 0) - want) < 1e-9);
    CHECK(std::abs(t2.at(n, 1)) < 1e-9);
  }

  // row-sum evaluation against eval_model
  Complex s(1e-3, 0);
  auto tt = coefficient_table(m, 40, m.k_max);
  CHECK(std::abs(eval_table(m, tt, s) - eval_model(m, s)) <= 1e-8);
}

TEST_CASE("dyadic evaluator at t = 1/2") {
  auto p = make_param(Complex(0.5));
  const auto& phi = cached_phi(Complex(0.5), 1 << 13);
  auto base = model05_t0();
  DyadicEvaluator ev(p, ExternalAngle::make(1, 2), base, phi);
  // P(L_{1/2}) = L_0 = -1 and L_{1/2} != L_0: the landing is at x = 2
  CHECK(std::abs(ev.landing() - Complex(2.0)) < 1e-9);
  // approach at the local power law |sigma|^{Re b}
  CHECK(std::abs(ev(Complex(1e-13, 0)) - ev.landing()) < 1e-6);
  CHECK(std::abs(ev(Complex(1e-13, 0)) - ev.landing()) <
        std::abs(ev(Complex(1e-7, 0)) - ev.landing()));

  // leading-order ratio (phi - L_t) P_m'(L_t) / g(s'^b omega) -> 1
  Complex Pm = ev.deriv_Pm_at_landing();
  for (double sigma : {1e-4, 1e-6}) {
    Complex sp = 2.0 * sigma;
    Complex ln_sp = std::log(sp);
    Complex y = std::exp(base.orbit.b * ln_sp);
    Complex om(0);
    for (int k = -base.k_max; k <= base.k_max; k++)
      om += base.c(k) * std::exp(Complex(0, 2 * M_PI * k) * ln_sp / std::log(2.0));
    Complex lead = eval_series_poly(base.g_coeffs, y * om);
    Complex ratio = (ev(Complex(sigma, 0)) - ev.landing()) * Pm / lead;
    CHECK(std::abs(ratio - 1.0) < (sigma == 1e-4 ? 2e-2 : 2e-4));
  }

  // validation against the series oracle at z = e^{i pi} e^{-1e-3}
  Complex z = std::polar(std::exp(-1e-3), M_PI);
  CHECK(std::abs(ev(Complex(1e-3, 0)) - eval_phi_refined(p, phi, z, 12)) <= 1e-5);
}

TEST_CASE("dyadic evaluator rejects a mismatched base") {
  auto p = make_param(Complex(0.5));
  const auto& phi = cached_phi(Complex(0.5), 1 << 13);
  auto base = model05_t0();  // angle 0
  CHECK_THROWS_AS(DyadicEvaluator(p, ExternalAngle::make(1, 6), base, phi), DomainError);
}
