#include "jset/transseries.hpp"

#include <algorithm>
#include <cmath>

namespace jset {

using std::vector;

std::vector<Complex> conjugacy_A(const QuadParam& p, const PeriodicOrbit& orbit) {
  // expand P_N(y + L) - L by repeated squaring of the polynomial in y
  vector<Complex> a = {orbit.landing(), 1.0};
  for (int j = 0; j < orbit.N; j++) {
    vector<Complex> one_minus(a.size());
    for (size_t i = 0; i < a.size(); i++) one_minus[i] = -a[i];
    one_minus[0] += 1.0;
    vector<Complex> prod(2 * a.size() - 1, Complex(0));
    for (size_t i = 0; i < a.size(); i++) {
      if (a[i] == Complex(0)) continue;
      for (size_t k = 0; k < one_minus.size(); k++) prod[i + k] += p.lambda * a[i] * one_minus[k];
    }
    a = std::move(prod);
  }
  a[0] -= orbit.landing();
  return a;
}

Complex eval_series_poly(const std::vector<Complex>& coeffs, Complex y) {
  Complex acc(0);
  for (size_t i = coeffs.size(); i-- > 0;) acc = acc * y + coeffs[i];
  return acc;
}

namespace {

// B(y) = A(g(y)) truncated to order n, as raw coefficient vectors.
vector<Complex> compose_poly(const vector<Complex>& A, const vector<Complex>& g, int n) {
  vector<Complex> acc(n + 1, Complex(0));
  for (size_t i = A.size(); i-- > 0;) {
    // acc = acc * g + A[i], truncated at n; g(0) = 0 shifts degrees up
    vector<Complex> nxt(n + 1, Complex(0));
    for (int a = 0; a <= n; a++) {
      if (acc[a] == Complex(0)) continue;
      for (int b = 1; a + b <= n; b++) nxt[a + b] += acc[a] * g[b];
    }
    nxt[0] += A[i];
    acc = std::move(nxt);
  }
  return acc;
}

vector<Complex> normal_form_matching(const vector<Complex>& A, Complex w, int n_max) {
  vector<Complex> g(n_max + 1, Complex(0));
  g[1] = 1.0;
  for (int n = 2; n <= n_max; n++) {
    Complex denom = std::pow(w, n) - w;
    if (std::abs(denom) < 1e-12)
      throw ResonanceFailure("w^n - w ~ 0 at n = " + std::to_string(n));
    vector<Complex> B = compose_poly(A, g, n);  // g_n = 0 here, so B_n is the known part
    g[n] = B[n] / denom;
  }
  return g;
}

// g = y + y^2 g0; the conjugacy becomes
// g0(y) = a g0(a y) + a^2 (1 + a y g0(a y))^2 A0(a y + a^2 y^2 g0(a y)),  a = 1/w,
// with A0(y) = (A(y) - w y) / y^2. Contractive for |a| < 1 on small disks.
vector<Complex> normal_form_contraction(const vector<Complex>& A, Complex w, int n_max,
                                        int max_iter, double tol) {
  Complex a = 1.0 / w;
  int K = std::max(n_max - 2, 0);
  vector<Complex> A0(std::max<size_t>(A.size() >= 3 ? A.size() - 2 : 0, 1), Complex(0));
  for (size_t i = 2; i < A.size(); i++) A0[i - 2] = A[i];

  auto scale_arg = [](const vector<Complex>& f, Complex s) {
    // f(s y)
    vector<Complex> out(f.size());
    Complex pw(1);
    for (size_t i = 0; i < f.size(); i++) {
      out[i] = f[i] * pw;
      pw *= s;
    }
    return out;
  };
  auto mul_tr = [K](const vector<Complex>& x, const vector<Complex>& y) {
    vector<Complex> out(K + 1, Complex(0));
    for (int i = 0; i <= K && i < (int)x.size(); i++) {
      if (x[i] == Complex(0)) continue;
      for (int j = 0; i + j <= K && j < (int)y.size(); j++) out[i + j] += x[i] * y[j];
    }
    return out;
  };

  vector<Complex> g0(K + 1, Complex(0));
  for (int it = 0; it < max_iter; it++) {
    vector<Complex> ga = scale_arg(g0, a);  // g0(a y)
    // inner = a y + a^2 y^2 g0(a y)
    vector<Complex> inner(K + 2, Complex(0));
    inner[1] = a;
    for (int i = 0; i + 2 <= K + 1; i++) inner[i + 2] += a * a * ga[i];
    inner.resize(K + 1);
    // u = 1 + a y g0(a y)
    vector<Complex> u(K + 1, Complex(0));
    u[0] = 1.0;
    for (int i = 0; i + 1 <= K; i++) u[i + 1] += a * ga[i];
    // A0(inner) via Horner (inner has zero constant term)
    vector<Complex> acc(K + 1, Complex(0));
    for (size_t i = A0.size(); i-- > 0;) {
      vector<Complex> nxt(K + 1, Complex(0));
      for (int x = 0; x <= K; x++) {
        if (acc[x] == Complex(0)) continue;
        for (int y = 1; x + y <= K; y++) nxt[x + y] += acc[x] * inner[y];
      }
      nxt[0] += A0[i];
      acc = std::move(nxt);
    }
    vector<Complex> next = mul_tr(mul_tr(u, u), acc);
    for (auto& cv : next) cv *= a * a;
    for (int i = 0; i <= K; i++) next[i] += a * ga[i];
    double change = 0;
    for (int i = 0; i <= K; i++) change = std::max(change, std::abs(next[i] - g0[i]));
    g0 = std::move(next);
    if (change < tol) {
      vector<Complex> g(n_max + 1, Complex(0));
      g[1] = 1.0;
      for (int i = 0; i + 2 <= n_max; i++) g[i + 2] = g0[i];
      return g;
    }
  }
  throw NoConvergence("normal-form contraction did not reach stationarity");
}

}  // namespace

std::vector<Complex> normal_form_g(const std::vector<Complex>& A, Complex w, int n_max,
                                   NormalFormRoute route) {
  if (std::abs(w) <= 1.0) throw NotRepelling("normal form needs |w| > 1");
  if (route == NormalFormRoute::OrderMatching) return normal_form_matching(A, w, n_max);
  return normal_form_contraction(A, w, n_max, 4000, 1e-15);
}

std::vector<Complex> invert_series(const std::vector<Complex>& g) {
  if (g.size() < 2 || g[1] != Complex(1))
    throw IncompatibleIndex("invert_series expects g'(0) = 1");
  int n_max = (int)g.size() - 1;
  // powers of g, then solve sum_k b_k (g^k)_n = [n == 1] triangularly
  vector<vector<Complex>> pw(n_max + 1, vector<Complex>(n_max + 1, Complex(0)));
  pw[1] = g;
  for (int k = 2; k <= n_max; k++)
    for (int i = 1; i <= n_max; i++) {
      if (pw[k - 1][i] == Complex(0)) continue;
      for (int j = 1; i + j <= n_max; j++) pw[k][i + j] += pw[k - 1][i] * g[j];
    }
  vector<Complex> b(n_max + 1, Complex(0));
  b[1] = 1.0;
  for (int n = 2; n <= n_max; n++) {
    Complex s(0);
    for (int k = 1; k < n; k++) s += b[k] * pw[k][n];
    b[n] = -s;
  }
  return b;
}

double certify_inversion_radius(const std::vector<Complex>& g,
                                const std::vector<Complex>& ginv, double tol) {
  auto err_at = [&](double r) {
    double e = 0;
    for (int j = 0; j < 32; j++) {
      Complex y = std::polar(r, 2 * M_PI * j / 32.0);
      e = std::max(e, std::abs(eval_series_poly(ginv, eval_series_poly(g, y)) - y));
    }
    return e;
  };
  double r = 1.0;
  while (r > 1e-9 && err_at(r) > tol) r *= 0.5;
  if (r <= 1e-9) return 0;
  while (r < 1e9 && err_at(2 * r) <= tol) r *= 2;
  return r;
}

namespace {

// local inverse of A at 0: one backward turn of the orbit, branches pinned
// by the orbit points
Complex apply_A_inverse(const QuadParam& p, const PeriodicOrbit& orbit, Complex y) {
  Complex x = y + orbit.landing();
  for (int j = orbit.N - 1; j >= 0; j--) {
    BranchPair b = inverse_branches(p, x);
    const Complex& target = orbit.points[(size_t)j];
    x = (std::abs(b.plus - target) <= std::abs(b.minus - target)) ? b.plus : b.minus;
  }
  return x - orbit.landing();
}

}  // namespace

Complex ginv_extended(const QuadParam& p, const PeriodicOrbit& orbit,
                      const std::vector<Complex>& ginv, double conv_radius, Complex u,
                      bool* ok) {
  if (ok) *ok = true;
  Complex wj(1);
  int hops = 0;
  while (std::abs(u) > 0.5 * conv_radius && hops < 600) {
    Complex next = apply_A_inverse(p, orbit, u);
    if (std::abs(next) >= std::abs(u) && hops > 4) {
      // backward branch stopped contracting: outside the local basin
      if (ok) {
        *ok = false;
        return Complex(0);
      }
      throw OutsideInversionRadius("backward reduction left the local basin");
    }
    u = next;
    wj *= orbit.w;
    hops++;
  }
  if (std::abs(u) > 0.5 * conv_radius) {
    if (ok) {
      *ok = false;
      return Complex(0);
    }
    throw OutsideInversionRadius("backward reduction did not reach the certified disk");
  }
  return wj * eval_series_poly(ginv, u);
}

OmegaResult omega_fourier(const QuadParam& p, const TruncatedSeries& phi,
                          const PeriodicOrbit& orbit, const std::vector<Complex>& g,
                          const std::vector<Complex>& ginv, double conv_radius,
                          const OmegaOptions& opt) {
  (void)g;
  const int n = opt.grid_size;
  if (!is_power_of_two((size_t)n)) throw DomainError("omega grid_size must be a power of two");
  const double t = orbit.angle.value();
  const double M = (double)orbit.M;
  const double lnM = std::log(M);

  auto sample_u = [&](double s) {
    return eval_phi_refined(p, phi, std::polar(std::exp(-s), 2 * M_PI * t), opt.refine_lifts) -
           orbit.landing();
  };

  double s0 = opt.s0;
  if (s0 <= 0) {
    auto max_u = [&](double s0v) {
      double mx = 0;
      for (int j = 0; j < n; j += 7)
        mx = std::max(mx, std::abs(sample_u(s0v * std::pow(M, -(double)j / n))));
      mx = std::max(mx, std::abs(sample_u(s0v)));
      return mx;
    };
    // largest s0 with |phi - L| < conv/2 across the whole window
    s0 = 0.5;
    while (s0 > 1e-6 && max_u(s0) > 0.5 * conv_radius) s0 *= 0.7;
    if (max_u(s0) > 0.5 * conv_radius) {
      // weakly repelling orbit: the raw series radius would need s0 below
      // double precision; use the reduced-inversion domain instead
      auto usable = [&](double s0v) {
        for (int j = 0; j <= n; j += 5) {
          Complex u = sample_u(s0v * std::pow(M, -(double)std::min(j, n - 1) / n));
          if (std::abs(u) > 0.45 * (1.0 + std::abs(orbit.landing()))) return false;
          bool ok = false;
          ginv_extended(p, orbit, ginv, conv_radius, u, &ok);
          if (!ok) return false;
        }
        return true;
      };
      s0 = 0.5;
      while (s0 > 1e-9 && !usable(s0)) s0 *= 0.7;
      if (s0 <= 1e-9) throw OutsideInversionRadius("no admissible s0 found");
    }
  }

  vector<Complex> om(n);
  double wind = 0, prev_arg = 0;
  for (int j = 0; j < n; j++) {
    double s = s0 * std::pow(M, -(double)j / n);
    Complex u = sample_u(s);
    double arg = std::arg(u);
    if (j > 0) {
      double d = arg - prev_arg;
      while (d > M_PI) d -= 2 * M_PI;
      while (d < -M_PI) d += 2 * M_PI;
      wind += d;
    }
    prev_arg = arg;
    om[j] = std::exp(-orbit.b * std::log(s)) * ginv_extended(p, orbit, ginv, conv_radius, u);
  }
  if (std::abs(wind) > 2 * M_PI)
    throw BranchAmbiguity("phi - L winds around 0 along the sampling grid");

  // om_j = sum_k d_k e^{-2 pi i jk/n} with d_k = c_k e^{2 pi i k ln s0 / ln M}
  OmegaResult out;
  out.k_max = opt.k_max;
  out.s0 = s0;
  out.c.assign(2 * opt.k_max + 1, Complex(0));
  for (int k = -opt.k_max; k <= opt.k_max; k++) {
    Complex s(0);
    for (int j = 0; j < n; j++) s += om[j] * std::polar(1.0, 2 * M_PI * j * k / (double)n);
    s /= (double)n;
    out.c[(size_t)(k + opt.k_max)] = s * std::polar(1.0, -2 * M_PI * k * std::log(s0) / lnM);
  }
  return out;
}

namespace {

// Truncated Fourier sum. Off the real axis the k-th mode is amplified by
// e^{2 pi |k Im ln s| / ln M}; modes below the extraction noise floor are
// dropped so the amplification acts only on genuine coefficients.
Complex eval_omega(const TransseriesModel& m, Complex ln_s) {
  const double lnM = std::log((double)m.orbit.M);
  const double floor = 1e-11 * std::abs(m.c(0));
  Complex acc = m.c(0);
  for (int k = -m.k_max; k <= m.k_max; k++) {
    if (k == 0) continue;
    if (std::abs(m.c(k)) < floor) continue;
    acc += m.c(k) * std::exp(Complex(0, 2 * M_PI * k) * ln_s / lnM);
  }
  return acc;
}

}  // namespace

double TransseriesModel::omega_stddev() const {
  const int n = 256;
  const double lnM = std::log((double)orbit.M);
  vector<double> vals(n);
  double mean = 0;
  for (int j = 0; j < n; j++) {
    vals[j] = std::abs(eval_omega(*this, Complex(lnM * j / n, 0)));
    mean += vals[j];
  }
  mean /= n;
  double var = 0;
  for (double v : vals) var += (v - mean) * (v - mean);
  return std::sqrt(var / n);
}

TransseriesModel build_model(const QuadParam& p, const ExternalAngle& angle,
                             const TruncatedSeries& phi, const ModelOptions& opt) {
  if (angle.m != 0)
    throw DomainError("build_model expects an odd-denominator angle; see dyadic_model");
  TransseriesModel m;
  m.param = p;
  m.orbit = landing_point(p, angle, phi);
  m.A_coeffs = conjugacy_A(p, m.orbit);
  m.g_coeffs = normal_form_g(m.A_coeffs, m.orbit.w, opt.n_max);
  m.ginv_coeffs = invert_series(m.g_coeffs);
  m.conv_radius_est = certify_inversion_radius(m.g_coeffs, m.ginv_coeffs);
  if (m.conv_radius_est <= 0) throw NoConvergence("empty certified inversion radius");
  m.residual_ginv = 0;
  {
    for (int j = 0; j < 32; j++) {
      Complex y = std::polar(m.conv_radius_est, 2 * M_PI * j / 32.0);
      m.residual_ginv = std::max(
          m.residual_ginv,
          std::abs(eval_series_poly(m.ginv_coeffs, eval_series_poly(m.g_coeffs, y)) - y));
    }
  }
  OmegaResult om = omega_fourier(p, phi, m.orbit, m.g_coeffs, m.ginv_coeffs,
                                 m.conv_radius_est, opt.omega);
  m.fourier = om.c;
  m.k_max = om.k_max;
  m.s0 = om.s0;
  m.residual_conjugacy = model_conjugacy_residual(m, m.conv_radius_est / 2);
  m.residual_periodicity = model_periodicity_residual(p, phi, m);
  if (opt.verify) {
    if (m.residual_conjugacy > opt.conjugacy_tol)
      throw InvariantViolation("conjugacy residual " + std::to_string(m.residual_conjugacy));
    if (m.residual_periodicity > opt.periodicity_tol)
      throw InvariantViolation("omega periodicity residual " +
                               std::to_string(m.residual_periodicity));
  }
  return m;
}

Complex eval_model(const TransseriesModel& m, Complex s) {
  if (s == Complex(0)) return m.orbit.landing();
  if (s.real() < 0) throw DomainError("eval_model needs Re s >= 0");
  Complex ln_s = std::log(s);
  Complex y = std::exp(m.orbit.b * ln_s) * eval_omega(m, ln_s);
  // reduce into the certified disk through g(y) = A(g(y/w))
  int hops = 0;
  double safe = 0.5 * m.conv_radius_est;
  while (std::abs(y) > safe && hops < 64) {
    y /= m.orbit.w;
    hops++;
  }
  Complex v = eval_series_poly(m.g_coeffs, y);
  for (int i = 0; i < hops; i++) v = eval_series_poly(m.A_coeffs, v);
  return m.orbit.landing() + v;
}

Complex CoefficientTable::at(int n, int k) const {
  if (n < 1 || n > n_max) return Complex(0);
  const auto& row = rows[(size_t)n - 1];
  int idx = k + n * k_max;
  if (idx < 0 || idx >= (int)row.size()) return Complex(0);
  return row[(size_t)idx];
}

CoefficientTable coefficient_table(const TransseriesModel& m, int n_max, int k_max) {
  if (k_max > m.k_max) throw DomainError("coefficient_table: k_max exceeds the model's modes");
  CoefficientTable t;
  t.n_max = n_max;
  t.k_max = k_max;
  t.rows.resize(n_max);
  vector<Complex> base(2 * k_max + 1);
  for (int k = -k_max; k <= k_max; k++) base[(size_t)(k + k_max)] = m.c(k);
  vector<Complex> conv = base;  // c^{*1}
  for (int n = 1; n <= n_max; n++) {
    Complex an = (n < (int)m.g_coeffs.size()) ? m.g_coeffs[n] : Complex(0);
    t.rows[n - 1].resize(conv.size());
    for (size_t i = 0; i < conv.size(); i++) t.rows[n - 1][i] = an * conv[i];
    if (n < n_max) {
      // conv(c^{*n}, c) -> support |k| <= (n+1) k_max
      vector<Complex> nxt(conv.size() + 2 * k_max, Complex(0));
      for (size_t i = 0; i < conv.size(); i++) {
        if (conv[i] == Complex(0)) continue;
        for (size_t j = 0; j < base.size(); j++) nxt[i + j] += conv[i] * base[j];
      }
      conv = std::move(nxt);
    }
  }
  return t;
}

Complex eval_table(const TransseriesModel& m, const CoefficientTable& t, Complex s) {
  if (s == Complex(0)) return m.orbit.landing();
  const double lnM = std::log((double)m.orbit.M);
  Complex ln_s = std::log(s);
  Complex acc = m.orbit.landing();
  for (int n = 1; n <= t.n_max; n++) {
    Complex row(0);
    for (int k = -n * t.k_max; k <= n * t.k_max; k++) {
      Complex a = t.at(n, k);
      if (a == Complex(0)) continue;
      row += a * std::exp(((double)n * m.orbit.b + Complex(0, 2 * M_PI * k) / lnM) * ln_s);
    }
    acc += row;
  }
  return acc;
}

DyadicEvaluator::DyadicEvaluator(const QuadParam& p, const ExternalAngle& t,
                                 const TransseriesModel& base, const TruncatedSeries& phi)
    : param_(p), base_(base), m_(t.m) {
  if (t.m == 0) throw DomainError("dyadic evaluator expects m > 0");
  // the base model must live at the odd part of the angle orbit
  AngleOrbit orbit = angle_orbit(t);
  const ExternalAngle& odd = orbit.orbit[(size_t)t.m];
  if (!(base.orbit.angle == odd))
    throw DomainError("base model angle is not the odd part of t");
  // lift the landing point of the odd angle back along the angle tail:
  // points x_j with P(x_j) = x_{j+1}, x_m = L_{t'}; branch chosen by the
  // series estimate of the intermediate angle
  lift_points_.assign((size_t)t.m + 1, Complex(0));
  lift_points_[(size_t)t.m] = base.orbit.landing();
  for (int j = t.m - 1; j >= 0; j--) {
    const ExternalAngle& aj = orbit.orbit[(size_t)j];
    Complex guide =
        eval_phi_refined(p, phi, std::polar(1 - 1e-6, 2 * M_PI * aj.value()), 12);
    BranchPair b = inverse_branches(p, lift_points_[(size_t)j + 1]);
    lift_points_[(size_t)j] =
        (std::abs(b.plus - guide) <= std::abs(b.minus - guide)) ? b.plus : b.minus;
    if (std::abs(lift_points_[(size_t)j] - guide) > 1e-2 * (1.0 + std::abs(guide)))
      throw BranchSelectionFailure("no inverse-branch address reproduces phi near angle " +
                                   std::to_string(aj.p) + "/" + std::to_string(aj.q));
  }
  L_ = lift_points_[0];
}

Complex DyadicEvaluator::operator()(Complex sigma) const {
  if (sigma == Complex(0)) return L_;
  Complex sp = std::pow(2.0, m_) * sigma;  // s' at the odd-part angle
  Complex val = eval_model(base_, sp);
  for (int j = m_ - 1; j >= 0; j--) {
    BranchPair b = inverse_branches(param_, val);
    val = (std::abs(b.plus - lift_points_[(size_t)j]) <=
           std::abs(b.minus - lift_points_[(size_t)j]))
              ? b.plus
              : b.minus;
  }
  return val;
}

Complex DyadicEvaluator::deriv_Pm_at_landing() const {
  Complex d(1);
  for (int j = 0; j < m_; j++) d *= deriv_P(param_, lift_points_[(size_t)j]);
  return d;
}

double model_conjugacy_residual(const TransseriesModel& m, double r, int n_points) {
  double worst = 0;
  for (int j = 0; j < n_points; j++) {
    Complex y = std::polar(r, 2 * M_PI * j / (double)n_points);
    Complex lhs = eval_series_poly(m.g_coeffs, m.orbit.w * y);
    Complex rhs = eval_series_poly(m.A_coeffs, eval_series_poly(m.g_coeffs, y));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double model_periodicity_residual(const QuadParam& p, const TruncatedSeries& phi,
                                  const TransseriesModel& m, int n_points) {
  // H(M s) = w H(s), H = g^{-1}(phi - L); s in [s0/M^2, s0/M) keeps both
  // arguments inside the certified sampling window
  const double t = m.orbit.angle.value();
  const double M = (double)m.orbit.M;
  double worst = 0;
  for (int i = 0; i < n_points; i++) {
    double s = (m.s0 / (M * M)) * std::pow(M, (double)i / n_points);
    Complex u1 = eval_phi_refined(p, phi, std::polar(std::exp(-M * s), 2 * M_PI * t), 24) -
                 m.orbit.landing();
    Complex u2 = eval_phi_refined(p, phi, std::polar(std::exp(-s), 2 * M_PI * t), 24) -
                 m.orbit.landing();
    Complex H1 = ginv_extended(m.param, m.orbit, m.ginv_coeffs, m.conv_radius_est, u1);
    Complex H2 = ginv_extended(m.param, m.orbit, m.ginv_coeffs, m.conv_radius_est, u2);
    if (std::abs(H1) == 0) continue;
    worst = std::max(worst, std::abs(H1 - m.orbit.w * H2) / std::abs(H1));
  }
  return worst;
}

double model_self_similarity_residual(const TransseriesModel& m, int n_points) {
  const double M = (double)m.orbit.M;
  double worst = 0;
  for (int i = 0; i < n_points; i++) {
    double s = (m.s0 / (M * M)) * std::pow(M, (double)i / n_points);
    Complex H1 = ginv_extended(m.param, m.orbit, m.ginv_coeffs, m.conv_radius_est,
                               eval_model(m, M * s) - m.orbit.landing());
    Complex H2 = ginv_extended(m.param, m.orbit, m.ginv_coeffs, m.conv_radius_est,
                               eval_model(m, Complex(s, 0)) - m.orbit.landing());
    if (std::abs(H1) == 0) continue;
    worst = std::max(worst, std::abs(H1 - m.orbit.w * H2) / std::abs(H1));
  }
  return worst;
}

}  // namespace jset
