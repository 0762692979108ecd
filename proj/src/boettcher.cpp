#include "jset/boettcher.hpp"

#include <algorithm>
#include <cmath>

namespace jset {

using std::vector;

TruncatedSeries operator_T(const TruncatedSeries& f) {
  if (f.lowest_index() < 0) throw IncompatibleIndex("operator_T: Taylor input required");
  int K = f.order();
  vector<Complex> v(K + 1, Complex(0));
  v[0] = f.at(0);  // 1/2 * sum 2^{-k} f_0 = f_0
  for (int j = 1; j <= K; j++) {
    Complex s(0);
    double wk = 0.5;
    for (int m = j; ; m /= 2) {
      s += wk * f.at(m);
      wk *= 0.5;
      if (m % 2 != 0) break;
    }
    v[j] = s;
  }
  return TruncatedSeries(0, std::move(v));
}

namespace {

// N(g) from G = lambda z (1 + lambda g) inserted into the G equation:
// g - g(z^2)/2 = z/2 + (lambda/2)[g (z - g) + z g(z^2)] + (lambda^2 z / 2) g g(z^2)
TruncatedSeries nonlinearity(const QuadParam& p, const TruncatedSeries& g) {
  int K = g.order();
  Complex lam = p.lambda;
  TruncatedSeries z = TruncatedSeries::monomial(1.0, 1, K);
  TruncatedSeries g2 = compose_z_pow(g, 2).truncated(K);
  TruncatedSeries t1 = mul(g, sub(z, g)).truncated(K);          // g(z-g)
  TruncatedSeries t2 = mul(z, g2).truncated(K);                 // z g(z^2)
  TruncatedSeries t3 = mul(z, mul(g, g2).truncated(K)).truncated(K);
  TruncatedSeries out = scale(z, 0.5);
  out = add(out, scale(add(t1, t2), lam * 0.5));
  out = add(out, scale(t3, lam * lam * 0.5));
  return out;
}

TruncatedSeries assemble_G(const QuadParam& p, const TruncatedSeries& g, int K) {
  // G = lambda z + lambda^2 z g(z)
  Complex lam = p.lambda;
  vector<Complex> v(K, Complex(0));  // indices 1..K
  v[0] = lam;
  for (int k = 2; k <= K; k++) v[k - 1] = lam * lam * g.at(k - 1);
  return TruncatedSeries(1, std::move(v));
}

TruncatedSeries recurrence_G(const QuadParam& p, int K) {
  // z^m coefficient of G^2 = lambda G(z^2)(1 + G) solves for G_{m-1}
  Complex lam = p.lambda;
  vector<Complex> G(K + 1, Complex(0));
  G[1] = lam;
  for (int m = 3; m <= K + 1; m++) {
    Complex known(0);
    for (int i = 2; i <= m - 2; i++)
      if (m - i <= K) known += G[i] * G[m - i];
    Complex rhs(0);
    if (m % 2 == 0 && m / 2 <= K) rhs += lam * G[m / 2];
    for (int i = 1; 2 * i <= m - 1; i++) {
      int j = m - 2 * i;
      if (i <= K && j <= K) rhs += lam * G[i] * G[j];
    }
    if (m - 1 <= K) G[m - 1] = (rhs - known) / (2.0 * lam);
  }
  return TruncatedSeries(1, vector<Complex>(G.begin() + 1, G.end()));
}

}  // namespace

double g_equation_residual(const QuadParam& p, const TruncatedSeries& G) {
  int K = G.order();
  TruncatedSeries lhs = mul(G, G).truncated(K);
  TruncatedSeries one = TruncatedSeries::monomial(1.0, 0, K);
  TruncatedSeries rhs =
      scale(mul(compose_z_pow(G, 2).truncated(K), add(one, G)).truncated(K), p.lambda);
  return sup_coeff_diff(lhs, rhs);
}

BoettcherResult bottcher_G(const QuadParam& p, int K, const BoettcherOptions& opt) {
  if (p.lambda == Complex(0)) throw ZeroLambda("bottcher_G");
  BoettcherResult res;
  if (!opt.force_recurrence) {
    int Kg = std::max(K - 1, 0);
    TruncatedSeries g = TruncatedSeries::zero(Kg);
    bool stationary = false;
    int it = 0;
    for (; it < opt.max_iter; it++) {
      TruncatedSeries next = scale(operator_T(nonlinearity(p, g)), 2.0);
      double change = sup_coeff_diff(next, g);
      g = std::move(next);
      if (change < opt.stop_tol) {
        stationary = true;
        break;
      }
      if (g.sup_coeff() > 1e12) break;  // diverging; use the recurrence
    }
    if (stationary) {
      TruncatedSeries G = assemble_G(p, g, K);
      double r = g_equation_residual(p, G);
      if (r <= opt.residual_tol) {
        res.G = std::move(G);
        res.residual = r;
        res.via_iteration = true;
        res.iterations = it + 1;
        return res;
      }
    }
    if (opt.force_iteration)
      throw NoConvergence("bottcher_G iteration did not reach stationarity");
  }
  res.G = recurrence_G(p, K);
  res.residual = g_equation_residual(p, res.G);
  res.via_iteration = false;
  if (res.residual > opt.residual_tol)
    throw NoConvergence("bottcher_G residual " + std::to_string(res.residual));
  return res;
}

TruncatedSeries phi_from_G(const TruncatedSeries& G) {
  return scale(reciprocal(G), Complex(-1));
}

TruncatedSeries phi_series(const QuadParam& p, int K, const BoettcherOptions& opt) {
  // reciprocal of an order-(K+2) G is exact through order K
  return phi_from_G(bottcher_G(p, K + 2, opt).G);
}

Complex eval_phi(const TruncatedSeries& phi, Complex z) {
  double r = std::abs(z);
  if (r >= 1.0 || z == Complex(0)) throw OutOfDomain("eval_phi needs 0 < |z| < 1");
  return phi.eval(z);
}

Complex eval_phi_refined(const QuadParam& p, const TruncatedSeries& phi, Complex z,
                         int lifts) {
  double r = std::abs(z);
  if (r >= 1.0 || z == Complex(0)) throw OutOfDomain("eval_phi_refined needs 0 < |z| < 1");
  vector<Complex> zs{z};
  while ((int)zs.size() - 1 < lifts && std::abs(zs.back()) > 0.8)
    zs.push_back(zs.back() * zs.back());
  Complex val = eval_phi(phi, zs.back());
  for (int j = (int)zs.size() - 2; j >= 0; j--) {
    Complex guide = eval_phi(phi, zs[j]);
    BranchPair b = inverse_branches(p, val);
    val = (std::abs(b.plus - guide) <= std::abs(b.minus - guide)) ? b.plus : b.minus;
  }
  return val;
}

std::vector<Complex> eval_phi_circle(const TruncatedSeries& phi, double rho, int n_theta) {
  if (!(rho > 0 && rho < 1)) throw OutOfDomain("eval_phi_circle needs 0 < rho < 1");
  if (!is_power_of_two((size_t)n_theta))
    throw DomainError("eval_phi_circle: n_theta must be a power of two");
  // fold rho^k phi_k into bins k mod n; v_j = sum_m A_m e^{+2 pi i j m / n}
  vector<Complex> bins(n_theta, Complex(0));
  double lrho = std::log(rho);
  for (int k = phi.lowest_index(); k <= phi.order(); k++) {
    Complex ck = phi.at(k);
    if (ck == Complex(0)) continue;
    int m = ((k % n_theta) + n_theta) % n_theta;
    bins[m] += ck * std::exp((double)k * lrho);
  }
  fft(bins, true);
  for (auto& v : bins) v *= (double)n_theta;
  return bins;
}

double phi_equation_residual(const QuadParam& p, const TruncatedSeries& phi, double rho,
                             int n_points) {
  double worst = 0;
  for (int j = 0; j < n_points; j++) {
    Complex z = std::polar(rho, 2 * M_PI * j / (double)n_points);
    worst = std::max(worst, std::abs(eval_P(p, phi.eval(z)) - phi.eval(z * z)));
  }
  return worst;
}

}  // namespace jset
