#include "jset/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "jset/boettcher.hpp"
#include "jset/parallel.hpp"

namespace jset {

using std::vector;

BetaEResult beta_E(const QuadParam& p, const TruncatedSeries& phi, int n_theta,
                   const std::vector<double>& rho_schedule, int threads) {
  if (n_theta < (1 << 10)) throw DomainError("beta_E: n_theta >= 2^10");
  if (rho_schedule.size() < 2) throw DomainError("beta_E: need at least two radii");
  BetaEResult out;

  vector<double> log_rhos;
  double winding_last = 0, im_last = 0;
  for (double rho : rho_schedule) {
    auto vals = eval_phi_circle(phi, rho, n_theta);
    vector<double> re((size_t)n_theta);
    vector<double> args((size_t)n_theta);
    vector<char> vanished((size_t)n_theta, 0);
    parallel_for(n_theta, threads, [&](int64_t lo, int64_t hi) {
      for (int64_t j = lo; j < hi; j++) {
        Complex d = deriv_P(p, vals[(size_t)j]);
        double a = std::abs(d);
        if (a < 1e-8) {
          vanished[(size_t)j] = 1;
          continue;
        }
        re[(size_t)j] = std::log2(a);
        args[(size_t)j] = std::arg(d);
      }
    });
    for (char v : vanished)
      if (v) throw DerivativeVanishes("P'(phi) ~ 0 on the sampling circle");
    out.per_rho.push_back(pairwise_sum(re) / n_theta);
    log_rhos.push_back(std::log(rho));
    // continuous unwrap: im average and winding of arg P'(phi)
    double prev = args[0], total = 0, acc = args[0];
    for (int j = 1; j < n_theta; j++) {
      double d = args[(size_t)j] - prev;
      while (d > M_PI) d -= 2 * M_PI;
      while (d < -M_PI) d += 2 * M_PI;
      prev = args[(size_t)j];
      total += d;
      acc += args[0] + total;
    }
    {
      double dend = args[0] - prev;
      while (dend > M_PI) dend -= 2 * M_PI;
      while (dend < -M_PI) dend += 2 * M_PI;
      total += dend;
    }
    winding_last = total / (2 * M_PI);
    im_last = acc / n_theta / std::log(2.0);
  }
  out.winding = (int)std::lround(winding_last);
  out.im_mod_winding = im_last;

  // affine fit value = beta_E + C ln(rho); exact for the harmonic mean value
  size_t m = rho_schedule.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; i++) {
    sx += log_rhos[i];
    sy += out.per_rho[i];
    sxx += log_rhos[i] * log_rhos[i];
    sxy += log_rhos[i] * out.per_rho[i];
  }
  double denom = m * sxx - sx * sx;
  double slope = (m * sxy - sx * sy) / denom;
  out.beta_E = (sy - slope * sx) / m;
  out.extrapolation_span = std::abs(out.per_rho.back() - out.beta_E);
  return out;
}

double dh_lower_bound(double beta_E_value) {
  if (beta_E_value <= 0) throw DomainError("dh_lower_bound: beta_E > 0 required");
  if (beta_E_value < 0.5 - 1e-6)
    throw InvariantViolation("beta_E < 1/2 contradicts D_H <= 2");
  return 1.0 / beta_E_value;
}

double ruelle_An(const std::vector<PeriodicOrbit>& orbits, int n, double D) {
  vector<double> terms;
  for (const auto& orb : orbits) {
    // |P_n'| is constant along the orbit; each of its points contributes
    double a = std::pow(std::abs(orb.w), (double)n / orb.N);
    for (size_t i = 0; i < orb.points.size(); i++) terms.push_back(std::pow(a, -D));
  }
  return pairwise_sum(terms);
}

double ruelle_dimension(const std::vector<PeriodicOrbit>& orbits, int n) {
  if (orbits.empty()) throw NoBracket("no periodic points supplied");
  double a0 = ruelle_An(orbits, n, 0.0), a2 = ruelle_An(orbits, n, 2.0);
  if (a0 <= 1.0 || a2 >= 1.0)
    throw NoBracket("A_n(0) = " + std::to_string(a0) + ", A_n(2) = " + std::to_string(a2));
  double lo = 0, hi = 2;
  // A_n strictly decreasing in D (all |P_n'| > 1)
  while (hi - lo > 1e-10) {
    double mid = (lo + hi) / 2;
    (ruelle_An(orbits, n, mid) > 1.0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

ExponentDistribution exponent_distribution(const std::vector<PeriodicOrbit>& orbits, int n) {
  ExponentDistribution d;
  d.n = n;
  for (const auto& orb : orbits) {
    double beta = std::log2(std::abs(orb.w)) / orb.N;  // = log2|P_n'|/n
    for (size_t i = 0; i < orb.points.size(); i++) d.betas.push_back(beta);
  }
  std::sort(d.betas.begin(), d.betas.end());
  d.beta_M = d.betas.empty() ? 0 : d.betas.back();
  return d;
}

double ExponentDistribution::mu(double beta) const {
  auto it = std::upper_bound(betas.begin(), betas.end(), beta);
  return (double)(it - betas.begin()) / (double)betas.size();
}

double ExponentDistribution::F(double beta) const { return std::pow(mu(beta), 1.0 / n); }

double ExponentDistribution::Phi(double beta) const {
  double m = mu(beta);
  if (m <= 0) return std::numeric_limits<double>::infinity();
  return -std::log2(m) / n;
}

double legendre_check(const ExponentDistribution& dist, double D) {
  double best = -std::numeric_limits<double>::infinity();
  for (double s = 0; s <= dist.beta_M + 0.1 + 1e-12; s += 1e-3) {
    double Phi = dist.Phi(s + 1e-12);  // right-continuous
    if (!std::isfinite(Phi)) continue;
    best = std::max(best, -D * s - Phi);
  }
  return best;
}

NormalityResult normality_classify(const std::vector<uint8_t>& bits, int m, double epsilon) {
  if (m < 1) throw DomainError("normality: m >= 1");
  if (bits.empty() || bits.size() % (size_t)m != 0)
    throw DomainError("normality: bit length must be a positive multiple of m");
  const int L = (int)bits.size();
  const int N = L / m;
  const int Q = 1 << m;
  NormalityResult out;
  out.is_normal = true;
  for (int shift = 0; shift <= m; shift++) {
    vector<double> freq((size_t)Q, 0.0);
    for (int b = 0; b < N; b++) {
      int v = 0;
      for (int k = 0; k < m; k++) v = (v << 1) | bits[(size_t)((shift + b * m + k) % L)];
      freq[(size_t)v] += 1.0 / N;
    }
    for (int q = 0; q < Q; q++)
      if (std::abs(freq[(size_t)q] - 1.0 / Q) > epsilon / Q + 1e-12) out.is_normal = false;
    out.frequencies.push_back(std::move(freq));
  }
  return out;
}

double hoeffding_bound(int N, int m, double epsilon) {
  if (N < 1 || m < 1 || epsilon <= 0) throw DomainError("hoeffding_bound: N, m >= 1, eps > 0");
  double Q = std::pow(2.0, m);
  return 2.0 * Q * m * std::exp(-2.0 * N * epsilon * epsilon / (Q * Q));
}

namespace {

uint64_t count_nonnormal_m1(int N, double epsilon) {
  // frequency of ones is shift-invariant on cyclic strings
  uint64_t bad = 0;
  long double binom = 1;  // C(N,0)
  for (int k = 0; k <= N; k++) {
    if (std::abs((double)k / N - 0.5) > epsilon / 2 + 1e-12) bad += (uint64_t)(binom + 0.5L);
    binom = binom * (N - k) / (k + 1);
  }
  return bad;
}

// Transfer DP over 2-bit blocks B_i = (a_i, b_i): shift-0 counts are block
// type counts; shift-1 counts follow from (ones of b), (ones of a) and the
// joint count of (b_i, a_{i+1}) = (1,1), tracked exactly.
uint64_t count_nonnormal_m2(int N, double epsilon) {
  auto violates = [&](const int c[4]) {
    for (int q = 0; q < 4; q++)
      if (std::abs((double)c[q] / N - 0.25) > epsilon / 4 + 1e-12) return true;
    return false;
  };
  const uint64_t W = (uint64_t)N + 1;
  auto pack = [&](int n00, int n01, int n10, int t11, int lb) {
    return ((((uint64_t)n00 * W + n01) * W + n10) * W + t11) * 2 + lb;
  };
  uint64_t bad = 0;
  for (int B1 = 0; B1 < 4; B1++) {
    int a1 = (B1 >> 1) & 1, b1 = B1 & 1;
    std::unordered_map<uint64_t, uint64_t> cur;
    {
      int n[4] = {0, 0, 0, 0};
      n[B1] = 1;
      cur[pack(n[0], n[1], n[2], 0, b1)] = 1;
    }
    for (int i = 2; i <= N; i++) {
      std::unordered_map<uint64_t, uint64_t> nxt;
      nxt.reserve(cur.size() * 2);
      for (const auto& [key, cnt] : cur) {
        int lb = (int)(key & 1);
        uint64_t r = key >> 1;
        int t11 = (int)(r % W); r /= W;
        int n10 = (int)(r % W); r /= W;
        int n01 = (int)(r % W); r /= W;
        int n00 = (int)r;
        for (int B = 0; B < 4; B++) {
          int a = (B >> 1) & 1, b = B & 1;
          int nn[3] = {n00, n01, n10};
          if (B < 3) nn[B]++;
          nxt[pack(nn[0], nn[1], nn[2], t11 + (lb & a), b)] += cnt;
        }
      }
      cur.swap(nxt);
    }
    for (const auto& [key, cnt] : cur) {
      int lb = (int)(key & 1);
      uint64_t r = key >> 1;
      int t11 = (int)(r % W); r /= W;
      int n10 = (int)(r % W); r /= W;
      int n01 = (int)(r % W); r /= W;
      int n00 = (int)r;
      int n11 = N - n00 - n01 - n10;
      int T11 = t11 + (lb & a1);  // closing block (b_N, a_1)
      int ones_b = n01 + n11, ones_a = n10 + n11;
      int s1[4] = {N - (ones_b + ones_a - T11), ones_a - T11, ones_b - T11, T11};
      int s0[4] = {n00, n01, n10, n11};
      if (violates(s0) || violates(s1)) bad += cnt;
    }
  }
  return bad;
}

}  // namespace

uint64_t count_nonnormal_exact(int N, int m, double epsilon) {
  if (N < 1 || N > 31) throw DomainError("count_nonnormal_exact: 1 <= N <= 31");
  if (m == 1) return count_nonnormal_m1(N, epsilon);
  if (m == 2) return count_nonnormal_m2(N, epsilon);
  throw DomainError("count_nonnormal_exact: m must be 1 or 2");
}

double holder_estimate(const std::vector<Complex>& curve, int min_pow, int max_pow) {
  const int n = (int)curve.size();
  if (n < 8) throw DomainError("holder_estimate: curve too short");
  vector<double> xs, ys;
  for (int p = min_pow; p <= max_pow; p++) {
    int sep = 1 << p;
    if (sep >= n / 2) break;
    double acc = 0;
    int cnt = 0;
    for (int i = 0; i < n; i++) {
      acc += std::abs(curve[(size_t)((i + sep) % n)] - curve[(size_t)i]);
      cnt++;
    }
    double mean = acc / cnt;
    if (mean <= 0) continue;
    xs.push_back(std::log((double)sep / n));
    ys.push_back(std::log(mean));
  }
  if (xs.size() < 2) throw DomainError("holder_estimate: not enough separations");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); i++) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double mcount = (double)xs.size();
  return (mcount * sxy - sx * sy) / (mcount * sxx - sx * sx);
}

}  // namespace jset
