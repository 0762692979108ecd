#include "jset/polymap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jset/boettcher.hpp"
#include "jset/parallel.hpp"

namespace jset {

using std::vector;
using u128 = unsigned __int128;

QuadParam make_param(Complex lambda) {
  if (lambda == Complex(0)) throw ZeroLambda("Boettcher normalization needs lambda != 0");
  return {lambda, lambda / 2.0 - lambda * lambda / 4.0};
}

IterateResult iterate_Pn(const QuadParam& p, Complex x, int n, double escape_bound) {
  IterateResult r{x, false, -1};
  for (int i = 0; i < n; i++) {
    r.value = eval_P(p, r.value);
    if (!r.escaped && std::abs(r.value) > escape_bound) {
      r.escaped = true;
      r.escaped_at = i + 1;
    }
  }
  return r;
}

Complex eval_Pn(const QuadParam& p, Complex x, int n) { return iterate_Pn(p, x, n).value; }

Complex deriv_Pn(const QuadParam& p, Complex x, int n) {
  Complex d(1), v = x;
  for (int i = 0; i < n; i++) {
    d *= deriv_P(p, v);
    v = eval_P(p, v);
  }
  return d;
}

ExternalAngle ExternalAngle::make(int64_t p, int64_t q) {
  if (q < 1 || p < 0) throw DomainError("angle requires q >= 1, p >= 0");
  p %= q;
  int64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  ExternalAngle t;
  t.p = p;
  t.q = q;
  t.q_odd = q;
  while (t.q_odd % 2 == 0) {
    t.q_odd /= 2;
    t.m++;
  }
  return t;
}

ExternalAngle double_angle(const ExternalAngle& t) {
  u128 p2 = (u128)t.p * 2 % (u128)t.q;
  return ExternalAngle::make((int64_t)p2, t.q);
}

AngleOrbit angle_orbit(const ExternalAngle& t) {
  AngleOrbit out;
  out.preperiod = t.m;
  ExternalAngle cur = t;
  out.orbit.push_back(cur);
  for (int i = 0; i < t.m; i++) {
    cur = double_angle(cur);
    out.orbit.push_back(cur);
  }
  // cur now has odd denominator; period = ord of 2 mod q_odd (q_odd = 1: fixed)
  ExternalAngle start = cur;
  int N = 0;
  do {
    cur = double_angle(cur);
    N++;
    if (!(cur == start)) out.orbit.push_back(cur);
  } while (!(cur == start) && N < (1 << 26));
  if (!(cur == start)) throw DomainError("angle period search did not close");
  out.period = N;
  return out;
}

BranchPair inverse_branches(const QuadParam& p, Complex y) {
  Complex rad = 0.25 - y / p.lambda;
  Complex rt = std::sqrt(rad);
  BranchPair b{0.5 + rt, 0.5 - rt, rad == Complex(0)};
  return b;
}

namespace {

// Newton on P_N(x) - x from a fixed initial guess.
bool newton_polish(const QuadParam& p, int N, Complex& x, int max_iter, double tol) {
  for (int it = 0; it < max_iter; it++) {
    Complex v = x, d(1);
    for (int j = 0; j < N; j++) {
      d *= deriv_P(p, v);
      v = eval_P(p, v);
    }
    Complex denom = d - 1.0;
    if (std::abs(denom) < 1e-300) return false;
    Complex dx = (v - x) / denom;
    x -= dx;
    if (std::abs(dx) <= tol * (1.0 + std::abs(x))) return true;
    if (std::abs(x) > 1e8) return false;
  }
  return false;
}

bool has_divisor_period(const QuadParam& p, Complex L, int N, double tol) {
  for (int d = 1; d < N; d++) {
    if (N % d != 0) continue;
    if (std::abs(eval_Pn(p, L, d) - L) <= tol * (1.0 + std::abs(L))) return true;
  }
  return false;
}

}  // namespace

PeriodicOrbit landing_point(const QuadParam& p, const ExternalAngle& t,
                            const TruncatedSeries& phi, const LandingOptions& opt) {
  if (t.m != 0)
    throw DomainError("landing_point expects an odd-denominator angle; use the dyadic evaluator");
  int N = angle_orbit(t).period;
  double tt = t.value();

  Complex L;
  bool found = false;
  std::string last = "no guess converged";
  // try the schedule from the most accurate guess down
  vector<double> rhos = opt.rho_schedule;
  std::sort(rhos.begin(), rhos.end(), std::greater<double>());
  for (double rho : rhos) {
    Complex guess = eval_phi_refined(p, phi, std::polar(rho, 2 * M_PI * tt), opt.refine_lifts);
    Complex x = guess;
    if (!newton_polish(p, N, x, opt.max_iter, opt.newton_tol)) {
      last = "Newton did not converge";
      continue;
    }
    if (!opt.allow_divisor_period && has_divisor_period(p, x, N, opt.divisor_tol)) {
      last = "root has proper-divisor period";
      continue;
    }
    L = x;
    found = true;
    break;
  }
  if (!found) throw NewtonDiverged("angle " + std::to_string(t.p) + "/" + std::to_string(t.q) + ": " + last);

  PeriodicOrbit orb;
  orb.angle = t;
  orb.N = N;
  orb.M = int64_t(1) << N;
  orb.points.resize(N);
  orb.points[0] = L;
  Complex w(1), v = L;
  for (int j = 0; j < N; j++) {
    w *= deriv_P(p, v);
    v = eval_P(p, v);
    if (j + 1 < N) orb.points[j + 1] = v;
  }
  if (std::abs(v - L) > 1e-10 * (1.0 + std::abs(L)))
    throw NewtonDiverged("orbit does not close to tolerance");
  if (std::abs(w) <= 1.0)
    throw NotRepelling("|P_N'| = " + std::to_string(std::abs(w)) + " <= 1 (outside hypothesis)");
  orb.w = w;
  orb.b = std::log(w) / ((double)N * std::log(2.0));
  return orb;
}

std::vector<PeriodicOrbit> periodic_points_on_J(const QuadParam& p, int n,
                                                const TruncatedSeries& phi, int threads) {
  if (n < 1 || n > 16) throw DomainError("periodic_points_on_J supports 1 <= n <= 16");
  const int64_t den = (int64_t(1) << n) - 1;

  // representative = smallest angle numerator in each doubling cycle
  vector<int64_t> reps;
  vector<char> seen((size_t)den, 0);
  for (int64_t k = 0; k < den; k++) {
    if (seen[(size_t)k]) continue;
    int64_t cur = k;
    do {
      seen[(size_t)cur] = 1;
      cur = (int64_t)((u128)cur * 2 % (u128)den);
    } while (cur != k);
    reps.push_back(k);
  }

  vector<PeriodicOrbit> raw(reps.size());
  vector<std::string> errors(reps.size());
  parallel_for((int64_t)reps.size(), threads, [&](int64_t lo, int64_t hi) {
    for (int64_t i = lo; i < hi; i++) {
      try {
        raw[i] = landing_point(p, ExternalAngle::make(reps[i], den), phi);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw NewtonDiverged("periodic_points_on_J: " + e);

  // merge orbits that landed on the same point set (pinched rays)
  const double merge_tol = 1e-8;
  vector<PeriodicOrbit> out;
  for (auto& orb : raw) {
    bool merged = false;
    for (auto& kept : out) {
      // same orbit iff landing point appears among kept points
      for (const auto& q : kept.points) {
        if (std::abs(orb.landing() - q) < merge_tol) {
          Complex w_as_kept = deriv_Pn(p, q, orb.N);
          if (std::abs(w_as_kept - orb.w) > 1e-6 * (1.0 + std::abs(orb.w)))
            throw DedupFailure("colliding landings disagree on the multiplier");
          merged = true;
          break;
        }
      }
      if (merged) break;
    }
    if (!merged) out.push_back(std::move(orb));
  }
  return out;  // raw order is by representative angle already
}

size_t point_count(const std::vector<PeriodicOrbit>& orbits) {
  size_t c = 0;
  for (const auto& o : orbits) c += o.points.size();
  return c;
}

}  // namespace jset
