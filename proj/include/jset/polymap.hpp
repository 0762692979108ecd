#pragma once

#include <cstdint>
#include <vector>

#include "jset/errors.hpp"
#include "jset/series.hpp"

namespace jset {

// Parameters of x -> P(x) = lambda x (1 - x), c = lambda/2 - lambda^2/4.
struct QuadParam {
  Complex lambda;
  Complex c;
};

QuadParam make_param(Complex lambda);  // throws ZeroLambda

inline Complex eval_P(const QuadParam& p, Complex x) { return p.lambda * x * (1.0 - x); }
inline Complex deriv_P(const QuadParam& p, Complex x) { return p.lambda * (1.0 - 2.0 * x); }

struct IterateResult {
  Complex value;
  bool escaped = false;
  int escaped_at = -1;
};

// n-fold composition; flags divergence past escape_bound without failing.
IterateResult iterate_Pn(const QuadParam& p, Complex x, int n, double escape_bound = 1e8);
Complex eval_Pn(const QuadParam& p, Complex x, int n);
// chain-rule product of P' along the orbit of x
Complex deriv_Pn(const QuadParam& p, Complex x, int n);

// External angle t = p/q in lowest terms, q = 2^m * q_odd.
struct ExternalAngle {
  int64_t p = 0;
  int64_t q = 1;
  int m = 0;
  int64_t q_odd = 1;

  static ExternalAngle make(int64_t p, int64_t q);
  double value() const { return (double)p / (double)q; }
  bool operator==(const ExternalAngle& o) const { return p == o.p && q == o.q; }
};

ExternalAngle double_angle(const ExternalAngle& t);  // 2t mod 1

struct AngleOrbit {
  int preperiod = 0;  // equals the dyadic exponent m
  int period = 1;     // minimal N >= 1 with 2^N t' = t' on the periodic part
  std::vector<ExternalAngle> orbit;  // forward orbit: tail plus one full cycle
};

AngleOrbit angle_orbit(const ExternalAngle& t);

struct BranchPair {
  Complex plus;   // 1/2 + principal sqrt(1/4 - y/lambda)
  Complex minus;  // 1/2 - principal sqrt(1/4 - y/lambda)
  bool degenerate = false;  // y == lambda/4 (double root)
};

BranchPair inverse_branches(const QuadParam& p, Complex y);

// Repelling periodic orbit attached to a rational external angle.
struct PeriodicOrbit {
  ExternalAngle angle;
  int N = 1;                    // period
  int64_t M = 2;                // 2^N
  std::vector<Complex> points;  // L_t and its forward P-orbit
  Complex w;                    // P_N'(L_t)
  Complex b;                    // log(w) / (N log 2), principal branch

  const Complex& landing() const { return points.front(); }
};

struct LandingOptions {
  std::vector<double> rho_schedule{0.9, 0.99, 0.999};
  int max_iter = 100;
  double newton_tol = 1e-12;       // relative
  double divisor_tol = 1e-8;       // proper-divisor-period rejection
  // Accept a root of proper-divisor period when the series guess itself
  // lands there (several rays of period N can land on a lower-period point
  // outside the main cardioid).
  bool allow_divisor_period = false;
  int refine_lifts = 7;            // functional-equation lifting for guesses
};

// Angle-guided landing: series initial guess, Newton polish on P_N - id.
// Throws NewtonDiverged / NotRepelling.
PeriodicOrbit landing_point(const QuadParam& p, const ExternalAngle& t,
                            const TruncatedSeries& phi,
                            const LandingOptions& opt = {});

// All landing orbits for angles k/(2^n - 1), deduplicated; only repelling
// points retained. Result is sorted by representative angle, one entry per
// distinct point orbit.
std::vector<PeriodicOrbit> periodic_points_on_J(const QuadParam& p, int n,
                                                const TruncatedSeries& phi,
                                                int threads = 0);

// Total number of distinct points across orbits.
size_t point_count(const std::vector<PeriodicOrbit>& orbits);

}  // namespace jset
