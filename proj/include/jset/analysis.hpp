#pragma once

#include <cstdint>
#include <vector>

#include "jset/polymap.hpp"
#include "jset/series.hpp"

namespace jset {

struct BetaEResult {
  double beta_E = 0;              // Re of the circle average of log2 P'(phi)
  int winding = 0;                // argument winding of P'(phi) around the circle
  double im_mod_winding = 0;      // Im part, basepoint-dependent, reported mod winding
  std::vector<double> per_rho;    // quadrature value at each schedule radius
  double extrapolation_span = 0;  // |last quadrature - extrapolated|
};

// Circle average of log2|P'(phi(rho e^{2 pi i theta}))| by the trapezoid
// rule, extrapolated rho -> 1 by an affine fit in ln rho.
BetaEResult beta_E(const QuadParam& p, const TruncatedSeries& phi, int n_theta,
                   const std::vector<double>& rho_schedule = {0.9, 0.99, 0.999},
                   int threads = 0);

// D_H >= 1/beta_E; asserts beta_E >= 1/2 - 1e-6.
double dh_lower_bound(double beta_E_value);

// Unique D in (0, 2] with sum_{fix(P_n) on J} |P_n'|^{-D} = 1, by bisection.
double ruelle_dimension(const std::vector<PeriodicOrbit>& orbits, int n);
double ruelle_An(const std::vector<PeriodicOrbit>& orbits, int n, double D);

// Distribution of local exponents beta(z) = log2|P_n'(z)|/n over fix(P_n) on J.
struct ExponentDistribution {
  int n = 0;
  std::vector<double> betas;  // sorted, one entry per point
  double beta_M = 0;          // max

  double mu(double beta) const;   // right-continuous CDF
  double F(double beta) const;    // mu^{1/n}
  double Phi(double beta) const;  // -log2 F (infinity below the support)
};

ExponentDistribution exponent_distribution(const std::vector<PeriodicOrbit>& orbits, int n);

// max over s in [0, beta_M + 0.1] (step 1e-3) of -D s - Phi_n(s);
// approaches -1 at D = D_H as n grows.
double legendre_check(const ExponentDistribution& dist, double D);

struct NormalityResult {
  bool is_normal = false;
  // frequencies[shift][block] over the N m-blocks of each cyclic shift
  std::vector<std::vector<double>> frequencies;
};

// (eps,N,m)-normality of a cyclic bit string of length N*m: the string and
// each of its m binary left shifts must have every m-block frequency within
// eps/Q of 1/Q, Q = 2^m.
NormalityResult normality_classify(const std::vector<uint8_t>& bits, int m, double epsilon);

// 2 Q m e^{-2 N eps^2 / Q^2}, Q = 2^m.
double hoeffding_bound(int N, int m, double epsilon);

// Exact count of non-normal cyclic strings of length N*m (m <= 2; the m = 2
// case uses a transfer DP over block counts, equivalent to full enumeration).
uint64_t count_nonnormal_exact(int N, int m, double epsilon);

// Log-log regression of |phi(x1)-phi(x2)| against |x1-x2| over dyadic index
// separations of a uniformly sampled closed curve. Diagnostic only.
double holder_estimate(const std::vector<Complex>& curve, int min_pow = 1, int max_pow = 10);

struct DimensionReport {
  double beta_E = 0;
  int winding = 0;
  double bE_imag_mod_winding = 0;
  double lower_bound = 0;  // 1/beta_E
  double ruelle_D = 0;
  int ruelle_period = 0;
  double legendre = 0;
  double quadrature_stability = 0;
};

}  // namespace jset
