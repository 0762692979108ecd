#pragma once

#include <vector>

#include "jset/boettcher.hpp"
#include "jset/polymap.hpp"

namespace jset {

// Local model at a repelling periodic point:
//   phi(z) = L_t + g(s^b omega(ln s)),  s = -ln(e^{-2 pi i t} z),
// with g the tangent-to-identity normal form of A(y) = P_N(y + L_t) - L_t
// and omega a (ln M)-periodic function, M = 2^N.
struct TransseriesModel {
  QuadParam param;
  PeriodicOrbit orbit;
  std::vector<Complex> A_coeffs;     // conjugated return map A(y) = P_N(y+L) - L
  std::vector<Complex> g_coeffs;     // index n -> a_n; a_0 = 0, a_1 = 1
  std::vector<Complex> ginv_coeffs;  // compositional inverse, same layout
  std::vector<Complex> fourier;      // c_k at index k + k_max, |k| <= k_max
  int k_max = 8;
  double conv_radius_est = 0;  // largest r with |g^{-1}(g(y)) - y| <= 1e-9 on |y| = r
  double s0 = 0;               // top of the omega sampling window

  double residual_conjugacy = 0;    // sup_{|y|<=conv/2} |g(wy) - A(g(y))|
  double residual_periodicity = 0;  // relative H(Ms) = w H(s) error
  double residual_ginv = 0;         // |g^{-1}(g(y)) - y| at conv_radius_est

  Complex c(int k) const { return fourier[(size_t)(k + k_max)]; }
  double omega_stddev() const;  // stddev of |omega| over one period
};

// Coefficients of A(y) = P_N(y + L_t) - L_t (degree 2^N, A(0) ~ 0, A'(0) = w).
std::vector<Complex> conjugacy_A(const QuadParam& p, const PeriodicOrbit& orbit);

enum class NormalFormRoute { OrderMatching, Contraction };

// Unique g with g(w y) = A(g(y)), g(0) = 0, g'(0) = 1, to order n_max.
// OrderMatching solves (w^n - w) a_n = lower-order data; Contraction
// iterates the fixed-point form of the conjugacy on truncated series.
std::vector<Complex> normal_form_g(const std::vector<Complex>& A, Complex w, int n_max,
                                   NormalFormRoute route = NormalFormRoute::OrderMatching);

// Compositional inverse of a tangent-to-identity series.
std::vector<Complex> invert_series(const std::vector<Complex>& g);

Complex eval_series_poly(const std::vector<Complex>& coeffs, Complex y);

// Largest r (geometric search) with |g^{-1}(g(y)) - y| <= tol on |y| = r.
double certify_inversion_radius(const std::vector<Complex>& g,
                                const std::vector<Complex>& ginv, double tol = 1e-9);

// g^{-1}(u) = w^j g^{-1}(A^{-j} u): backward conjugacy reduction brings u
// into the certified disk (A^{-1} follows the orbit through inverse
// branches). Extends the usable inversion domain for weakly repelling
// orbits, where the raw series radius is far too small to sample omega.
Complex ginv_extended(const QuadParam& p, const PeriodicOrbit& orbit,
                      const std::vector<Complex>& ginv, double conv_radius, Complex u,
                      bool* ok = nullptr);

struct OmegaOptions {
  int grid_size = 128;  // power of two, log-uniform over one period
  int k_max = 8;
  double s0 = 0;        // 0: adaptive (largest with |phi - L| < 0.5 conv radius;
                        //  falls back to the reduced-inversion domain when the
                        //  raw radius would push s0 below double precision)
  int refine_lifts = 24;
};

struct OmegaResult {
  std::vector<Complex> c;  // c_k at index k + k_max
  int k_max = 8;
  double s0 = 0;
};

// Samples omega(ln s) = s^{-b} g^{-1}(phi(z) - L_t) at z = e^{2 pi i t} e^{-s}
// on a log-uniform grid over one period [ln s0 - ln M, ln s0]; DFT gives c_k.
// Principal branch of s^{-b} (s real positive on the radial grid).
OmegaResult omega_fourier(const QuadParam& p, const TruncatedSeries& phi,
                          const PeriodicOrbit& orbit, const std::vector<Complex>& g,
                          const std::vector<Complex>& ginv, double conv_radius,
                          const OmegaOptions& opt = {});

struct ModelOptions {
  int n_max = 64;
  OmegaOptions omega;
  bool verify = true;  // check model invariants before returning
  double conjugacy_tol = 1e-9;
  double periodicity_tol = 1e-6;
};

// Full pipeline: landing -> conjugacy_A -> normal_form_g -> invert_series
// -> omega_fourier. Throws InvariantViolation when a residual is out of
// tolerance and verification is on.
TransseriesModel build_model(const QuadParam& p, const ExternalAngle& angle,
                             const TruncatedSeries& phi, const ModelOptions& opt = {});

// L_t + g(s^b omega_trunc(ln s)) for Re s >= 0, s != 0 (principal branches).
// Arguments beyond the certified disk of g are reduced through the
// conjugacy g(y) = A(g(y/w)).
Complex eval_model(const TransseriesModel& m, Complex s);

// Transseries coefficient table A_{n,k} = a_n (c^{*n})_k; row n carries the
// full n-fold convolution support |k| <= n k_max.
struct CoefficientTable {
  int n_max = 0;
  int k_max = 0;
  std::vector<std::vector<Complex>> rows;  // rows[n-1][k + n*k_max]
  Complex at(int n, int k) const;
};

CoefficientTable coefficient_table(const TransseriesModel& m, int n_max, int k_max);

// Row-sum evaluation of the table (matches eval_model inside g's disk).
Complex eval_table(const TransseriesModel& m, const CoefficientTable& t, Complex s);

// Evaluator for phi near a dyadic angle t = p/(2^m q): m inverse-branch
// lifts of the base model at the odd-part angle t', with branch addresses
// pinned by series estimates along the angle orbit and validated.
class DyadicEvaluator {
 public:
  DyadicEvaluator(const QuadParam& p, const ExternalAngle& t, const TransseriesModel& base,
                  const TruncatedSeries& phi);

  // sigma is the local coordinate at t: z = e^{2 pi i t} e^{-sigma};
  // internally s' = 2^m sigma feeds the base model.
  Complex operator()(Complex sigma) const;

  const Complex& landing() const { return L_; }
  int dyadic_exponent() const { return m_; }
  // derivative of P_m along the lift path at the landing point
  Complex deriv_Pm_at_landing() const;

 private:
  const QuadParam param_;
  TransseriesModel base_;
  int m_ = 0;
  Complex L_;
  std::vector<Complex> lift_points_;  // landing points along the lift, L_t first
};

double model_conjugacy_residual(const TransseriesModel& m, double r, int n_points = 64);
double model_periodicity_residual(const QuadParam& p, const TruncatedSeries& phi,
                                  const TransseriesModel& m, int n_points = 32);
// H(M s) = w H(s) with H = g^{-1}(eval_model - L): self-similarity residual.
double model_self_similarity_residual(const TransseriesModel& m, int n_points = 32);

}  // namespace jset
