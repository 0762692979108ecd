#pragma once

#include <vector>

#include "jset/polymap.hpp"
#include "jset/series.hpp"

namespace jset {

// (T f)(z) = 1/2 sum_{k>=0} 2^{-k} f(z^{2^k}), truncated at f's order.
// Inverse of f -> 2f - f(z^2); the constant term receives the full
// geometric sum.
TruncatedSeries operator_T(const TruncatedSeries& f);

struct BoettcherOptions {
  int max_iter = 200;
  double stop_tol = 1e-14;      // sup coefficient change
  double residual_tol = 1e-10;  // on the G equation, per coefficient
  bool force_recurrence = false;
  bool force_iteration = false;
};

struct BoettcherResult {
  TruncatedSeries G;      // G(z) = lambda z + ..., order K
  double residual = 0;    // sup coeff |G^2 - lambda G(z^2)(1+G)|
  bool via_iteration = false;
  int iterations = 0;
};

// Solves G(z)^2 = lambda G(z^2) (1 + G(z)), G(0)=0, G'(0)=lambda.
// Fixed-point iteration g = 2 T N(g) on G = lambda z (1 + lambda g);
// falls back to the order-by-order recurrence when the iteration
// does not reach stationarity. Both paths agree where both converge.
BoettcherResult bottcher_G(const QuadParam& p, int K, const BoettcherOptions& opt = {});

// phi = -1/G as a Laurent series with lowest_index = -1;
// P(phi(z)) = phi(z^2), lim z phi(z) = -1/lambda.
TruncatedSeries phi_series(const QuadParam& p, int K, const BoettcherOptions& opt = {});
TruncatedSeries phi_from_G(const TruncatedSeries& G);

// Horner evaluation; requires 0 < |z| < 1.
Complex eval_phi(const TruncatedSeries& phi, Complex z);

// Near-boundary evaluation via the functional equation: evaluate at
// z^{2^lifts} (well inside the disk) and pull back through inverse
// branches, choosing branches by direct series estimates.
Complex eval_phi_refined(const QuadParam& p, const TruncatedSeries& phi, Complex z,
                         int lifts = 7);

// phi(rho e^{2 pi i j/n}) for j = 0..n-1 via one FFT of the scaled
// coefficient vector; n a power of two.
std::vector<Complex> eval_phi_circle(const TruncatedSeries& phi, double rho, int n_theta);

// sup over n points of |z| = rho of |P(phi(z)) - phi(z^2)|
double phi_equation_residual(const QuadParam& p, const TruncatedSeries& phi, double rho,
                             int n_points);

// residual series of the G equation, per-coefficient sup
double g_equation_residual(const QuadParam& p, const TruncatedSeries& G);

}  // namespace jset
