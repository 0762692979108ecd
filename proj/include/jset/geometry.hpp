#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jset/transseries.hpp"

namespace jset {

struct Polyline {
  std::vector<Complex> points;
  std::string source;    // model / angle / scale tag
  double max_step = 0;   // declared bound on consecutive gaps (0: unchecked)

  void validate() const;  // finite entries, gap bound
};

struct PointCloud {
  std::vector<Complex> points;
  uint64_t seed = 0;
};

struct RasterImage {
  int width = 0, height = 0;
  Complex window_lo, window_hi;  // complex rectangle, lo = bottom-left
  int channels = 1;              // 1 = grayscale (PGM), 3 = RGB (PPM)
  std::vector<uint8_t> pixels;   // row-major, top row first
};

// Local curve traced by the transseries model on the boundary arc
// |u| <= u_half_width around the model's angle: points eval_model(s(u)),
// s(u) = -2 pi i u. inset_rho < 1 samples slightly inside the disk
// (s(u) = -ln(inset_rho) - 2 pi i u) for diagnostics.
Polyline brick(const TransseriesModel& m, double u_half_width, int n_samples,
               double inset_rho = 1.0);

struct AssembleOptions {
  double box_half_width = 0;  // 0: max(2, 2/|lambda|) around 1/2
  double max_step = 0;        // 0: no refinement; else split long segments
  int max_refine_depth = 12;
  int threads = 0;
};

// All 2^depth inverse-branch compositions applied to the brick, pruned
// against the bounding box; addresses in lexicographic order.
std::vector<Polyline> assemble(const QuadParam& p, const Polyline& brick, int depth,
                               const AssembleOptions& opt = {});

// Random inverse iteration with a 50-step burn-in; deterministic per seed.
PointCloud julia_oracle(const QuadParam& p, int n_points, uint64_t seed);

// phi(rho e^{2 pi i theta}) on a uniform grid.
Polyline boundary_curve(const QuadParam& p, const TruncatedSeries& phi, double rho,
                        int n_theta);

// phi sampled on angles whose leading N*m bits are (eps,N,m)-normal for all
// N0 <= N <= log2(resolution)/m; maximal excluded runs replaced by straight
// segments (endpoint interpolation).
Polyline tilde_curve(const QuadParam& p, const TruncatedSeries& phi, int N0, int m,
                     double epsilon, int resolution);
// Measure of the excluded angle set in the same construction.
double tilde_excluded_measure(int N0, int m, double epsilon, int resolution);

struct RasterOptions {
  double gain = 32.0;  // accumulation-to-intensity scale
};

RasterImage raster(const std::vector<Polyline>& lines, const PointCloud* cloud, int width,
                   int height, Complex window_lo, Complex window_hi,
                   const RasterOptions& opt = {});

// Escape-time Mandelbrot render (t -> t^2 + c, t0 = 0); interior black.
RasterImage render_mandelbrot(Complex window_lo, Complex window_hi, int width, int height,
                              int max_iter, int threads = 0);
int mandelbrot_escape_iterations(Complex c, int max_iter);

// One-sided Hausdorff distance sup_{x in from} min_{y in to} |x - y|
// via a uniform spatial hash.
double one_sided_hausdorff(const std::vector<Complex>& from, const std::vector<Complex>& to);
double set_diameter(const std::vector<Complex>& pts);

}  // namespace jset
