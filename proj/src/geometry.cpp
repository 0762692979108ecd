#include "jset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "jset/analysis.hpp"
#include "jset/parallel.hpp"

namespace jset {

using std::vector;

void Polyline::validate() const {
  for (const auto& p : points)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw InvariantViolation("polyline contains a non-finite point");
  if (max_step > 0)
    for (size_t i = 1; i < points.size(); i++)
      if (std::abs(points[i] - points[i - 1]) > max_step)
        throw InvariantViolation("polyline gap exceeds declared max step");
}

Polyline brick(const TransseriesModel& m, double u_half_width, int n_samples,
               double inset_rho) {
  if (u_half_width > 0.05 + 1e-15) throw DomainError("brick: u_half_width <= 0.05");
  if (n_samples < 2) throw DomainError("brick: need at least two samples");
  Polyline line;
  line.source = "brick t=" + std::to_string(m.orbit.angle.p) + "/" +
                std::to_string(m.orbit.angle.q);
  line.points.resize((size_t)n_samples);
  double inset = inset_rho < 1.0 ? -std::log(inset_rho) : 0.0;
  for (int i = 0; i < n_samples; i++) {
    // symmetric sampling about u = 0
    double u = u_half_width * (2.0 * i / (n_samples - 1) - 1.0);
    Complex s(inset, -2 * M_PI * u);
    line.points[(size_t)i] = (s == Complex(0)) ? m.orbit.landing() : eval_model(m, s);
  }
  return line;
}

namespace {

bool in_box(Complex z, Complex center, double half_width) {
  return std::abs(z.real() - center.real()) <= half_width &&
         std::abs(z.imag() - center.imag()) <= half_width;
}

// Continuous lift of a polyline through one inverse branch: the first
// point takes the requested label, later points follow by continuity
// (a fixed global label would jump wherever the curve crosses the branch
// cut of the square root). The two labels enumerate the two disjoint arcs
// of the preimage, since hyperbolic Julia sets avoid the critical value.
Polyline map_branch(const QuadParam& p, const Polyline& src, bool plus_branch,
                    double max_step, int max_refine_depth) {
  Polyline out;
  out.max_step = 0;
  out.points.reserve(src.points.size());
  if (src.points.empty()) return out;
  auto nearest = [&](Complex y, Complex prev) {
    BranchPair b = inverse_branches(p, y);
    return (std::abs(b.plus - prev) <= std::abs(b.minus - prev)) ? b.plus : b.minus;
  };
  {
    BranchPair b = inverse_branches(p, src.points.front());
    out.points.push_back(plus_branch ? b.plus : b.minus);
  }
  for (size_t i = 1; i < src.points.size(); i++) {
    Complex prev_src = src.points[i - 1];
    Complex cur_src = src.points[i];
    Complex prev = out.points.back();
    Complex cur = nearest(cur_src, prev);
    if (max_step > 0 && std::abs(cur - prev) > max_step) {
      // split the source segment until the lifted images are dense enough
      struct Seg { Complex a, b; int depth; };
      vector<Seg> stack{{prev_src, cur_src, 0}};
      while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        Complex ib = nearest(s.b, out.points.back());
        if (s.depth >= max_refine_depth ||
            std::abs(ib - out.points.back()) <= max_step) {
          out.points.push_back(ib);
        } else {
          Complex mid = (s.a + s.b) / 2.0;
          stack.push_back({mid, s.b, s.depth + 1});
          stack.push_back({s.a, mid, s.depth + 1});
        }
      }
    } else {
      out.points.push_back(cur);
    }
  }
  return out;
}

}  // namespace

std::vector<Polyline> assemble(const QuadParam& p, const Polyline& brick, int depth,
                               const AssembleOptions& opt) {
  if (depth < 0 || depth > 20) throw DomainError("assemble: 0 <= depth <= 20");
  double half = opt.box_half_width > 0 ? opt.box_half_width
                                       : std::max(2.0, 2.0 / std::abs(p.lambda));
  Complex center(0.5, 0.0);
  if (depth == 0) return {brick};

  const int64_t n_addr = int64_t(1) << depth;
  vector<Polyline> out((size_t)n_addr);
  vector<char> keep((size_t)n_addr, 1);
  parallel_for(n_addr, opt.threads, [&](int64_t lo, int64_t hi) {
    for (int64_t a = lo; a < hi; a++) {
      Polyline cur = brick;
      bool ok = true;
      for (int d = depth - 1; d >= 0 && ok; d--) {
        bool plus = ((a >> d) & 1) == 0;  // lexicographic: '+' branch first
        cur = map_branch(p, cur, plus, opt.max_step, opt.max_refine_depth);
        for (const auto& q : cur.points)
          if (!in_box(q, center, half)) {
            ok = false;
            break;
          }
      }
      if (!ok) {
        keep[(size_t)a] = 0;
        continue;
      }
      cur.source = brick.source + " addr=" + std::to_string(a);
      out[(size_t)a] = std::move(cur);
    }
  });
  vector<Polyline> kept;
  kept.reserve((size_t)n_addr);
  for (int64_t a = 0; a < n_addr; a++)
    if (keep[(size_t)a]) kept.push_back(std::move(out[(size_t)a]));
  return kept;
}

PointCloud julia_oracle(const QuadParam& p, int n_points, uint64_t seed) {
  PointCloud cloud;
  cloud.seed = seed;
  cloud.points.reserve((size_t)n_points);
  std::mt19937_64 rng(seed);
  // start at the repelling fixed point (larger multiplier of the two)
  Complex x0(0.0, 0.0), x1 = (p.lambda - 1.0) / p.lambda;
  Complex x = std::abs(deriv_P(p, x0)) >= std::abs(deriv_P(p, x1)) ? x0 : x1;
  auto step = [&](Complex y) {
    BranchPair b = inverse_branches(p, y);
    return (rng() & 1) ? b.plus : b.minus;
  };
  for (int i = 0; i < 50; i++) x = step(x);
  for (int i = 0; i < n_points; i++) {
    x = step(x);
    cloud.points.push_back(x);
  }
  return cloud;
}

Polyline boundary_curve(const QuadParam& p, const TruncatedSeries& phi, double rho,
                        int n_theta) {
  (void)p;
  Polyline line;
  line.source = "boundary rho=" + std::to_string(rho);
  line.points = eval_phi_circle(phi, rho, n_theta);
  line.points.push_back(line.points.front());  // close the curve
  return line;
}

namespace {

// leading N*m bits of angle j/resolution, as a bit vector
vector<uint8_t> leading_bits(int64_t j, int resolution, int nbits) {
  vector<uint8_t> bits((size_t)nbits);
  // angle = j / resolution with resolution = 2^R; bit_i = floor(2^i t) mod 2
  int64_t num = j;
  for (int i = 0; i < nbits; i++) {
    num = 2 * num;
    bits[(size_t)i] = (uint8_t)(num >= resolution);
    if (num >= resolution) num -= resolution;
  }
  return bits;
}

vector<char> excluded_angle_mask(int N0, int m, double epsilon, int resolution) {
  if (!is_power_of_two((size_t)resolution))
    throw DomainError("tilde_curve: resolution must be a power of two");
  int R = 0;
  while ((1 << R) < resolution) R++;
  if ((int64_t(N0) * m) > R)
    throw DomainError("tilde_curve: resolution must be at least 2^(N0*m)");
  vector<char> excluded((size_t)resolution, 0);
  for (int64_t j = 0; j < resolution; j++) {
    for (int N = N0; (int64_t)N * m <= R; N++) {
      auto bits = leading_bits(j, resolution, N * m);
      if (!normality_classify(bits, m, epsilon).is_normal) {
        excluded[(size_t)j] = 1;
        break;
      }
    }
  }
  return excluded;
}

}  // namespace

double tilde_excluded_measure(int N0, int m, double epsilon, int resolution) {
  auto mask = excluded_angle_mask(N0, m, epsilon, resolution);
  int64_t cnt = 0;
  for (char c : mask) cnt += c;
  return (double)cnt / (double)resolution;
}

Polyline tilde_curve(const QuadParam& p, const TruncatedSeries& phi, int N0, int m,
                     double epsilon, int resolution) {
  auto excluded = excluded_angle_mask(N0, m, epsilon, resolution);
  int64_t anchor = -1;
  for (int64_t j = 0; j < resolution && anchor < 0; j++)
    if (!excluded[(size_t)j]) anchor = j;
  if (anchor < 0) throw EmptyComplement("every angle is excluded at this epsilon");

  vector<Complex> curve((size_t)resolution);
  for (int64_t j = 0; j < resolution; j++)
    curve[(size_t)j] =
        eval_phi_refined(p, phi, std::polar(1 - 1e-6, 2 * M_PI * j / (double)resolution), 24);

  // straight segment across each maximal excluded run (cyclic; runs never
  // wrap past the included anchor)
  vector<Complex> out((size_t)resolution);
  int64_t i = 0;
  while (i < resolution) {
    int64_t idx = (anchor + i) % resolution;
    if (!excluded[(size_t)idx]) {
      out[(size_t)idx] = curve[(size_t)idx];
      i++;
      continue;
    }
    int64_t run = 0;
    while (run + i < resolution && excluded[(size_t)((anchor + i + run) % resolution)]) run++;
    int64_t lo = (anchor + i - 1 + resolution) % resolution;
    int64_t hi = (anchor + i + run) % resolution;
    Complex A = curve[(size_t)lo], B = curve[(size_t)hi];
    for (int64_t k = 0; k < run; k++) {
      double t = (double)(k + 1) / (double)(run + 1);
      out[(size_t)((anchor + i + k) % resolution)] = A + (B - A) * t;
    }
    i += run;
  }
  Polyline line;
  line.source = "tilde N0=" + std::to_string(N0) + " m=" + std::to_string(m);
  line.points.assign(out.begin(), out.end());
  line.points.push_back(out[0]);
  return line;
}

namespace {

void splat(std::vector<double>& acc, int w, int h, Complex lo, Complex hi, Complex z) {
  double fx = (z.real() - lo.real()) / (hi.real() - lo.real()) * (w - 1);
  double fy = (hi.imag() - z.imag()) / (hi.imag() - lo.imag()) * (h - 1);
  int x0 = (int)std::floor(fx), y0 = (int)std::floor(fy);
  double dx = fx - x0, dy = fy - y0;
  auto add = [&](int x, int y, double v) {
    if (x >= 0 && x < w && y >= 0 && y < h) acc[(size_t)y * w + x] += v;
  };
  add(x0, y0, (1 - dx) * (1 - dy));
  add(x0 + 1, y0, dx * (1 - dy));
  add(x0, y0 + 1, (1 - dx) * dy);
  add(x0 + 1, y0 + 1, dx * dy);
}

}  // namespace

RasterImage raster(const std::vector<Polyline>& lines, const PointCloud* cloud, int width,
                   int height, Complex window_lo, Complex window_hi,
                   const RasterOptions& opt) {
  if (width < 1 || height < 1 || window_lo.real() >= window_hi.real() ||
      window_lo.imag() >= window_hi.imag())
    throw DomainError("raster: empty window");
  std::vector<double> acc((size_t)width * height, 0.0);
  double px = (window_hi.real() - window_lo.real()) / width;
  for (const auto& line : lines) {
    for (size_t i = 0; i < line.points.size(); i++) {
      splat(acc, width, height, window_lo, window_hi, line.points[i]);
      if (i + 1 < line.points.size()) {
        // subsample long segments at sub-pixel spacing
        Complex a = line.points[i], b = line.points[i + 1];
        double len = std::abs(b - a);
        int steps = (int)std::min(4096.0, std::floor(len / (0.5 * px)));
        for (int s = 1; s < steps; s++)
          splat(acc, width, height, window_lo, window_hi,
                a + (b - a) * ((double)s / steps));
      }
    }
  }
  if (cloud)
    for (const auto& z : cloud->points) splat(acc, width, height, window_lo, window_hi, z);
  RasterImage img;
  img.width = width;
  img.height = height;
  img.window_lo = window_lo;
  img.window_hi = window_hi;
  img.channels = 1;
  img.pixels.resize((size_t)width * height);
  for (size_t i = 0; i < acc.size(); i++) {
    double v = 255.0 * (1.0 - std::exp(-acc[i] / opt.gain * 8.0));
    img.pixels[i] = (uint8_t)std::lround(std::clamp(v, 0.0, 255.0));
  }
  return img;
}

int mandelbrot_escape_iterations(Complex c, int max_iter) {
  Complex t(0);
  for (int i = 1; i <= max_iter; i++) {
    t = t * t + c;
    if (std::norm(t) > 4.0) return i;
  }
  return 0;  // bounded within the cap
}

RasterImage render_mandelbrot(Complex window_lo, Complex window_hi, int width, int height,
                              int max_iter, int threads) {
  if (width < 1 || height < 1) throw DomainError("render_mandelbrot: empty window");
  RasterImage img;
  img.width = width;
  img.height = height;
  img.window_lo = window_lo;
  img.window_hi = window_hi;
  img.channels = 1;
  img.pixels.resize((size_t)width * height);
  parallel_for(height, threads, [&](int64_t lo, int64_t hi) {
    for (int64_t y = lo; y < hi; y++) {
      for (int x = 0; x < width; x++) {
        Complex c(window_lo.real() + (x + 0.5) / width * (window_hi.real() - window_lo.real()),
                  window_hi.imag() - (y + 0.5) / height * (window_hi.imag() - window_lo.imag()));
        int it = mandelbrot_escape_iterations(c, max_iter);
        img.pixels[(size_t)y * width + x] =
            it == 0 ? 0 : (uint8_t)std::lround(55.0 + 200.0 * std::min(1.0, (double)it / 64.0));
      }
    }
  });
  return img;
}

double set_diameter(const std::vector<Complex>& pts) {
  // diameter of the bounding box diagonal; adequate for tolerance scales
  if (pts.empty()) return 0;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& z : pts) {
    xlo = std::min(xlo, z.real());
    xhi = std::max(xhi, z.real());
    ylo = std::min(ylo, z.imag());
    yhi = std::max(yhi, z.imag());
  }
  return std::hypot(xhi - xlo, yhi - ylo);
}

double one_sided_hausdorff(const std::vector<Complex>& from, const std::vector<Complex>& to) {
  if (from.empty() || to.empty()) throw DomainError("hausdorff: empty point set");
  double cell = set_diameter(to) / 256.0;
  if (cell <= 0) cell = 1.0;
  auto key = [&](int ix, int iy) { return ((int64_t)ix << 32) ^ (uint32_t)iy; };
  std::unordered_map<int64_t, vector<Complex>> grid;
  grid.reserve(to.size());
  for (const auto& z : to)
    grid[key((int)std::floor(z.real() / cell), (int)std::floor(z.imag() / cell))].push_back(z);

  double worst = 0;
  for (const auto& z : from) {
    int ix = (int)std::floor(z.real() / cell), iy = (int)std::floor(z.imag() / cell);
    double best = 1e300;
    for (int ring = 0; ring < 1024; ring++) {
      for (int dx = -ring; dx <= ring; dx++) {
        for (int dy = -ring; dy <= ring; dy++) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          auto it = grid.find(key(ix + dx, iy + dy));
          if (it == grid.end()) continue;
          for (const auto& q : it->second) best = std::min(best, std::abs(z - q));
        }
      }
      // all closer cells exhausted once best fits inside the searched rings
      if (best < 1e299 && best <= cell * (ring - 0.0)) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace jset
