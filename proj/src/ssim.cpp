#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ringscan/visibility.hpp"

namespace ringscan {

namespace {

constexpr int kWindow = 8;
constexpr double kC1 = 0.01 * 0.01;  // (k1 * L)^2 with L = 1
constexpr double kC2 = 0.03 * 0.03;  // (k2 * L)^2 with L = 1

struct WindowStats {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  double cov = 0.0;
};

WindowStats window_stats(const RealGrid& a, const RealGrid& b, int r0, int c0, int h, int w) {
  WindowStats s;
  const double n = static_cast<double>(h) * static_cast<double>(w);
  for (int r = r0; r < r0 + h; ++r) {
    for (int c = c0; c < c0 + w; ++c) {
      s.mean_a += a.at(r, c);
      s.mean_b += b.at(r, c);
    }
  }
  s.mean_a /= n;
  s.mean_b /= n;
  for (int r = r0; r < r0 + h; ++r) {
    for (int c = c0; c < c0 + w; ++c) {
      const double da = a.at(r, c) - s.mean_a;
      const double db = b.at(r, c) - s.mean_b;
      s.var_a += da * da;
      s.var_b += db * db;
      s.cov += da * db;
    }
  }
  s.var_a /= n;
  s.var_b /= n;
  s.cov /= n;
  return s;
}

}  // namespace

double ssim(const RealGrid& reference, const RealGrid& candidate) {
  if (reference.rows != candidate.rows || reference.cols != candidate.cols)
    throw std::invalid_argument("ssim: images must have identical dimensions");
  if (reference.rows < 1 || reference.cols < 1)
    throw std::invalid_argument("ssim: images must be non-empty");
  for (double v : reference.values)
    if (!std::isfinite(v)) throw std::domain_error("ssim: reference has non-finite values");
  for (double v : candidate.values)
    if (!std::isfinite(v)) throw std::domain_error("ssim: candidate has non-finite values");

  const int wh = std::min(kWindow, reference.rows);
  const int ww = std::min(kWindow, reference.cols);
  double total = 0.0;
  std::size_t windows = 0;
  for (int r0 = 0; r0 + wh <= reference.rows; ++r0) {
    for (int c0 = 0; c0 + ww <= reference.cols; ++c0) {
      const WindowStats s = window_stats(reference, candidate, r0, c0, wh, ww);
      const double num = (2.0 * s.mean_a * s.mean_b + kC1) * (2.0 * s.cov + kC2);
      const double den =
          (s.mean_a * s.mean_a + s.mean_b * s.mean_b + kC1) * (s.var_a + s.var_b + kC2);
      total += num / den;
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

}  // namespace ringscan
