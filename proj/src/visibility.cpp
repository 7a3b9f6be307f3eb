#include "ringscan/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace ringscan {

namespace {

void check_grid_shape(int rows, int cols, std::size_t n_values, const char* what) {
  if (rows < 2 || cols < 2) throw std::invalid_argument(std::string(what) + ": grid needs rows >= 2 and cols >= 2");
  if (n_values != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument(std::string(what) + ": value count does not match rows*cols");
}

}  // namespace

std::size_t SampledVisibility::mask_count() const {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; }));
}

void SampledVisibility::validate() const {
  check_grid_shape(grid.rows, grid.cols, grid.values.size(), "sampled visibility");
  if (mask.size() != grid.values.size())
    throw std::invalid_argument("sampled visibility: mask size does not match grid");
  if (mask_count() == 0) throw std::invalid_argument("sampled visibility: empty mask");
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i] && grid.values[i] != cplx{0.0, 0.0})
      throw std::invalid_argument("sampled visibility: nonzero value outside mask");
  }
}

VisibilityGrid forward_visibility(const SceneIntensity& scene) {
  check_grid_shape(scene.rows, scene.cols, scene.values.size(), "scene");
  for (double v : scene.values) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::domain_error("scene intensity must be finite and non-negative");
  }

  const double dl = scene.dl(), dm = scene.dm();
  std::vector<cplx> buf(scene.values.begin(), scene.values.end());
  buf = detail::to_dft_order(buf, scene.rows, scene.cols);
  detail::dft2d_inplace(buf, scene.rows, scene.cols, +1);
  buf = detail::from_dft_order(buf, scene.rows, scene.cols);

  VisibilityGrid vis;
  vis.rows = scene.rows;
  vis.cols = scene.cols;
  vis.values = std::move(buf);
  const double cell = dl * dm;
  for (auto& v : vis.values) v *= cell;
  vis.col_axis = centered_axis(vis.cols, 1.0 / (scene.cols * dl));
  vis.row_axis = centered_axis(vis.rows, 1.0 / (scene.rows * dm));
  return vis;
}

Reconstruction inverse_reconstruct(const SampledVisibility& sampled) {
  sampled.validate();
  const VisibilityGrid& g = sampled.grid;

  std::vector<cplx> buf = detail::to_dft_order(g.values, g.rows, g.cols);
  detail::dft2d_inplace(buf, g.rows, g.cols, -1);
  buf = detail::from_dft_order(buf, g.rows, g.cols);
  const double cell = g.du() * g.dv();

  Reconstruction rec;
  rec.image.rows = g.rows;
  rec.image.cols = g.cols;
  rec.image.values.resize(buf.size());
  double peak = 0.0, peak_imag = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const cplx v = buf[i] * cell;
    rec.image.values[i] = v.real();
    peak = std::max(peak, std::abs(v));
    peak_imag = std::max(peak_imag, std::abs(v.imag()));
  }
  rec.imag_peak_ratio = peak > 0.0 ? peak_imag / peak : 0.0;
  rec.image.col_axis = centered_axis(g.cols, 1.0 / (g.cols * g.du()));
  rec.image.row_axis = centered_axis(g.rows, 1.0 / (g.rows * g.dv()));
  return rec;
}

SampledVisibility full_mask(const VisibilityGrid& grid) {
  check_grid_shape(grid.rows, grid.cols, grid.values.size(), "visibility");
  SampledVisibility out;
  out.grid = grid;
  out.mask.assign(grid.values.size(), 1);
  return out;
}

SampledVisibility grid_ring_samples(const RingSampleSet& samples, int rows, int cols,
                                    double u_half_extent, double v_half_extent) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("grid_ring_samples: grid needs rows >= 2 and cols >= 2");
  if (!(u_half_extent > 0.0) || !(v_half_extent > 0.0))
    throw std::invalid_argument("grid_ring_samples: extents must be > 0");
  if (samples.entries.empty()) throw std::invalid_argument("grid_ring_samples: no samples");

  SampledVisibility out;
  out.grid.rows = rows;
  out.grid.cols = cols;
  out.grid.col_axis = centered_axis(cols, 2.0 * u_half_extent / cols);
  out.grid.row_axis = centered_axis(rows, 2.0 * v_half_extent / rows);
  out.grid.values.assign(static_cast<std::size_t>(rows) * cols, cplx{0.0, 0.0});
  out.mask.assign(out.grid.values.size(), 0);

  const double du = out.grid.du(), dv = out.grid.dv();
  const double u0 = out.grid.col_axis.front(), v0 = out.grid.row_axis.front();
  std::vector<int> hits(out.grid.values.size(), 0);

  for (const auto& s : samples.entries) {
    const long ci = std::llround((s.u - u0) / du);
    const long ri = std::llround((s.v - v0) / dv);
    if (ci < 0 || ci >= cols || ri < 0 || ri >= rows)
      throw std::out_of_range("grid_ring_samples: sample k=" + std::to_string(s.k) +
                              " falls outside the target grid extents");
    const std::size_t idx = static_cast<std::size_t>(ri) * cols + ci;
    out.grid.values[idx] += s.value;
    ++hits[idx];
    out.mask[idx] = 1;
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] > 1) out.grid.values[i] /= static_cast<double>(hits[i]);
  }
  return out;
}

RealGrid psf(const SampledVisibility& sampled) {
  SampledVisibility indicator = sampled;
  for (std::size_t i = 0; i < indicator.mask.size(); ++i)
    indicator.grid.values[i] = indicator.mask[i] ? cplx{1.0, 0.0} : cplx{0.0, 0.0};

  RealGrid image = inverse_reconstruct(indicator).image;
  double peak = 0.0;
  for (double v : image.values) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) throw std::domain_error("psf: degenerate mask produced an all-zero response");
  for (double& v : image.values) v /= peak;
  return image;
}

}  // namespace ringscan
