#pragma once

#include <cstdint>
#include <vector>

#include "ringscan/dynarray.hpp"
#include "ringscan/grid.hpp"
#include "ringscan/scene.hpp"

namespace ringscan {

/// Complex spatial-frequency grid. Columns follow u, rows follow v (both in
/// cycles per direction-cosine unit, i.e. rad^-1); spacing is uniform.
struct VisibilityGrid : ComplexGrid {
  const std::vector<double>& u_axis() const { return col_axis; }
  const std::vector<double>& v_axis() const { return row_axis; }
  double du() const { return col_step(); }
  double dv() const { return row_step(); }
};

/// Visibility grid plus a sampling mask. Cells outside the mask hold exactly 0.
struct SampledVisibility {
  VisibilityGrid grid;
  std::vector<std::uint8_t> mask;  // rows*cols, nonzero = sampled

  std::size_t mask_count() const;
  void validate() const;
};

/// Forward transform of a scene: V(u, v) = sum I(l, m) * exp(+j*2*pi*(u*l + v*m)) * dl * dm.
/// The output grid matches the scene dimensions with du = 1 / (cols * dl),
/// dv = 1 / (rows * dm), so the full window maps onto one spatial-frequency period.
VisibilityGrid forward_visibility(const SceneIntensity& scene);

struct Reconstruction {
  RealGrid image;               // real part of the inverse transform
  double imag_peak_ratio = 0;   // max |imaginary part| / peak |value|; 0 for empty input
};

/// Inverse transform of a sampled visibility:
/// I(l, m) = sum V(u, v) * exp(-j*2*pi*(u*l + v*m)) * du * dv over masked cells.
/// The imaginary residual is reported so non-Hermitian sampling is visible.
Reconstruction inverse_reconstruct(const SampledVisibility& sampled);

/// Mark every cell of a grid as sampled.
SampledVisibility full_mask(const VisibilityGrid& grid);

/// Accumulate ring samples onto a rows x cols grid spanning
/// [-u_half_extent, +u_half_extent) x [-v_half_extent, +v_half_extent) by
/// nearest-cell assignment; samples landing in the same cell are averaged.
SampledVisibility grid_ring_samples(const RingSampleSet& samples, int rows, int cols,
                                    double u_half_extent, double v_half_extent);

/// Point-spread function of a sampling mask: inverse transform of the mask
/// indicator (values forced to 1 on the mask), peak-normalized to 1.
RealGrid psf(const SampledVisibility& sampled);

/// Mean structural similarity between two images of identical shape, computed
/// over 8x8 uniform sliding windows (stride 1) with stabilizers
/// c1 = (0.01)^2 and c2 = (0.03)^2 on a unit dynamic range. Images smaller
/// than the window are compared over a single whole-image window. Identical
/// images score 1; the score degrades toward 0 as structure diverges.
double ssim(const RealGrid& reference, const RealGrid& candidate);

}  // namespace ringscan
