#pragma once

#include <vector>

#include "ringscan/grid.hpp"

namespace ringscan {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Physical context linking metric sizes at the target plane to the
/// direction-cosine coordinates the sampling operates in.
struct GeometryContext {
  double range_m = 1.83;        // standoff distance to the target plane
  double frequency_hz = 75e9;   // carrier frequency

  double wavelength_m() const { return kSpeedOfLight / frequency_hz; }
  void validate() const;
};

/// Non-negative intensity image over direction cosines (l, m), both within [-1, 1].
/// Columns follow l, rows follow m; spacing is uniform along each axis.
struct SceneIntensity : RealGrid {
  const std::vector<double>& l_axis() const { return col_axis; }
  const std::vector<double>& m_axis() const { return row_axis; }
  double dl() const { return col_step(); }
  double dm() const { return row_step(); }
};

enum class ShapeKind { point, rectangle, polygon };

/// One additive scene element. Coordinates are direction cosines.
///  - point: nearest pixel to (center_l, center_m) gets `amplitude`
///  - rectangle: full extents width x height, rotated by rotation_rad about its centre
///  - polygon: simple (non-self-intersecting) vertex list, rotated about the vertex mean
struct ShapeSpec {
  ShapeKind kind = ShapeKind::point;
  double center_l = 0.0;
  double center_m = 0.0;
  double width = 0.0;            // rectangle only
  double height = 0.0;           // rectangle only
  std::vector<Vec2> vertices;    // polygon only; Vec2.x = l, Vec2.y = m
  double amplitude = 1.0;        // > 0
  double rotation_rad = 0.0;     // counter-clockwise in the (l, m) plane
};

/// Rasterize shapes additively onto a rows x cols grid spanning
/// [-l_half_extent, +l_half_extent) x [-m_half_extent, +m_half_extent).
/// A pixel belongs to a shape iff its centre lies inside (boundary inclusive);
/// no anti-aliasing, so coverage counts are exact and reproducible.
SceneIntensity make_scene(int rows, int cols, double l_half_extent, double m_half_extent,
                          const std::vector<ShapeSpec>& shapes);

/// Map a transverse physical size at the target range to a direction-cosine
/// extent: sin(atan(size / range)).
double physical_to_direction_cosine(double size_m, const GeometryContext& ctx);

/// Fixed L-shaped polygon (grip bar plus top slide bar) whose bounding box maps
/// a 164 mm x 235 mm object at the context range, centred at (center_l, center_m)
/// and rotated by orientation_rad. Amplitude follows the metallic-target
/// convention (3.0 against a background of 1.0).
ShapeSpec gun_shape(const GeometryContext& ctx, double orientation_rad,
                    double center_l = 0.0, double center_m = 0.0);

/// Convenience scene: the L-shaped target alone on the default 256x256 grid
/// over [-0.25, 0.25) in both axes.
SceneIntensity gun_shape_scene(const GeometryContext& ctx, double orientation_rad,
                               int rows = 256, int cols = 256, double half_extent = 0.25);

}  // namespace ringscan
