#include "ringscan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ringscan {

namespace {

// Rotate p counter-clockwise by `angle` about `center`.
Vec2 rotate_about(Vec2 p, Vec2 center, double angle) {
  const double ca = std::cos(angle), sa = std::sin(angle);
  const double dx = p.x - center.x, dy = p.y - center.y;
  return {center.x + ca * dx - sa * dy, center.y + sa * dx + ca * dy};
}

// Boundary-inclusive point-in-rectangle in the rectangle's local frame.
bool inside_rectangle(const ShapeSpec& s, double l, double m) {
  const double ca = std::cos(-s.rotation_rad), sa = std::sin(-s.rotation_rad);
  const double dx = l - s.center_l, dy = m - s.center_m;
  const double lx = ca * dx - sa * dy;
  const double ly = sa * dx + ca * dy;
  return std::abs(lx) <= 0.5 * s.width && std::abs(ly) <= 0.5 * s.height;
}

bool on_segment(Vec2 a, Vec2 b, double px, double py, double eps) {
  const double cross = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
  if (std::abs(cross) > eps) return false;
  const double dot = (px - a.x) * (b.x - a.x) + (py - a.y) * (b.y - a.y);
  const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
  return dot >= -eps && dot <= len2 + eps;
}

// Boundary-inclusive crossing-number test on an already rotated vertex list.
bool inside_polygon(const std::vector<Vec2>& v, double px, double py) {
  const std::size_t n = v.size();
  double span = 0.0;
  for (const auto& p : v) span = std::max({span, std::abs(p.x), std::abs(p.y)});
  const double eps = 1e-12 * std::max(span, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(v[i], v[(i + 1) % n], px, py, eps)) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const bool straddles = (v[i].y > py) != (v[j].y > py);
    if (straddles) {
      const double x_cross = v[j].x + (py - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
      if (px < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
    const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return (v > 0.0) - (v < 0.0);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 != o2 && o3 != o4;
}

void validate_polygon(const std::vector<Vec2>& v) {
  if (v.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip edges sharing a vertex; proper crossings only.
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw std::invalid_argument("polygon is self-intersecting");
    }
  }
}

void validate_shape(const ShapeSpec& s) {
  if (!(s.amplitude > 0.0) || !std::isfinite(s.amplitude))
    throw std::invalid_argument("shape amplitude must be finite and > 0");
  switch (s.kind) {
    case ShapeKind::point:
      break;
    case ShapeKind::rectangle:
      if (!(s.width > 0.0) || !(s.height > 0.0))
        throw std::invalid_argument("rectangle extents must be > 0");
      break;
    case ShapeKind::polygon:
      validate_polygon(s.vertices);
      break;
  }
}

std::vector<Vec2> rotated_vertices(const ShapeSpec& s) {
  Vec2 centroid{0.0, 0.0};
  for (const auto& p : s.vertices) {
    centroid.x += p.x;
    centroid.y += p.y;
  }
  centroid.x /= static_cast<double>(s.vertices.size());
  centroid.y /= static_cast<double>(s.vertices.size());
  std::vector<Vec2> out;
  out.reserve(s.vertices.size());
  for (const auto& p : s.vertices) out.push_back(rotate_about(p, centroid, s.rotation_rad));
  return out;
}

}  // namespace

void GeometryContext::validate() const {
  if (!(range_m > 0.0)) throw std::invalid_argument("geometry range must be > 0");
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("geometry frequency must be > 0");
}

SceneIntensity make_scene(int rows, int cols, double l_half_extent, double m_half_extent,
                          const std::vector<ShapeSpec>& shapes) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("scene grid needs rows >= 2 and cols >= 2");
  if (!(l_half_extent > 0.0) || l_half_extent > 1.0 || !(m_half_extent > 0.0) || m_half_extent > 1.0)
    throw std::invalid_argument("scene half extents must lie in (0, 1]");
  for (const auto& s : shapes) validate_shape(s);

  SceneIntensity scene;
  scene.rows = rows;
  scene.cols = cols;
  scene.col_axis = centered_axis(cols, 2.0 * l_half_extent / cols);
  scene.row_axis = centered_axis(rows, 2.0 * m_half_extent / rows);
  scene.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);

  const double dl = scene.dl(), dm = scene.dm();
  const double l0 = scene.col_axis.front(), m0 = scene.row_axis.front();

  for (const auto& s : shapes) {
    if (s.kind == ShapeKind::point) {
      const long ci = std::llround((s.center_l - l0) / dl);
      const long ri = std::llround((s.center_m - m0) / dm);
      if (ri >= 0 && ri < rows && ci >= 0 && ci < cols)
        scene.at(static_cast<int>(ri), static_cast<int>(ci)) += s.amplitude;
      continue;
    }

    // Bounding box of the (rotated) shape, then exact per-pixel-centre tests.
    std::vector<Vec2> poly;
    double min_l, max_l, min_m, max_m;
    if (s.kind == ShapeKind::rectangle) {
      const double r = 0.5 * std::hypot(s.width, s.height);
      min_l = s.center_l - r;
      max_l = s.center_l + r;
      min_m = s.center_m - r;
      max_m = s.center_m + r;
    } else {
      poly = rotated_vertices(s);
      min_l = max_l = poly[0].x;
      min_m = max_m = poly[0].y;
      for (const auto& p : poly) {
        min_l = std::min(min_l, p.x);
        max_l = std::max(max_l, p.x);
        min_m = std::min(min_m, p.y);
        max_m = std::max(max_m, p.y);
      }
    }
    const int c_lo = std::max(0, static_cast<int>(std::floor((min_l - l0) / dl)) - 1);
    const int c_hi = std::min(cols - 1, static_cast<int>(std::ceil((max_l - l0) / dl)) + 1);
    const int r_lo = std::max(0, static_cast<int>(std::floor((min_m - m0) / dm)) - 1);
    const int r_hi = std::min(rows - 1, static_cast<int>(std::ceil((max_m - m0) / dm)) + 1);

    for (int r = r_lo; r <= r_hi; ++r) {
      const double m = scene.row_axis[static_cast<std::size_t>(r)];
      for (int c = c_lo; c <= c_hi; ++c) {
        const double l = scene.col_axis[static_cast<std::size_t>(c)];
        const bool hit = s.kind == ShapeKind::rectangle ? inside_rectangle(s, l, m)
                                                        : inside_polygon(poly, l, m);
        if (hit) scene.at(r, c) += s.amplitude;
      }
    }
  }
  return scene;
}

double physical_to_direction_cosine(double size_m, const GeometryContext& ctx) {
  ctx.validate();
  if (!(size_m >= 0.0)) throw std::invalid_argument("physical size must be >= 0");
  return std::sin(std::atan(size_m / ctx.range_m));
}

ShapeSpec gun_shape(const GeometryContext& ctx, double orientation_rad,
                    double center_l, double center_m) {
  // L silhouette in unit-box coordinates: vertical grip bar on the left,
  // horizontal slide bar across the top. Bounding box is exactly [0,1]^2.
  static constexpr double kGripWidth = 0.38;
  static constexpr double kSlideBottom = 0.62;
  static constexpr Vec2 kUnitOutline[] = {
      {0.0, 0.0}, {kGripWidth, 0.0},        {kGripWidth, kSlideBottom},
      {1.0, kSlideBottom}, {1.0, 1.0}, {0.0, 1.0},
  };
  const double w = physical_to_direction_cosine(0.164, ctx);
  const double h = physical_to_direction_cosine(0.235, ctx);

  ShapeSpec s;
  s.kind = ShapeKind::polygon;
  s.amplitude = 3.0;
  s.rotation_rad = orientation_rad;
  for (const auto& p : kUnitOutline)
    s.vertices.push_back({center_l + (p.x - 0.5) * w, center_m + (p.y - 0.5) * h});
  return s;
}

SceneIntensity gun_shape_scene(const GeometryContext& ctx, double orientation_rad,
                               int rows, int cols, double half_extent) {
  return make_scene(rows, cols, half_extent, half_extent, {gun_shape(ctx, orientation_rad)});
}

}  // namespace ringscan
