#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ringscan/scene.hpp"

using namespace ringscan;

namespace {

int nonzero_count(const RealGrid& g) {
  return static_cast<int>(std::count_if(g.values.begin(), g.values.end(),
                                        [](double v) { return v != 0.0; }));
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("centered axis pins zero and spacing") {
  SUBCASE("even length starts at -n/2*step and excludes +n/2*step") {
    const auto axis = centered_axis(4, 0.5);
    REQUIRE(axis.size() == 4);
    CHECK(axis[0] == doctest::Approx(-1.0));
    CHECK(axis[1] == doctest::Approx(-0.5));
    CHECK(axis[2] == doctest::Approx(0.0));
    CHECK(axis[3] == doctest::Approx(0.5));
  }
  SUBCASE("odd length is symmetric about zero") {
    const auto axis = centered_axis(5, 0.25);
    CHECK(axis.front() == doctest::Approx(-axis.back()));
    CHECK(axis[2] == doctest::Approx(0.0));
  }
  SUBCASE("uniform spacing everywhere") {
    const auto axis = centered_axis(37, 0.013);
    for (std::size_t i = 1; i < axis.size(); ++i)
      CHECK(axis[i] - axis[i - 1] == doctest::Approx(0.013).epsilon(1e-12));
  }
}

TEST_CASE("physical size maps to direction cosine through sin(atan(.))") {
  GeometryContext ctx;
  ctx.range_m = 2.0;
  CHECK(physical_to_direction_cosine(0.0, ctx) == 0.0);
  CHECK(physical_to_direction_cosine(2.0, ctx) == doctest::Approx(std::sin(std::atan(1.0))));
  // Small sizes behave linearly: x/range to first order.
  CHECK(physical_to_direction_cosine(0.02, ctx) == doctest::Approx(0.01).epsilon(1e-4));
  // Monotone in the size argument.
  CHECK(physical_to_direction_cosine(0.5, ctx) < physical_to_direction_cosine(0.6, ctx));
  CHECK_THROWS_AS(physical_to_direction_cosine(-0.1, ctx), std::invalid_argument);
}

TEST_CASE("geometry context validation") {
  GeometryContext bad;
  bad.range_m = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.range_m = 1.83;
  bad.frequency_hz = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  GeometryContext ok;
  CHECK(ok.wavelength_m() == doctest::Approx(kSpeedOfLight / 75e9));
}

TEST_CASE("point shape lights exactly the nearest pixel") {
  ShapeSpec p;
  p.kind = ShapeKind::point;
  p.center_l = 0.1;
  p.center_m = -0.05;
  p.amplitude = 2.5;
  const auto scene = make_scene(64, 64, 0.25, 0.25, {p});
  CHECK(nonzero_count(scene) == 1);
  // Locate the lit pixel and confirm it is the axis value closest to the centre.
  for (int r = 0; r < scene.rows; ++r)
    for (int c = 0; c < scene.cols; ++c)
      if (scene.at(r, c) != 0.0) {
        CHECK(scene.at(r, c) == doctest::Approx(2.5));
        CHECK(std::abs(scene.l_axis()[c] - p.center_l) <= 0.5 * scene.dl() + 1e-15);
        CHECK(std::abs(scene.m_axis()[r] - p.center_m) <= 0.5 * scene.dm() + 1e-15);
      }
}

TEST_CASE("axis-aligned rectangle covers a boundary-inclusive pixel block") {
  // dl = 0.5/64 = 2^-7 exactly, so edges at +/-8*dl and +/-4*dl are exact and
  // the centre-in-shape rule (boundary inclusive) gives 17 x 9 pixels.
  const double dl = 0.5 / 64;
  ShapeSpec r;
  r.kind = ShapeKind::rectangle;
  r.width = 16 * dl;
  r.height = 8 * dl;
  r.amplitude = 1.0;
  const auto scene = make_scene(64, 64, 0.25, 0.25, {r});
  CHECK(nonzero_count(scene) == 17 * 9);
}

TEST_CASE("rectangle rotated a quarter turn swaps its extents") {
  // Edge positions are kept a quarter-pixel away from any pixel centre so the
  // tiny cos(pi/2) floating-point residue cannot flip a boundary decision.
  const double dl = 0.5 / 64;
  ShapeSpec r;
  r.kind = ShapeKind::rectangle;
  r.width = 15.5 * dl;
  r.height = 7.5 * dl;
  r.amplitude = 1.0;
  ShapeSpec rot = r;
  rot.rotation_rad = 1.57079632679489661923;  // pi/2
  const auto a = make_scene(64, 64, 0.25, 0.25, {r});
  const auto b = make_scene(64, 64, 0.25, 0.25, {rot});
  CHECK(nonzero_count(a) == nonzero_count(b));
  // The rotated copy must equal the transpose of the original.
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      CHECK(a.at(i, j) == b.at(j, i));
}

TEST_CASE("shapes accumulate additively") {
  ShapeSpec a;
  a.kind = ShapeKind::rectangle;
  a.width = 0.1;
  a.height = 0.1;
  a.amplitude = 1.0;
  ShapeSpec b = a;
  b.amplitude = 2.0;
  const auto separate = make_scene(32, 32, 0.25, 0.25, {a});
  const auto stacked = make_scene(32, 32, 0.25, 0.25, {a, b});
  for (std::size_t i = 0; i < stacked.values.size(); ++i)
    CHECK(stacked.values[i] == doctest::Approx(3.0 * separate.values[i]));
}

TEST_CASE("a quad polygon reproduces the equivalent rectangle exactly") {
  const double w = 0.125, h = 0.0625;
  ShapeSpec rect;
  rect.kind = ShapeKind::rectangle;
  rect.width = w;
  rect.height = h;
  rect.amplitude = 1.5;
  ShapeSpec quad;
  quad.kind = ShapeKind::polygon;
  quad.amplitude = 1.5;
  quad.vertices = {{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}};
  const auto a = make_scene(64, 64, 0.25, 0.25, {rect});
  const auto b = make_scene(64, 64, 0.25, 0.25, {quad});
  CHECK(a.values == b.values);
}

TEST_CASE("scene and shape validation rejects bad input") {
  ShapeSpec r;
  r.kind = ShapeKind::rectangle;
  r.width = 0.1;
  r.height = 0.1;

  SUBCASE("non-positive amplitude") {
    r.amplitude = 0.0;
    CHECK_THROWS_AS(make_scene(32, 32, 0.25, 0.25, {r}), std::invalid_argument);
  }
  SUBCASE("non-positive extents") {
    r.width = -0.1;
    CHECK_THROWS_AS(make_scene(32, 32, 0.25, 0.25, {r}), std::invalid_argument);
  }
  SUBCASE("degenerate grid") {
    CHECK_THROWS_AS(make_scene(1, 32, 0.25, 0.25, {r}), std::invalid_argument);
  }
  SUBCASE("half extent outside (0, 1]") {
    CHECK_THROWS_AS(make_scene(32, 32, 1.5, 0.25, {r}), std::invalid_argument);
  }
  SUBCASE("polygon with too few vertices") {
    ShapeSpec p;
    p.kind = ShapeKind::polygon;
    p.vertices = {{0.0, 0.0}, {0.1, 0.0}};
    CHECK_THROWS_AS(make_scene(32, 32, 0.25, 0.25, {p}), std::invalid_argument);
  }
  SUBCASE("self-intersecting polygon") {
    ShapeSpec p;
    p.kind = ShapeKind::polygon;
    p.vertices = {{0.0, 0.0}, {0.1, 0.1}, {0.1, 0.0}, {0.0, 0.1}};  // bow tie
    CHECK_THROWS_AS(make_scene(32, 32, 0.25, 0.25, {p}), std::invalid_argument);
  }
}

TEST_CASE("concealed-object template matches its physical footprint") {
  GeometryContext ctx;
  const ShapeSpec gun = gun_shape(ctx, 0.0);
  REQUIRE(gun.kind == ShapeKind::polygon);
  CHECK(gun.amplitude == doctest::Approx(3.0));

  double lmin = 1e9, lmax = -1e9, mmin = 1e9, mmax = -1e9;
  for (const auto& v : gun.vertices) {
    lmin = std::min(lmin, v.x);
    lmax = std::max(lmax, v.x);
    mmin = std::min(mmin, v.y);
    mmax = std::max(mmax, v.y);
  }
  CHECK(lmax - lmin == doctest::Approx(physical_to_direction_cosine(0.164, ctx)).epsilon(1e-9));
  CHECK(mmax - mmin == doctest::Approx(physical_to_direction_cosine(0.235, ctx)).epsilon(1e-9));
  // Centred on the requested position.
  CHECK(0.5 * (lmin + lmax) == doctest::Approx(0.0).epsilon(1e-12));

  const auto scene = gun_shape_scene(ctx, 0.6);
  CHECK(scene.rows == 256);
  CHECK(scene.cols == 256);
  CHECK(nonzero_count(scene) > 0);
}

}  // TEST_SUITE
