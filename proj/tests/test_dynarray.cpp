#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ringscan/dynarray.hpp"
#include "ringscan/visibility.hpp"

using namespace ringscan;

TEST_SUITE("dynarray") {

TEST_CASE("static array enumerates every pair and flags repeated spacings") {
  ArrayLayout layout;
  layout.wavelength_m = 0.004;
  // Three collinear antennas with equal spacing: pair (0,1) and (1,2) land on
  // the same (u, v), so one of the three baselines is redundant.
  layout.antenna_positions_m = {{0.0, 0.0}, {0.004, 0.0}, {0.008, 0.0}};
  const StaticSamples samples = static_samples(layout);
  CHECK(samples.baselines.size() == 3);
  CHECK(samples.unique_count == 2);
  CHECK(samples.redundant_count == 1);
  // Separations are reported in wavelengths, ordered first < second. The
  // enumeration order is unspecified, so compare the sorted spacing multiset.
  std::vector<double> spacings;
  for (const auto& b : samples.baselines) {
    CHECK(b.first < b.second);
    CHECK(b.v == doctest::Approx(0.0));
    spacings.push_back(b.u);
  }
  std::ranges::sort(spacings);
  CHECK(spacings[0] == doctest::Approx(1.0));
  CHECK(spacings[1] == doctest::Approx(1.0));
  CHECK(spacings[2] == doctest::Approx(2.0));
  for (const auto& b : samples.baselines)
    if (b.redundant) CHECK(b.u == doctest::Approx(1.0));  // only the repeated spacing

  SUBCASE("pair count grows quadratically") {
    layout.antenna_positions_m = {{0, 0}, {0.004, 0}, {0, 0.004}, {0.004, 0.004}, {0.01, 0.002}};
    CHECK(static_samples(layout).baselines.size() == 10);  // 5 choose 2
  }
  SUBCASE("single antenna is rejected") {
    layout.antenna_positions_m = {{0.0, 0.0}};
    CHECK_THROWS_AS(static_samples(layout), std::invalid_argument);
  }
}

TEST_CASE("default ring sweeps 200 encoder steps on the design radius") {
  const RingConfig cfg;
  const RingSampleSet ring = ring_points(cfg);
  REQUIRE(ring.entries.size() == 200);
  for (const auto& s : ring.entries) {
    CHECK(std::hypot(s.u, s.v) == doctest::Approx(77.0).epsilon(1e-9));
    CHECK(s.angle_rad == doctest::Approx(s.k * cfg.step_rad));
    // Angle measured from +v toward +u.
    CHECK(s.u == doctest::Approx(77.0 * std::sin(s.angle_rad)).epsilon(1e-12));
    CHECK(s.v == doctest::Approx(77.0 * std::cos(s.angle_rad)).epsilon(1e-12));
  }
  CHECK(ring.entries.back().angle_rad ==
        doctest::Approx(199 * 0.9 * RingConfig::kPi / 180.0));
}

TEST_CASE("multi-baseline configs emit one ring per baseline") {
  RingConfig cfg;
  cfg.baselines_lambda = {10.0, 20.0};
  const RingSampleSet ring = ring_points(cfg);
  CHECK(ring.entries.size() == 400);
  CHECK(std::hypot(ring.entries[0].u, ring.entries[0].v) == doctest::Approx(10.0));
  CHECK(std::hypot(ring.entries[200].u, ring.entries[200].v) == doctest::Approx(20.0));
}

TEST_CASE("sample count rounds the span/step ratio") {
  RingConfig cfg;
  cfg.span_rad = RingConfig::kPi;
  cfg.step_rad = RingConfig::kPi / 3.0;
  CHECK(cfg.samples_per_ring() == 3);
  cfg.step_rad = RingConfig::kPi / 2.99;  // not an exact divisor
  CHECK(cfg.samples_per_ring() == 3);
}

TEST_CASE("ring config validation") {
  RingConfig cfg;
  SUBCASE("empty baselines") {
    cfg.baselines_lambda.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("non-positive baseline") {
    cfg.baselines_lambda = {0.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("span beyond a half turn") {
    cfg.span_rad = 1.5 * RingConfig::kPi;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("step larger than span") {
    cfg.step_rad = 2.0 * cfg.span_rad;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("default config is valid") { CHECK_NOTHROW(cfg.validate()); }
}

TEST_CASE("rotation schedule separates feasible from skipping rates") {
  RingConfig cfg;  // 200 dwells of 1 ms: a half turn per 0.2 s <=> 2.5 rev/s
  const RotationSchedule sched = rotation_schedule(cfg);
  CHECK(sched.ring_time_s == doctest::Approx(0.2));
  CHECK(sched.max_feasible_rate_rps == doctest::Approx(2.5));
  CHECK(sched.feasible);  // the default commanded rate sits exactly at the limit

  RingConfig fast = cfg;
  fast.rotation_rate_rps = 2.6;
  CHECK_FALSE(rotation_schedule(fast).feasible);

  RingConfig slow = cfg;
  slow.dwell_s = 0.5e-3;  // halve the dwell: twice the rate budget
  CHECK(rotation_schedule(slow).max_feasible_rate_rps == doctest::Approx(5.0));
}

TEST_CASE("hermitian completion mirrors every sample") {
  RingConfig cfg;
  cfg.step_rad = RingConfig::kPi / 4.0;
  RingSampleSet half = ring_points(cfg);
  for (std::size_t i = 0; i < half.entries.size(); ++i)
    half.entries[i].value = cplx{double(i) + 1.0, 0.5 * double(i) - 1.0};

  const RingSampleSet full = hermitian_complete(half);
  REQUIRE(full.entries.size() == 2 * half.entries.size());
  const std::size_t n = half.entries.size();
  std::set<int> ks;
  for (const auto& s : full.entries) ks.insert(s.k);
  CHECK(ks.size() == full.entries.size());  // mirrored indices do not collide
  for (std::size_t i = 0; i < n; ++i) {
    const RingSample& orig = full.entries[i];
    const RingSample& mirror = full.entries[n + i];
    CHECK(mirror.u == doctest::Approx(-orig.u));
    CHECK(mirror.v == doctest::Approx(-orig.v));
    CHECK(mirror.angle_rad == doctest::Approx(orig.angle_rad + RingConfig::kPi));
    CHECK(mirror.value == std::conj(orig.value));
  }
}

TEST_CASE("bilinear ring sampling is exact on bilinear fields") {
  // Bilinear interpolation reproduces any field of the form
  // a + b*u + c*v + d*u*v exactly, which makes a closed-form oracle.
  VisibilityGrid vis;
  vis.rows = 64;
  vis.cols = 64;
  vis.row_axis = centered_axis(64, 4.0);
  vis.col_axis = centered_axis(64, 4.0);
  vis.values.resize(64 * 64);
  const cplx a{0.3, -0.2}, b{0.01, 0.04}, c{-0.02, 0.005}, d{1e-4, -2e-4};
  for (int r = 0; r < 64; ++r)
    for (int col = 0; col < 64; ++col) {
      const double u = vis.col_axis[col], v = vis.row_axis[r];
      vis.at(r, col) = a + b * u + c * v + d * (u * v);
    }

  RingConfig cfg;  // radius 77 fits comfortably inside +/-128
  const RingSampleSet sampled = sample_ring_from_visibility(ring_points(cfg), vis);
  for (const auto& s : sampled.entries) {
    const cplx expected = a + b * s.u + c * s.v + d * (s.u * s.v);
    CHECK(std::abs(s.value - expected) < 1e-12);
  }
}

TEST_CASE("ring samples outside the grid extents are refused") {
  VisibilityGrid vis;
  vis.rows = 8;
  vis.cols = 8;
  vis.row_axis = centered_axis(8, 1.0);
  vis.col_axis = centered_axis(8, 1.0);
  vis.values.assign(64, cplx{1.0, 0.0});
  RingConfig cfg;  // radius 77 cannot fit inside +/-4
  CHECK_THROWS(sample_ring_from_visibility(ring_points(cfg), vis));
}

}  // TEST_SUITE
