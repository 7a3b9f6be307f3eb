#pragma once

#include <vector>

#include "ringscan/grid.hpp"

namespace ringscan {

/// Physical antenna layout: element positions in metres plus the operating wavelength.
struct ArrayLayout {
  std::vector<Vec2> antenna_positions_m;
  double wavelength_m = kDefaultWavelength;

  static constexpr double kDefaultWavelength = 299792458.0 / 75e9;
  void validate() const;
};

/// One pair sample in the spatial-frequency plane. Indices are the antenna
/// labels of the pair ordered first < second; u and v are the separation in
/// wavelengths along x and y.
struct BaselineSample {
  int first = 0;
  int second = 0;
  double u = 0.0;
  double v = 0.0;
  bool redundant = false;  // duplicates an earlier pair's (u, v) within 1e-9
};

struct StaticSamples {
  std::vector<BaselineSample> baselines;
  int unique_count = 0;
  int redundant_count = 0;
};

/// Enumerate every ordered antenna pair (i < j) of a static array and split the
/// count into unique and redundant spatial-frequency samples.
StaticSamples static_samples(const ArrayLayout& layout);

/// Rotating two-element sampler. One ring per entry of baselines_lambda; each
/// ring is swept in encoder steps of step_rad across span_rad starting from
/// start_angle_rad. The angle is measured from the +v axis towards +u, so a
/// sample sits at u = D*sin(angle), v = D*cos(angle).
struct RingConfig {
  std::vector<double> baselines_lambda{77.0};
  double start_angle_rad = 0.0;
  double step_rad = 0.9 * kPi / 180.0;
  double span_rad = kPi;
  double dwell_s = 1e-3;
  double rotation_rate_rps = 2.5;  // commanded arm rate, revolutions/second

  static constexpr double kPi = 3.14159265358979323846;
  int samples_per_ring() const;  // round(span / step)
  void validate() const;
};

/// One angular sample of a ring. `k` is the encoder step index within its ring.
struct RingSample {
  int k = 0;
  double angle_rad = 0.0;
  double u = 0.0;
  double v = 0.0;
  cplx value{0.0, 0.0};
  double baseline_lambda = 0.0;
};

struct RingSampleSet {
  std::vector<RingSample> entries;
};

/// Geometry-only skeleton of the configured rings: positions filled in, values zero.
RingSampleSet ring_points(const RingConfig& cfg);

/// Completion time and rate budget for one ring sweep. A commanded rotation
/// rate above max_feasible_rate_rps would pass encoder positions faster than
/// one dwell each, skipping angles and leaving the ring incomplete.
struct RotationSchedule {
  double ring_time_s = 0.0;          // samples_per_ring * dwell
  double max_feasible_rate_rps = 0;  // 0.5 revolution per ring time
  bool feasible = true;
};

RotationSchedule rotation_schedule(const RingConfig& cfg);

/// Append the conjugate mirror of every entry (angle + pi, (-u, -v), conjugated
/// value). For intensity scenes the visibility is Hermitian, so a half-turn
/// sweep determines the full ring; reconstruction uses the completed set.
RingSampleSet hermitian_complete(const RingSampleSet& samples);

struct VisibilityGrid;

/// Fill a ring skeleton with values bilinearly interpolated from a gridded
/// visibility. Every (u, v) of the skeleton must lie inside the grid extents.
RingSampleSet sample_ring_from_visibility(const RingSampleSet& skeleton,
                                          const VisibilityGrid& vis);

}  // namespace ringscan
