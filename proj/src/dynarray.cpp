#include "ringscan/dynarray.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ringscan/visibility.hpp"

namespace ringscan {

namespace {

constexpr double kUvMatchTolerance = 1e-9;

}  // namespace

void ArrayLayout::validate() const {
  if (antenna_positions_m.size() < 2)
    throw std::invalid_argument("array layout needs at least 2 antennas");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be > 0");
}

StaticSamples static_samples(const ArrayLayout& layout) {
  layout.validate();
  const auto& p = layout.antenna_positions_m;
  StaticSamples out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      BaselineSample s;
      s.first = static_cast<int>(i);
      s.second = static_cast<int>(j);
      s.u = (p[j].x - p[i].x) / layout.wavelength_m;
      s.v = (p[j].y - p[i].y) / layout.wavelength_m;
      for (const auto& prev : out.baselines) {
        if (std::abs(prev.u - s.u) <= kUvMatchTolerance && std::abs(prev.v - s.v) <= kUvMatchTolerance) {
          s.redundant = true;
          break;
        }
      }
      (s.redundant ? out.redundant_count : out.unique_count) += 1;
      out.baselines.push_back(s);
    }
  }
  return out;
}

int RingConfig::samples_per_ring() const {
  return static_cast<int>(std::llround(span_rad / step_rad));
}

void RingConfig::validate() const {
  if (baselines_lambda.empty()) throw std::invalid_argument("ring config needs at least one baseline");
  for (double b : baselines_lambda) {
    if (!(b > 0.0)) throw std::invalid_argument("ring baselines must be > 0");
  }
  if (!(step_rad > 0.0)) throw std::invalid_argument("ring step must be > 0");
  if (!(span_rad >= step_rad)) throw std::invalid_argument("ring span must be >= step");
  if (span_rad > kPi + 1e-12)
    throw std::invalid_argument("ring span must not exceed a half turn; the other half is implied by symmetry");
  if (!(dwell_s > 0.0)) throw std::invalid_argument("dwell must be > 0");
  if (!(rotation_rate_rps > 0.0)) throw std::invalid_argument("rotation rate must be > 0");
  if (samples_per_ring() < 1) throw std::invalid_argument("ring config yields no samples");
}

RingSampleSet ring_points(const RingConfig& cfg) {
  cfg.validate();
  const int k_count = cfg.samples_per_ring();
  RingSampleSet out;
  out.entries.reserve(cfg.baselines_lambda.size() * static_cast<std::size_t>(k_count));
  for (double baseline : cfg.baselines_lambda) {
    for (int k = 0; k < k_count; ++k) {
      RingSample s;
      s.k = k;
      s.angle_rad = cfg.start_angle_rad + k * cfg.step_rad;
      s.u = baseline * std::sin(s.angle_rad);
      s.v = baseline * std::cos(s.angle_rad);
      s.baseline_lambda = baseline;
      out.entries.push_back(s);
    }
  }
  return out;
}

RotationSchedule rotation_schedule(const RingConfig& cfg) {
  cfg.validate();
  RotationSchedule sched;
  sched.ring_time_s = cfg.samples_per_ring() * cfg.dwell_s;
  sched.max_feasible_rate_rps = 0.5 / sched.ring_time_s;
  sched.feasible = cfg.rotation_rate_rps <= sched.max_feasible_rate_rps;
  return sched;
}

RingSampleSet hermitian_complete(const RingSampleSet& samples) {
  RingSampleSet out = samples;
  out.entries.reserve(samples.entries.size() * 2);
  const int k_offset = samples.entries.empty()
                           ? 0
                           : 1 + std::max_element(samples.entries.begin(), samples.entries.end(),
                                                  [](const RingSample& a, const RingSample& b) {
                                                    return a.k < b.k;
                                                  })
                                     ->k;
  for (const auto& s : samples.entries) {
    RingSample mirror = s;
    mirror.k = s.k + k_offset;
    mirror.angle_rad = s.angle_rad + RingConfig::kPi;
    mirror.u = -s.u;
    mirror.v = -s.v;
    mirror.value = std::conj(s.value);
    out.entries.push_back(mirror);
  }
  return out;
}

RingSampleSet sample_ring_from_visibility(const RingSampleSet& skeleton, const VisibilityGrid& vis) {
  if (vis.rows < 2 || vis.cols < 2)
    throw std::invalid_argument("sample_ring_from_visibility: visibility grid too small");
  const double du = vis.du(), dv = vis.dv();
  const double u0 = vis.u_axis().front(), u1 = vis.u_axis().back();
  const double v0 = vis.v_axis().front(), v1 = vis.v_axis().back();

  RingSampleSet out = skeleton;
  for (auto& s : out.entries) {
    if (s.u < u0 || s.u > u1 || s.v < v0 || s.v > v1)
      throw std::out_of_range("sample_ring_from_visibility: sample k=" + std::to_string(s.k) +
                              " lies outside the visibility extents");
    double tu = (s.u - u0) / du;
    double tv = (s.v - v0) / dv;
    int ci = std::min(static_cast<int>(tu), vis.cols - 2);
    int ri = std::min(static_cast<int>(tv), vis.rows - 2);
    const double fu = tu - ci;
    const double fv = tv - ri;
    const cplx c00 = vis.at(ri, ci), c01 = vis.at(ri, ci + 1);
    const cplx c10 = vis.at(ri + 1, ci), c11 = vis.at(ri + 1, ci + 1);
    s.value = c00 * ((1 - fu) * (1 - fv)) + c01 * (fu * (1 - fv)) + c10 * ((1 - fu) * fv) +
              c11 * (fu * fv);
  }
  return out;
}

}  // namespace ringscan
