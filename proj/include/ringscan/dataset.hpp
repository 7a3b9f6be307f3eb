#pragma once

#include <cstdint>

#include "ringscan/classify.hpp"
#include "ringscan/dynarray.hpp"
#include "ringscan/scene.hpp"

namespace ringscan {

/// Configuration of the synthetic labeled dataset: a multi-part body phantom
/// (torso, head, arms; negative class) versus the same phantom carrying a
/// concealed strong scatterer (positive class), measured through the
/// rotating-baseline ring sampler. torso_width_m/torso_height_m size the
/// torso; the other parts scale with it.
///
/// Every measurement draws its own pose perturbations from a per-measurement
/// seeded engine, so any single row can be regenerated in isolation. The
/// motion terms emulate subject movement between dwells: a log-normal
/// amplitude wobble applied to the whole ring plus per-sample complex noise.
struct PhantomDatasetConfig {
  std::size_t per_class = 80;
  GeometryContext geometry{};
  RingConfig ring{};
  int scene_rows = 256;
  int scene_cols = 256;
  double half_extent = 0.25;

  double torso_width_m = 0.45;
  double torso_height_m = 0.65;
  double torso_amplitude = 1.0;

  // Pose jitter drawn once per measurement.
  double position_jitter = 0.008;    // direction-cosine sigma of centre offsets
  double tilt_sigma_rad = 0.04;      // torso tilt sigma
  double size_jitter_frac = 0.03;    // sigma of log size scale

  // Motion degradation drawn once per measurement (0 / +inf disable them).
  double motion_scale_sigma = 0.5;   // sigma of log amplitude scale
  double sample_snr_db = 20.0;       // per-ring-sample complex noise level

  std::uint64_t seed = 7;

  void validate() const;
};

/// Generates per_class negative rows ("neg_<i>") followed by per_class
/// positive rows ("pos_<i>"). Features are raw (un-normalized, magnitude
/// unset); normalization belongs to the training split.
LabeledDataset generate_phantom_dataset(const PhantomDatasetConfig& config);

}  // namespace ringscan
