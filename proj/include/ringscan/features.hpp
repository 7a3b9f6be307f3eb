#pragma once

#include <array>
#include <span>

#include "ringscan/dynarray.hpp"

namespace ringscan {

inline constexpr int kFeatureCount = 11;

/// Arithmetic summary of the sample magnitudes of one ring measurement.
/// All statistics are computed on |value_k|; variance and stddev are the
/// population forms (divide by the sample count). `magnitude` is the L2 norm
/// of the min-max scaled features and is only defined after apply().
struct FeatureVector {
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
  double stddev = 0.0;
  double variance = 0.0;
  double max_minus_min = 0.0;
  double max_minus_mean = 0.0;
  double max_minus_median = 0.0;
  double mean_minus_min = 0.0;
  double median_minus_min = 0.0;
  double median_minus_mean = 0.0;
  double magnitude = kUnsetMagnitude;

  static constexpr double kUnsetMagnitude = -1.0;
  bool has_magnitude() const { return magnitude >= 0.0; }

  std::array<double, kFeatureCount> as_array() const;
  static FeatureVector from_array(const std::array<double, kFeatureCount>& a);
  static const std::array<const char*, kFeatureCount>& names();
};

/// Features of a measured ring: statistics over the entry magnitudes.
/// Requires at least 2 entries.
FeatureVector extract(const RingSampleSet& samples);

/// Same statistics straight from a magnitude list (all entries >= 0).
FeatureVector extract_from_magnitudes(std::span<const double> magnitudes);

/// Per-feature min-max ranges learned from training vectors only. Features
/// whose training range collapses are flagged and scaled to 0.
struct Normalizer {
  std::array<double, kFeatureCount> lo{};
  std::array<double, kFeatureCount> hi{};
  std::array<bool, kFeatureCount> degenerate{};
};

Normalizer fit_normalizer(std::span<const FeatureVector> train);

/// Min-max scale a vector with a fitted normalizer and fill in `magnitude`
/// as the L2 norm of the 11 scaled features. Values outside the training
/// range scale outside [0, 1]; that is intentional.
FeatureVector apply(const Normalizer& norm, const FeatureVector& fv);

}  // namespace ringscan
