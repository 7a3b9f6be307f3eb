#include "ringscan/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ringscan {

std::array<double, kFeatureCount> FeatureVector::as_array() const {
  return {mean,          median,          max,           stddev,
          variance,      max_minus_min,   max_minus_mean, max_minus_median,
          mean_minus_min, median_minus_min, median_minus_mean};
}

FeatureVector FeatureVector::from_array(const std::array<double, kFeatureCount>& a) {
  FeatureVector fv;
  fv.mean = a[0];
  fv.median = a[1];
  fv.max = a[2];
  fv.stddev = a[3];
  fv.variance = a[4];
  fv.max_minus_min = a[5];
  fv.max_minus_mean = a[6];
  fv.max_minus_median = a[7];
  fv.mean_minus_min = a[8];
  fv.median_minus_min = a[9];
  fv.median_minus_mean = a[10];
  return fv;
}

const std::array<const char*, kFeatureCount>& FeatureVector::names() {
  static const std::array<const char*, kFeatureCount> kNames = {
      "mean",          "median",          "max",           "std",
      "var",           "max_minus_min",   "max_minus_mean", "max_minus_median",
      "mean_minus_min", "median_minus_min", "median_minus_mean"};
  return kNames;
}

FeatureVector extract_from_magnitudes(std::span<const double> magnitudes) {
  const std::size_t n = magnitudes.size();
  if (n < 2) throw std::invalid_argument("feature extraction needs at least 2 samples");
  for (double m : magnitudes) {
    if (!std::isfinite(m) || m < 0.0)
      throw std::domain_error("feature extraction: magnitudes must be finite and >= 0");
  }

  // Streaming mean/variance (Welford); order statistics from a sorted copy.
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (double x : magnitudes) {
    ++count;
    const double d1 = x - mean;
    mean += d1 / static_cast<double>(count);
    m2 += d1 * (x - mean);
  }
  const double variance = m2 / static_cast<double>(n);

  std::vector<double> sorted(magnitudes.begin(), magnitudes.end());
  std::sort(sorted.begin(), sorted.end());
  const double min = sorted.front();
  const double max = sorted.back();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  FeatureVector fv;
  fv.mean = mean;
  fv.median = median;
  fv.max = max;
  fv.variance = variance;
  fv.stddev = std::sqrt(variance);
  fv.max_minus_min = max - min;
  fv.max_minus_mean = max - mean;
  fv.max_minus_median = max - median;
  fv.mean_minus_min = mean - min;
  fv.median_minus_min = median - min;
  fv.median_minus_mean = median - mean;
  return fv;
}

FeatureVector extract(const RingSampleSet& samples) {
  std::vector<double> mags;
  mags.reserve(samples.entries.size());
  for (const auto& e : samples.entries) mags.push_back(std::abs(e.value));
  return extract_from_magnitudes(mags);
}

Normalizer fit_normalizer(std::span<const FeatureVector> train) {
  if (train.size() < 2) throw std::invalid_argument("normalizer needs at least 2 training vectors");
  Normalizer norm;
  const auto first = train[0].as_array();
  norm.lo = first;
  norm.hi = first;
  for (const auto& fv : train) {
    const auto a = fv.as_array();
    for (int i = 0; i < kFeatureCount; ++i) {
      norm.lo[i] = std::min(norm.lo[i], a[i]);
      norm.hi[i] = std::max(norm.hi[i], a[i]);
    }
  }
  for (int i = 0; i < kFeatureCount; ++i) norm.degenerate[i] = !(norm.hi[i] > norm.lo[i]);
  return norm;
}

FeatureVector apply(const Normalizer& norm, const FeatureVector& fv) {
  const auto a = fv.as_array();
  std::array<double, kFeatureCount> scaled{};
  double sum_sq = 0.0;
  for (int i = 0; i < kFeatureCount; ++i) {
    scaled[i] = norm.degenerate[i] ? 0.0 : (a[i] - norm.lo[i]) / (norm.hi[i] - norm.lo[i]);
    sum_sq += scaled[i] * scaled[i];
  }
  FeatureVector out = FeatureVector::from_array(scaled);
  out.magnitude = std::sqrt(sum_sq);
  return out;
}

}  // namespace ringscan
