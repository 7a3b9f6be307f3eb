#include "ringscan/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ringscan {

std::size_t LabeledDataset::count(bool positive) const {
  std::size_t n = 0;
  for (const auto& r : rows) n += (r.positive == positive) ? 1 : 0;
  return n;
}

void LabeledDataset::require_both_classes() const {
  if (count(true) == 0 || count(false) == 0)
    throw std::invalid_argument("training data must contain both classes");
}

namespace {

double balanced_accuracy(const std::vector<double>& mags, const std::vector<std::uint8_t>& labels,
                         double threshold, bool positive_above) {
  std::size_t tp = 0, tn = 0, np = 0, nn = 0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const bool predicted = positive_above ? mags[i] >= threshold : mags[i] <= threshold;
    if (labels[i]) {
      ++np;
      tp += predicted ? 1 : 0;
    } else {
      ++nn;
      tn += predicted ? 0 : 1;
    }
  }
  return 0.5 * (static_cast<double>(tp) / np + static_cast<double>(tn) / nn);
}

}  // namespace

ThresholdModel train_threshold(const LabeledDataset& train) {
  train.require_both_classes();
  std::vector<double> mags;
  std::vector<std::uint8_t> labels;
  mags.reserve(train.rows.size());
  for (const auto& r : train.rows) {
    if (!r.features.has_magnitude())
      throw std::invalid_argument("threshold training needs scaled rows with magnitudes");
    mags.push_back(r.features.magnitude);
    labels.push_back(r.positive ? 1 : 0);
  }

  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> candidates;
  candidates.reserve(sorted.size());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double mid = 0.5 * (sorted[i] + sorted[i + 1]);
    if (candidates.empty() || mid != candidates.back()) candidates.push_back(mid);
  }
  if (candidates.empty()) candidates.push_back(sorted.front());

  ThresholdModel best;
  best.train_balanced_accuracy = -1.0;
  for (double t : candidates) {
    for (bool above : {true, false}) {
      const double score = balanced_accuracy(mags, labels, t, above);
      const bool better =
          score > best.train_balanced_accuracy ||
          (score == best.train_balanced_accuracy &&
           (t < best.threshold || (t == best.threshold && above && !best.positive_above)));
      if (better) {
        best.threshold = t;
        best.positive_above = above;
        best.train_balanced_accuracy = score;
      }
    }
  }
  return best;
}

bool classify_threshold(const ThresholdModel& model, std::span<const double> magnitudes) {
  if (magnitudes.empty() || magnitudes.size() > 7)
    throw std::invalid_argument("threshold vote takes between 1 and 7 magnitudes");
  std::size_t votes = 0;
  for (double m : magnitudes) {
    const bool positive = model.positive_above ? m >= model.threshold : m <= model.threshold;
    votes += positive ? 1 : 0;
  }
  return 2 * votes >= magnitudes.size();  // even split votes positive
}

KnnModel make_knn(const LabeledDataset& train, int k) {
  train.require_both_classes();
  if (k < 1 || static_cast<std::size_t>(k) > train.rows.size())
    throw std::invalid_argument("knn: k must satisfy 1 <= k <= training size");
  KnnModel model;
  model.k = k;
  model.points.reserve(train.rows.size());
  model.labels.reserve(train.rows.size());
  for (const auto& r : train.rows) {
    model.points.push_back(r.features.as_array());
    model.labels.push_back(r.positive ? 1 : 0);
  }
  return model;
}

double knn_positive_fraction(const KnnModel& model, const std::array<double, kFeatureCount>& query) {
  const std::size_t n = model.points.size();
  if (n == 0 || model.labels.size() != n) throw std::invalid_argument("knn model is empty or inconsistent");
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (int f = 0; f < kFeatureCount; ++f) {
      const double d = model.points[i][f] - query[f];
      d2 += d * d;
    }
    dist.emplace_back(d2, i);
  }
  // Pairs compare by (distance, training index): equal distances keep the
  // earlier training row, which pins predictions under permutation.
  std::nth_element(dist.begin(), dist.begin() + (model.k - 1), dist.end());
  std::size_t positives = 0;
  for (int i = 0; i < model.k; ++i) positives += model.labels[dist[static_cast<std::size_t>(i)].second];
  return static_cast<double>(positives) / model.k;
}

bool classify_knn(const KnnModel& model, const std::array<double, kFeatureCount>& query) {
  return knn_positive_fraction(model, query) >= 0.5;
}

double svm_decision(const SvmRbfModel& model, const std::array<double, kFeatureCount>& query) {
  double sum = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    double d2 = 0.0;
    for (int f = 0; f < kFeatureCount; ++f) {
      const double d = model.support_vectors[i][f] - query[f];
      d2 += d * d;
    }
    sum += model.alpha_y[i] * std::exp(-model.gamma * d2);
  }
  return sum;
}

bool classify_svm(const SvmRbfModel& model, const std::array<double, kFeatureCount>& query) {
  return svm_decision(model, query) >= 0.0;
}

const std::vector<double>& default_c_grid() {
  static const std::vector<double> kGrid = {1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
  return kGrid;
}

const std::vector<double>& default_gamma_grid() {
  static const std::vector<double> kGrid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2};
  return kGrid;
}

}  // namespace ringscan
