#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ringscan/classify.hpp"

namespace ringscan {

// ---------------------------------------------------------------------------
// Confusion counts and derived detection metrics.
// ---------------------------------------------------------------------------

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
};

// Each metric is absent when its denominator is zero, rather than being
// silently coerced to 0 or 1.
struct MetricSet {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;  // true-positive rate
  std::optional<double> fpr;     // false-positive rate
  std::optional<double> f1;
};

MetricSet metrics(const ConfusionCounts& counts);

// ---------------------------------------------------------------------------
// Classifier selection for evaluation runs.
// ---------------------------------------------------------------------------

enum class ClassifierKind { threshold, knn, svm };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::threshold;
  // Number of consecutive same-source measurements that vote on one decision.
  // Must lie in [1, 7]; even splits resolve to a positive (alarm) decision.
  int votes = 1;
  int knn_k = 9;
  // When true, hyperparameters are re-tuned on each training split by grid
  // search; when false the fixed values below are used directly.
  bool svm_grid_search = false;
  double svm_c = 1.0;
  double svm_gamma = 1.0;
  int svm_folds = 3;
};

std::string classifier_name(const ClassifierSpec& spec);

// ---------------------------------------------------------------------------
// Stratified splitting and Monte-Carlo evaluation.
// ---------------------------------------------------------------------------

struct SplitResult {
  LabeledDataset train;
  LabeledDataset test;
};

// Shuffles each class independently with a deterministic engine derived from
// `seed` and assigns round(train_fraction * class_count) rows to the training
// side (clamped so both sides keep at least one row of each class).
SplitResult stratified_split(const LabeledDataset& data, double train_fraction, std::uint64_t seed);

struct MetricMoments {
  MetricSet mean;
  MetricSet sigma;  // population standard deviation across iterations
};

struct RatePoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct ClassifierOutcome {
  std::string name;
  MetricMoments moments;
  ConfusionCounts pooled;           // summed over every iteration
  std::vector<RatePoint> points;    // one (FPR, TPR) per iteration when kept
};

struct MonteCarloResult {
  std::size_t iterations = 0;
  std::vector<ClassifierOutcome> outcomes;  // one per requested spec, same order
};

// Repeats `iterations` times: derive a per-iteration seed from `master_seed`,
// split the data, fit the feature normalizer on the training side only, train
// every classifier in `specs`, and score the test side.  Test rows of each
// class are grouped in order into blocks of `votes` consecutive measurements;
// each block contributes one voted decision and incomplete blocks are dropped.
MonteCarloResult monte_carlo(const LabeledDataset& data, std::span<const ClassifierSpec> specs,
                             std::size_t iterations, double train_fraction,
                             std::uint64_t master_seed, bool keep_points = false);

// ---------------------------------------------------------------------------
// ROC sweep over decision scores.
// ---------------------------------------------------------------------------

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // monotone from (0,0) to (1,1)
  double auc = 0.0;              // trapezoidal area under the curve
};

// Sweeps a decision threshold over every distinct score (predict positive when
// score >= threshold) and returns the resulting operating points, including
// the degenerate all-negative (0,0) and all-positive (1,1) endpoints.
RocCurve roc_sweep(std::span<const double> scores, std::span<const std::uint8_t> labels);

// ---------------------------------------------------------------------------
// Dispersion ellipses for (FPR, TPR) scatter.
// ---------------------------------------------------------------------------

struct SigmaContour {
  RatePoint center;
  double major_axis = 0.0;   // one-sigma semi-axis along the major direction
  double minor_axis = 0.0;   // one-sigma semi-axis along the minor direction
  double angle_rad = 0.0;    // major-axis direction, measured from +FPR axis
  bool degenerate = false;   // covariance had a non-positive eigenvalue
};

// Fits a population covariance to the points and returns the one-sigma
// ellipse; k-sigma contours are the same ellipse with axes scaled by k.
SigmaContour sigma_contour(std::span<const RatePoint> points);

}  // namespace ringscan
