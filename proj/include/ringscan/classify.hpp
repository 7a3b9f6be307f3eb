#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ringscan/features.hpp"

namespace ringscan {

/// One labelled measurement. `positive` marks the concealed-object class.
struct LabeledRow {
  FeatureVector features;
  bool positive = false;
  std::string source_id;
};

struct LabeledDataset {
  std::vector<LabeledRow> rows;

  std::size_t count(bool positive) const;
  void require_both_classes() const;
};

/// Scalar decision stump on the feature-vector magnitude.
struct ThresholdModel {
  double threshold = 0.0;
  bool positive_above = true;  // polarity: which side of the cut is "positive"
  double train_balanced_accuracy = 0.0;
};

/// Exhaustive midpoint scan: candidate cuts are midpoints of consecutive sorted
/// training magnitudes, scored by balanced accuracy under both polarities.
/// Score ties resolve to the smaller threshold (above-polarity first).
/// Rows must carry magnitudes, i.e. come from features::apply().
ThresholdModel train_threshold(const LabeledDataset& train);

/// Majority vote over 1..7 magnitudes from the same subject; an even split
/// votes positive (the cautious side for a detector).
bool classify_threshold(const ThresholdModel& model, std::span<const double> magnitudes);

/// Memorized training set for K-nearest-neighbour voting in the scaled
/// 11-feature space. Distance ties resolve to the earlier training index.
struct KnnModel {
  int k = 7;
  std::vector<std::array<double, kFeatureCount>> points;
  std::vector<std::uint8_t> labels;  // 1 = positive
};

KnnModel make_knn(const LabeledDataset& train, int k);
bool classify_knn(const KnnModel& model, const std::array<double, kFeatureCount>& query);
/// Fraction of the K nearest neighbours that are positive; the graded decision
/// value behind classify_knn (vote threshold 0.5, ties positive).
double knn_positive_fraction(const KnnModel& model, const std::array<double, kFeatureCount>& query);

/// Soft-margin RBF-kernel classifier in the scaled 11-feature space.
/// Stored dual coefficients are alpha_i * y_i, so |alpha_y[i]| <= c and the
/// signs carry the labels.
struct SvmRbfModel {
  std::vector<std::array<double, kFeatureCount>> support_vectors;
  std::vector<double> alpha_y;
  double bias = 0.0;
  double gamma = 1.0;
  double c = 1.0;
  int smo_steps = 0;    // pair optimizations spent in training
  double dual_objective = 0.0;
};

/// Train by sequential minimal optimization. The working pair is the maximal
/// violator of the KKT conditions (tolerance 1e-3) joined with the index of
/// largest |E_i - E_j|; falls back to a deterministic scan when that pair is
/// stuck. Throws TrainingError if the step cap is exhausted.
SvmRbfModel train_svm_rbf(const LabeledDataset& train, double c, double gamma);

double svm_decision(const SvmRbfModel& model, const std::array<double, kFeatureCount>& query);
bool classify_svm(const SvmRbfModel& model, const std::array<double, kFeatureCount>& query);

enum class GridObjective {
  cross_validation,  // stratified k-fold accuracy (default)
  train_accuracy,    // score each cell on its own training fit
};

struct GridSearchResult {
  SvmRbfModel model;          // winner retrained on the full training set
  double best_c = 0.0;
  double best_gamma = 0.0;
  double best_score = 0.0;
  int cells_evaluated = 0;
  std::vector<std::string> warnings;  // skipped cells and why
};

/// Exhaustive hyperparameter grid over (c_grid x gamma_grid). Score ties pick
/// the smaller C, then the smaller gamma. Cells whose training fails are
/// skipped with a warning; all cells failing is an error.
GridSearchResult grid_search_svm(const LabeledDataset& train, std::span<const double> c_grid,
                                 std::span<const double> gamma_grid, int folds,
                                 GridObjective objective = GridObjective::cross_validation);

/// Default decade grids: C in {1e-2 .. 1e3}, gamma in {1e-3 .. 1e2}.
const std::vector<double>& default_c_grid();
const std::vector<double>& default_gamma_grid();

}  // namespace ringscan
