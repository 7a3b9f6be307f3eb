#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "ringscan/evaluate.hpp"

using namespace ringscan;

namespace {

// A row whose eleven features are all `v`, so any min-max fit keeps the scaled
// magnitude strictly monotone in `v` and class separation survives scaling.
LabeledRow level_row(double v, bool positive) {
  std::array<double, kFeatureCount> a{};
  a.fill(v);
  LabeledRow r;
  r.features = FeatureVector::from_array(a);
  r.positive = positive;
  return r;
}

LabeledDataset separable_dataset(std::size_t per_class) {
  LabeledDataset data;
  for (std::size_t i = 0; i < per_class; ++i) {
    data.rows.push_back(level_row(0.00 + 0.01 * static_cast<double>(i), false));
    data.rows.push_back(level_row(0.80 + 0.01 * static_cast<double>(i), true));
  }
  return data;
}

std::size_t class_count(const LabeledDataset& d, bool positive) { return d.count(positive); }

}  // namespace

TEST_SUITE("evaluate") {

TEST_CASE("screening-level confusion counts reproduce the headline metrics") {
  // 2000 balanced subjects at TPR 0.989 / FPR 0.017.
  const ConfusionCounts counts{989, 17, 983, 11};
  const MetricSet m = metrics(counts);
  REQUIRE(m.accuracy.has_value());
  REQUIRE(m.precision.has_value());
  REQUIRE(m.recall.has_value());
  REQUIRE(m.fpr.has_value());
  REQUIRE(m.f1.has_value());

  CHECK(*m.accuracy == doctest::Approx(1972.0 / 2000.0).epsilon(1e-12));
  CHECK(*m.recall == doctest::Approx(0.989).epsilon(1e-12));
  CHECK(*m.fpr == doctest::Approx(0.017).epsilon(1e-12));
  CHECK(*m.precision == doctest::Approx(989.0 / 1006.0).epsilon(1e-12));
  CHECK(*m.f1 == doctest::Approx(1978.0 / 2006.0).epsilon(1e-12));

  // Published-rounding agreement: ACC 0.986 and F1 0.9860 within 5e-4.
  CHECK(std::abs(*m.accuracy - 0.986) < 5e-4);
  CHECK(std::abs(*m.f1 - 0.9860) < 5e-4);
}

TEST_CASE("metrics with empty denominators are absent, not coerced") {
  CHECK_FALSE(metrics(ConfusionCounts{}).accuracy.has_value());

  const MetricSet neg_only = metrics(ConfusionCounts{0, 0, 5, 0});
  CHECK(*neg_only.accuracy == doctest::Approx(1.0));
  CHECK(*neg_only.fpr == doctest::Approx(0.0));
  CHECK_FALSE(neg_only.precision.has_value());
  CHECK_FALSE(neg_only.recall.has_value());
  CHECK_FALSE(neg_only.f1.has_value());

  const MetricSet pos_only = metrics(ConfusionCounts{3, 0, 0, 1});
  CHECK_FALSE(pos_only.fpr.has_value());
  CHECK(*pos_only.recall == doctest::Approx(0.75));
}

TEST_CASE("confusion counts accumulate") {
  ConfusionCounts a{1, 2, 3, 4};
  const ConfusionCounts b{10, 20, 30, 40};
  a += b;
  CHECK(a.tp == 11);
  CHECK(a.fp == 22);
  CHECK(a.tn == 33);
  CHECK(a.fn == 44);
  CHECK(a.total() == 110);
}

TEST_CASE("classifier names are distinct and descriptive") {
  ClassifierSpec threshold;
  ClassifierSpec knn;
  knn.kind = ClassifierKind::knn;
  knn.knn_k = 9;
  ClassifierSpec svm;
  svm.kind = ClassifierKind::svm;
  CHECK(classifier_name(threshold) == "threshold");
  CHECK(classifier_name(knn).find("knn") == 0);
  CHECK(classifier_name(knn).find('9') != std::string::npos);
  CHECK(classifier_name(svm).find("svm") == 0);
}

TEST_CASE("stratified split keeps class proportions on both sides") {
  LabeledDataset data;
  for (int i = 0; i < 20; ++i) data.rows.push_back(level_row(0.8 + 0.001 * i, true));
  for (int i = 0; i < 10; ++i) data.rows.push_back(level_row(0.001 * i, false));

  const SplitResult split = stratified_split(data, 0.7, 42);
  CHECK(class_count(split.train, true) == 14);
  CHECK(class_count(split.train, false) == 7);
  CHECK(class_count(split.test, true) == 6);
  CHECK(class_count(split.test, false) == 3);

  // Union of the two sides is exactly the input (as a multiset of levels).
  std::vector<double> seen;
  for (const auto& r : split.train.rows) seen.push_back(r.features.mean);
  for (const auto& r : split.test.rows) seen.push_back(r.features.mean);
  std::vector<double> expect;
  for (const auto& r : data.rows) expect.push_back(r.features.mean);
  std::ranges::sort(seen);
  std::ranges::sort(expect);
  CHECK(seen == expect);
}

TEST_CASE("stratified split is deterministic in the seed") {
  const LabeledDataset data = separable_dataset(12);
  const SplitResult a = stratified_split(data, 0.7, 9001);
  const SplitResult b = stratified_split(data, 0.7, 9001);
  REQUIRE(a.train.rows.size() == b.train.rows.size());
  for (std::size_t i = 0; i < a.train.rows.size(); ++i) {
    CHECK(a.train.rows[i].features.mean == b.train.rows[i].features.mean);
    CHECK(a.train.rows[i].positive == b.train.rows[i].positive);
  }
  // A different seed should shuffle differently on a 24-row dataset.
  const SplitResult c = stratified_split(data, 0.7, 9002);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.train.rows.size(); ++i)
    any_difference |= a.train.rows[i].features.mean != c.train.rows[i].features.mean;
  CHECK(any_difference);
}

TEST_CASE("extreme fractions clamp so both sides keep every class") {
  LabeledDataset data = separable_dataset(3);
  const SplitResult high = stratified_split(data, 0.99, 1);
  CHECK(class_count(high.train, true) == 2);
  CHECK(class_count(high.test, true) == 1);
  CHECK(class_count(high.test, false) == 1);
  const SplitResult low = stratified_split(data, 0.01, 1);
  CHECK(class_count(low.train, true) == 1);
  CHECK(class_count(low.train, false) == 1);

  CHECK_THROWS_AS(stratified_split(data, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(stratified_split(data, 1.0, 1), std::invalid_argument);
  LabeledDataset thin;
  thin.rows.push_back(level_row(0.1, false));
  thin.rows.push_back(level_row(0.9, true));
  CHECK_THROWS_AS(stratified_split(thin, 0.5, 1), std::invalid_argument);
}

TEST_CASE("repeated evaluation of a separable problem scores perfectly with zero spread") {
  const LabeledDataset data = separable_dataset(20);
  std::vector<ClassifierSpec> specs(3);
  specs[0].kind = ClassifierKind::threshold;
  specs[1].kind = ClassifierKind::knn;
  specs[1].knn_k = 5;
  specs[2].kind = ClassifierKind::svm;
  specs[2].svm_c = 10.0;
  specs[2].svm_gamma = 1.0;

  const MonteCarloResult result = monte_carlo(data, specs, 8, 0.7, 1234);
  CHECK(result.iterations == 8);
  REQUIRE(result.outcomes.size() == 3);
  for (const auto& outcome : result.outcomes) {
    INFO(outcome.name);
    CHECK(*outcome.moments.mean.accuracy == doctest::Approx(1.0));
    CHECK(*outcome.moments.sigma.accuracy == doctest::Approx(0.0));
    CHECK(outcome.pooled.fp == 0);
    CHECK(outcome.pooled.fn == 0);
    CHECK(outcome.pooled.total() == 8 * (6 + 6));  // 30% of 20 per class, per iteration
  }
}

TEST_CASE("evaluation runs are reproducible from the master seed") {
  const LabeledDataset data = separable_dataset(15);
  std::vector<ClassifierSpec> specs(1);
  specs[0].kind = ClassifierKind::knn;
  specs[0].knn_k = 3;
  const MonteCarloResult a = monte_carlo(data, specs, 12, 0.7, 777, true);
  const MonteCarloResult b = monte_carlo(data, specs, 12, 0.7, 777, true);
  CHECK(a.outcomes[0].pooled.tp == b.outcomes[0].pooled.tp);
  CHECK(a.outcomes[0].pooled.fp == b.outcomes[0].pooled.fp);
  CHECK(*a.outcomes[0].moments.mean.accuracy == *b.outcomes[0].moments.mean.accuracy);
  REQUIRE(a.outcomes[0].points.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(a.outcomes[0].points[i].fpr == b.outcomes[0].points[i].fpr);
    CHECK(a.outcomes[0].points[i].tpr == b.outcomes[0].points[i].tpr);
  }
  const MonteCarloResult without = monte_carlo(data, specs, 12, 0.7, 777);
  CHECK(without.outcomes[0].points.empty());
}

TEST_CASE("vote blocks group consecutive test rows and drop remainders") {
  // 20 per class at 65% training leaves 7 test rows per class; votes of 3 make
  // two complete blocks per class and drop the seventh row.
  const LabeledDataset data = separable_dataset(20);
  std::vector<ClassifierSpec> specs(1);
  specs[0].kind = ClassifierKind::threshold;
  specs[0].votes = 3;
  const MonteCarloResult result = monte_carlo(data, specs, 5, 0.65, 99);
  CHECK(result.outcomes[0].pooled.total() == 5 * 4);
  CHECK(*result.outcomes[0].moments.mean.accuracy == doctest::Approx(1.0));
}

TEST_CASE("evaluation configuration bounds") {
  const LabeledDataset data = separable_dataset(6);
  std::vector<ClassifierSpec> specs(1);
  CHECK_THROWS_AS(monte_carlo(data, {}, 5, 0.7, 1), std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo(data, specs, 0, 0.7, 1), std::invalid_argument);
  specs[0].votes = 8;
  CHECK_THROWS_AS(monte_carlo(data, specs, 5, 0.7, 1), std::invalid_argument);
  specs[0].votes = 1;
  specs[0].kind = ClassifierKind::knn;
  specs[0].knn_k = 0;
  CHECK_THROWS_AS(monte_carlo(data, specs, 5, 0.7, 1), std::invalid_argument);
}

TEST_CASE("threshold sweep over scores yields the classic staircase") {
  const std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
  const std::vector<std::uint8_t> labels{0, 0, 1, 1};
  const RocCurve curve = roc_sweep(scores, labels);
  REQUIRE_FALSE(curve.points.empty());
  CHECK(curve.points.front().fpr == doctest::Approx(0.0));
  CHECK(curve.points.front().tpr == doctest::Approx(0.0));
  CHECK(curve.points.back().fpr == doctest::Approx(1.0));
  CHECK(curve.points.back().tpr == doctest::Approx(1.0));
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
    CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
  }
  CHECK(curve.auc == doctest::Approx(0.75));
}

TEST_CASE("sweep extremes: separable, inverted, and uninformative scores") {
  const std::vector<std::uint8_t> labels{0, 0, 1, 1};
  CHECK(roc_sweep(std::vector<double>{1, 2, 3, 4}, labels).auc == doctest::Approx(1.0));
  CHECK(roc_sweep(std::vector<double>{4, 3, 2, 1}, labels).auc == doctest::Approx(0.0));
  CHECK(roc_sweep(std::vector<double>{2, 2, 2, 2}, labels).auc == doctest::Approx(0.5));
}

TEST_CASE("sweep input validation") {
  const std::vector<double> scores{0.2, 0.4};
  CHECK_THROWS_AS(roc_sweep(scores, std::vector<std::uint8_t>{0}), std::invalid_argument);
  CHECK_THROWS_AS(roc_sweep(std::vector<double>{}, std::vector<std::uint8_t>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(roc_sweep(scores, std::vector<std::uint8_t>{1, 1}), std::invalid_argument);
  const std::vector<double> bad{0.2, std::nan("")};
  CHECK_THROWS_AS(roc_sweep(bad, std::vector<std::uint8_t>{0, 1}), std::domain_error);
}

TEST_CASE("dispersion ellipse of an isotropic cross is a circle") {
  const double d = 0.06;
  const std::vector<RatePoint> points{
      {0.5 + d, 0.5}, {0.5 - d, 0.5}, {0.5, 0.5 + d}, {0.5, 0.5 - d}};
  const SigmaContour contour = sigma_contour(points);
  CHECK(contour.center.fpr == doctest::Approx(0.5));
  CHECK(contour.center.tpr == doctest::Approx(0.5));
  CHECK_FALSE(contour.degenerate);
  CHECK(contour.major_axis == doctest::Approx(d / std::sqrt(2.0)));
  CHECK(contour.minor_axis == doctest::Approx(d / std::sqrt(2.0)));
}

TEST_CASE("collinear scatter is flagged degenerate with the right major direction") {
  const std::vector<RatePoint> points{{0.4, 0.4}, {0.5, 0.5}, {0.6, 0.6}};
  const SigmaContour contour = sigma_contour(points);
  CHECK(contour.degenerate);
  CHECK(contour.major_axis == doctest::Approx(0.2 / std::sqrt(3.0)));
  const double folded = std::fmod(contour.angle_rad + std::numbers::pi, std::numbers::pi);
  CHECK(folded == doctest::Approx(std::numbers::pi / 4));
  CHECK_THROWS_AS(sigma_contour(std::vector<RatePoint>{}), std::invalid_argument);
}

}  // TEST_SUITE
