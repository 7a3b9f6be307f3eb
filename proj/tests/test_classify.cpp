#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ringscan/classify.hpp"
#include "ringscan/rng.hpp"

using namespace ringscan;

namespace {

LabeledRow row_from(const std::array<double, kFeatureCount>& a, bool positive,
                    double magnitude = -1.0) {
  LabeledRow r;
  r.features = FeatureVector::from_array(a);
  if (magnitude >= 0.0) r.features.magnitude = magnitude;
  r.positive = positive;
  return r;
}

LabeledRow magnitude_row(double magnitude, bool positive) {
  std::array<double, kFeatureCount> a{};
  a.fill(magnitude / std::sqrt(double(kFeatureCount)));
  return row_from(a, positive, magnitude);
}

std::array<double, kFeatureCount> random_point(std::mt19937_64& engine, double center = 0.0) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::array<double, kFeatureCount> a{};
  for (double& v : a) v = center + coord(engine);
  return a;
}

}  // namespace

TEST_SUITE("classify") {

TEST_CASE("dataset class bookkeeping") {
  LabeledDataset data;
  data.rows = {magnitude_row(0.1, false), magnitude_row(0.9, true), magnitude_row(0.8, true)};
  CHECK(data.count(true) == 2);
  CHECK(data.count(false) == 1);
  CHECK_NOTHROW(data.require_both_classes());
  data.rows.pop_back();
  data.rows.erase(data.rows.begin());
  CHECK_THROWS_AS(data.require_both_classes(), std::invalid_argument);
}

TEST_CASE("threshold training finds the separating midpoint cut") {
  LabeledDataset train;
  for (double m : {0.1, 0.2, 0.3}) train.rows.push_back(magnitude_row(m, false));
  for (double m : {0.7, 0.8}) train.rows.push_back(magnitude_row(m, true));
  const ThresholdModel model = train_threshold(train);
  CHECK(model.positive_above);
  CHECK(model.threshold == doctest::Approx(0.5));
  CHECK(model.train_balanced_accuracy == doctest::Approx(1.0));

  const double low = 0.2, high = 0.9;
  CHECK_FALSE(classify_threshold(model, std::span<const double>(&low, 1)));
  CHECK(classify_threshold(model, std::span<const double>(&high, 1)));
}

TEST_CASE("threshold polarity flips when the positive class sits low") {
  LabeledDataset train;
  for (double m : {0.7, 0.8, 0.9}) train.rows.push_back(magnitude_row(m, false));
  for (double m : {0.1, 0.2}) train.rows.push_back(magnitude_row(m, true));
  const ThresholdModel model = train_threshold(train);
  CHECK_FALSE(model.positive_above);
  CHECK(model.train_balanced_accuracy == doctest::Approx(1.0));
  const double low = 0.15;
  CHECK(classify_threshold(model, std::span<const double>(&low, 1)));
}

TEST_CASE("threshold training requires scaled rows") {
  LabeledDataset train;
  std::array<double, kFeatureCount> a{};
  a.fill(0.5);
  train.rows.push_back(row_from(a, false));  // magnitude left unset
  train.rows.push_back(row_from(a, true));
  CHECK_THROWS_AS(train_threshold(train), std::invalid_argument);
}

TEST_CASE("vote groups resolve even splits toward an alarm") {
  ThresholdModel model;
  model.threshold = 0.5;
  model.positive_above = true;
  const std::vector<double> two_one{0.9, 0.1, 0.8};
  CHECK(classify_threshold(model, two_one));
  const std::vector<double> one_two{0.9, 0.1, 0.2};
  CHECK_FALSE(classify_threshold(model, one_two));
  const std::vector<double> split{0.9, 0.1};
  CHECK(classify_threshold(model, split));  // even split alarms

  const std::vector<double> eight(8, 0.9);
  CHECK_THROWS_AS(classify_threshold(model, eight), std::invalid_argument);
  CHECK_THROWS_AS(classify_threshold(model, std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("nearest-neighbour voting matches an exhaustive oracle") {
  std::mt19937_64 engine = make_engine(77);
  std::bernoulli_distribution label(0.5);
  LabeledDataset train;
  std::vector<std::array<double, kFeatureCount>> points;
  std::vector<std::uint8_t> labels;
  for (int i = 0; i < 200; ++i) {
    const auto p = random_point(engine);
    const bool pos = label(engine);
    train.rows.push_back(row_from(p, pos));
    points.push_back(p);
    labels.push_back(pos ? 1 : 0);
  }
  for (const int k : {1, 7, 20}) {
    const KnnModel model = make_knn(train, k);
    for (int q = 0; q < 300; ++q) {
      const auto query = random_point(engine);
      CHECK(classify_knn(model, query) == oracle::exhaustive_knn(points, labels, k, query));
    }
  }
}

TEST_CASE("positive fraction is the graded form of the knn decision") {
  std::mt19937_64 engine = make_engine(78);
  std::bernoulli_distribution label(0.5);
  LabeledDataset train;
  for (int i = 0; i < 60; ++i) train.rows.push_back(row_from(random_point(engine), label(engine)));
  const KnnModel model = make_knn(train, 9);
  for (int q = 0; q < 100; ++q) {
    const auto query = random_point(engine);
    const double frac = knn_positive_fraction(model, query);
    CHECK(frac >= 0.0);
    CHECK(frac <= 1.0);
    CHECK(classify_knn(model, query) == (frac >= 0.5));
  }
}

TEST_CASE("knn distance ties resolve to the earlier training row") {
  LabeledDataset train;
  std::array<double, kFeatureCount> p{};
  p.fill(0.5);
  train.rows.push_back(row_from(p, false));  // index 0 wins the tie
  train.rows.push_back(row_from(p, true));
  const KnnModel model = make_knn(train, 1);
  CHECK_FALSE(classify_knn(model, p));
}

TEST_CASE("knn configuration bounds") {
  LabeledDataset train;
  std::mt19937_64 engine = make_engine(79);
  for (int i = 0; i < 5; ++i) train.rows.push_back(row_from(random_point(engine), i % 2 == 0));
  CHECK_THROWS_AS(make_knn(train, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_knn(train, 6), std::invalid_argument);
  CHECK_NOTHROW(make_knn(train, 5));
}

TEST_CASE("the four-point parity problem trains to full accuracy") {
  LabeledDataset train;
  const auto at = [](double x, double y) {
    std::array<double, kFeatureCount> a{};
    a[0] = x;
    a[1] = y;
    return a;
  };
  train.rows.push_back(row_from(at(0, 0), false));
  train.rows.push_back(row_from(at(1, 1), false));
  train.rows.push_back(row_from(at(0, 1), true));
  train.rows.push_back(row_from(at(1, 0), true));

  const SvmRbfModel model = train_svm_rbf(train, 10.0, 1.0);
  for (const auto& r : train.rows)
    CHECK(classify_svm(model, r.features.as_array()) == r.positive);
  CHECK(oracle::check_kkt(model, train).empty());
}

TEST_CASE("small-instance duals match a brute-force quadratic program") {
  std::mt19937_64 engine = make_engine(80);
  std::bernoulli_distribution label(0.5);
  for (const std::size_t n : {2u, 3u, 4u}) {
    for (const double c : {0.7, 5.0}) {
      for (const double gamma : {0.4, 2.0}) {
        for (int trial = 0; trial < 3; ++trial) {
          LabeledDataset train;
          std::vector<std::array<double, kFeatureCount>> x;
          std::vector<int> y;
          // Guarantee both classes, fill the rest at random.
          for (std::size_t i = 0; i < n; ++i) {
            const bool pos = i == 0 ? true : (i == 1 ? false : label(engine));
            const auto p = random_point(engine);
            train.rows.push_back(row_from(p, pos));
            x.push_back(p);
            y.push_back(pos ? 1 : -1);
          }
          const SvmRbfModel model = train_svm_rbf(train, c, gamma);
          const double reference = oracle::brute_force_dual(x, y, c, gamma);
          CHECK(model.dual_objective ==
                doctest::Approx(reference).epsilon(1e-4).scale(std::max(1.0, reference)));
          CHECK(oracle::check_kkt(model, train).empty());
        }
      }
    }
  }
}

TEST_CASE("trained models satisfy the optimality conditions on a larger problem") {
  std::mt19937_64 engine = make_engine(81);
  LabeledDataset train;
  for (int i = 0; i < 40; ++i) {
    const bool pos = i % 2 == 0;
    auto p = random_point(engine, pos ? 0.35 : -0.35);  // overlapping blobs
    train.rows.push_back(row_from(p, pos));
  }
  for (const double c : {1.0, 50.0}) {
    const SvmRbfModel model = train_svm_rbf(train, c, 0.8);
    const std::string verdict = oracle::check_kkt(model, train);
    INFO("c = ", c, ": ", verdict);
    CHECK(verdict.empty());
    CHECK(model.c == c);
    CHECK(model.gamma == 0.8);
    CHECK(model.smo_steps > 0);
  }
}

TEST_CASE("hyperparameter search picks a cell that separates easy data") {
  std::mt19937_64 engine = make_engine(82);
  LabeledDataset train;
  for (int i = 0; i < 30; ++i) {
    const bool pos = i % 2 == 0;
    train.rows.push_back(row_from(random_point(engine, pos ? 2.0 : -2.0), pos));
  }
  const GridSearchResult result =
      grid_search_svm(train, default_c_grid(), default_gamma_grid(), 3);
  CHECK(result.warnings.empty());
  CHECK(result.cells_evaluated ==
        static_cast<int>(default_c_grid().size() * default_gamma_grid().size()));
  CHECK(result.best_score == doctest::Approx(1.0));
  for (const auto& r : train.rows)
    CHECK(classify_svm(result.model, r.features.as_array()) == r.positive);
}

}  // TEST_SUITE
