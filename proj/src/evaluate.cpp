#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ringscan/evaluate.hpp"
#include "ringscan/rng.hpp"

namespace ringscan {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricSet metrics(const ConfusionCounts& c) {
  MetricSet m;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.fpr = ratio(c.fp, c.fp + c.tn);
  if (m.precision && m.recall) {
    const double p = *m.precision, r = *m.recall;
    if (p + r > 0.0)
      m.f1 = 2.0 * p * r / (p + r);
    else
      m.f1 = 0.0;
  }
  return m;
}

std::string classifier_name(const ClassifierSpec& spec) {
  std::ostringstream name;
  switch (spec.kind) {
    case ClassifierKind::threshold:
      name << "threshold";
      break;
    case ClassifierKind::knn:
      name << "knn_k" << spec.knn_k;
      break;
    case ClassifierKind::svm:
      name << (spec.svm_grid_search ? "svm_grid" : "svm");
      break;
  }
  if (spec.votes > 1) name << "_n" << spec.votes;
  return name.str();
}

SplitResult stratified_split(const LabeledDataset& data, double train_fraction,
                             std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
  if (data.count(true) < 2 || data.count(false) < 2)
    throw std::invalid_argument("split: each class needs at least two rows");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < data.rows.size(); ++i)
    (data.rows[i].positive ? pos : neg).push_back(i);

  auto engine = make_engine(seed, 0);
  std::shuffle(pos.begin(), pos.end(), engine);
  std::shuffle(neg.begin(), neg.end(), engine);

  SplitResult out;
  auto assign = [&](const std::vector<std::size_t>& idx) {
    const auto n = idx.size();
    auto train_n = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    train_n = std::clamp<std::size_t>(train_n, 1, n - 1);
    for (std::size_t i = 0; i < n; ++i)
      (i < train_n ? out.train : out.test).rows.push_back(data.rows[idx[i]]);
  };
  assign(pos);
  assign(neg);
  return out;
}

namespace {

bool vote(const std::vector<bool>& decisions, std::size_t begin, std::size_t count) {
  std::size_t positives = 0;
  for (std::size_t i = begin; i < begin + count; ++i) positives += decisions[i] ? 1u : 0u;
  return 2 * positives >= count;
}

struct MomentAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(const std::optional<double>& v) {
    if (!v) return;
    sum += *v;
    sum_sq += *v * *v;
    ++count;
  }
  std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
  std::optional<double> sigma() const {
    if (count == 0) return std::nullopt;
    const double m = sum / static_cast<double>(count);
    return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(count) - m * m));
  }
};

struct MetricAccumulator {
  MomentAccumulator accuracy, precision, recall, fpr, f1;

  void add(const MetricSet& m) {
    accuracy.add(m.accuracy);
    precision.add(m.precision);
    recall.add(m.recall);
    fpr.add(m.fpr);
    f1.add(m.f1);
  }
  MetricMoments moments() const {
    MetricMoments out;
    out.mean = {accuracy.mean(), precision.mean(), recall.mean(), fpr.mean(), f1.mean()};
    out.sigma = {accuracy.sigma(), precision.sigma(), recall.sigma(), fpr.sigma(), f1.sigma()};
    return out;
  }
};

LabeledDataset normalize_rows(const Normalizer& norm, const LabeledDataset& in) {
  LabeledDataset out;
  out.rows.reserve(in.rows.size());
  for (const auto& r : in.rows)
    out.rows.push_back({apply(norm, r.features), r.positive, r.source_id});
  return out;
}

// Consecutive same-class test rows are grouped into blocks of `votes`
// measurements; each block yields one decision.  Incomplete tails are dropped.
ConfusionCounts score_with_votes(const std::vector<bool>& decisions,
                                 const std::vector<bool>& truth, int votes) {
  ConfusionCounts counts;
  for (bool target : {true, false}) {
    std::vector<bool> cls;
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (truth[i] == target) cls.push_back(decisions[i]);
    const std::size_t blocks = cls.size() / static_cast<std::size_t>(votes);
    for (std::size_t b = 0; b < blocks; ++b) {
      const bool alarm =
          vote(cls, b * static_cast<std::size_t>(votes), static_cast<std::size_t>(votes));
      if (target)
        alarm ? ++counts.tp : ++counts.fn;
      else
        alarm ? ++counts.fp : ++counts.tn;
    }
  }
  return counts;
}

}  // namespace

MonteCarloResult monte_carlo(const LabeledDataset& data, std::span<const ClassifierSpec> specs,
                             std::size_t iterations, double train_fraction,
                             std::uint64_t master_seed, bool keep_points) {
  if (specs.empty()) throw std::invalid_argument("monte_carlo: no classifiers requested");
  if (iterations == 0) throw std::invalid_argument("monte_carlo: iterations must be >= 1");
  for (const auto& s : specs) {
    if (s.votes < 1 || s.votes > 7)
      throw std::invalid_argument("monte_carlo: votes must lie in [1, 7]");
    if (s.kind == ClassifierKind::knn && s.knn_k < 1)
      throw std::invalid_argument("monte_carlo: knn_k must be >= 1");
  }

  MonteCarloResult result;
  result.iterations = iterations;
  result.outcomes.resize(specs.size());
  std::vector<MetricAccumulator> accum(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s)
    result.outcomes[s].name = classifier_name(specs[s]);

  for (std::size_t t = 0; t < iterations; ++t) {
    const std::uint64_t seed_t = derive_seed(master_seed, t);
    const SplitResult split = stratified_split(data, train_fraction, seed_t);
    const Normalizer norm = fit_normalizer([&] {
      std::vector<FeatureVector> fv;
      fv.reserve(split.train.rows.size());
      for (const auto& r : split.train.rows) fv.push_back(r.features);
      return fv;
    }());
    const LabeledDataset train = normalize_rows(norm, split.train);
    const LabeledDataset test = normalize_rows(norm, split.test);

    std::vector<bool> truth;
    truth.reserve(test.rows.size());
    for (const auto& r : test.rows) truth.push_back(r.positive);

    for (std::size_t s = 0; s < specs.size(); ++s) {
      const ClassifierSpec& spec = specs[s];
      std::vector<bool> decisions;
      decisions.reserve(test.rows.size());
      switch (spec.kind) {
        case ClassifierKind::threshold: {
          const ThresholdModel model = train_threshold(train);
          for (const auto& r : test.rows) {
            const double m = r.features.magnitude;
            decisions.push_back(classify_threshold(model, std::span<const double>(&m, 1)));
          }
          break;
        }
        case ClassifierKind::knn: {
          const KnnModel model = make_knn(train, spec.knn_k);
          for (const auto& r : test.rows)
            decisions.push_back(classify_knn(model, r.features.as_array()));
          break;
        }
        case ClassifierKind::svm: {
          SvmRbfModel model;
          if (spec.svm_grid_search) {
            model = grid_search_svm(train, default_c_grid(), default_gamma_grid(), spec.svm_folds,
                                    GridObjective::cross_validation)
                        .model;
          } else {
            model = train_svm_rbf(train, spec.svm_c, spec.svm_gamma);
          }
          for (const auto& r : test.rows)
            decisions.push_back(classify_svm(model, r.features.as_array()));
          break;
        }
      }

      const ConfusionCounts counts = score_with_votes(decisions, truth, spec.votes);
      if (counts.total() == 0)
        throw std::invalid_argument("monte_carlo: vote group larger than the test split");
      const MetricSet m = metrics(counts);
      accum[s].add(m);
      result.outcomes[s].pooled += counts;
      if (keep_points && m.fpr && m.recall)
        result.outcomes[s].points.push_back({*m.fpr, *m.recall});
    }
  }

  for (std::size_t s = 0; s < specs.size(); ++s)
    result.outcomes[s].moments = accum[s].moments();
  return result;
}

RocCurve roc_sweep(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("roc: scores and labels differ in length");
  if (scores.empty()) throw std::invalid_argument("roc: no scores");
  const auto n_pos =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("roc: both classes must be present");

  std::vector<std::pair<double, std::uint8_t>> rows(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw std::domain_error("roc: scores must be finite");
    rows[i] = {scores[i], labels[i]};
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < rows.size();) {
    const double threshold = rows[i].first;
    for (; i < rows.size() && rows[i].first == threshold; ++i)
      (rows[i].second != 0 ? tp : fp) += 1;
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                            static_cast<double>(tp) / static_cast<double>(n_pos), threshold});
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    curve.auc += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  return curve;
}

SigmaContour sigma_contour(std::span<const RatePoint> points) {
  if (points.empty()) throw std::invalid_argument("sigma contour: no points");
  SigmaContour out;
  const auto n = static_cast<double>(points.size());
  for (const auto& p : points) {
    out.center.fpr += p.fpr;
    out.center.tpr += p.tpr;
  }
  out.center.fpr /= n;
  out.center.tpr /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = p.fpr - out.center.fpr;
    const double dy = p.tpr - out.center.tpr;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  sxx /= n;
  sxy /= n;
  syy /= n;

  const double half_trace = 0.5 * (sxx + syy);
  const double disc = std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
  const double lambda_major = half_trace + disc;
  const double lambda_minor = half_trace - disc;
  out.major_axis = std::sqrt(std::max(0.0, lambda_major));
  out.minor_axis = std::sqrt(std::max(0.0, lambda_minor));
  out.degenerate = !(lambda_minor > 0.0);
  if (std::abs(sxy) > 0.0)
    out.angle_rad = std::atan2(lambda_major - sxx, sxy);
  else
    out.angle_rad = sxx >= syy ? 0.0 : std::asin(1.0);  // pi/2
  return out;
}

}  // namespace ringscan
