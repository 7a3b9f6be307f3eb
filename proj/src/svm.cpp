#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ringscan/classify.hpp"
#include "ringscan/errors.hpp"

namespace ringscan {

namespace {

constexpr double kKktTolerance = 1e-3;
constexpr int kMaxSmoSteps = 400000;

struct SmoState {
  const std::vector<std::array<double, kFeatureCount>>& x;
  std::vector<double> y;       // +1 / -1
  double c;
  double gamma;
  std::vector<double> kernel;  // n*n, row-major
  std::vector<double> alpha;
  std::vector<double> u;       // u_i = sum_j alpha_j y_j K_ij (bias-free margin)

  std::size_t n() const { return y.size(); }
  double k(std::size_t i, std::size_t j) const { return kernel[i * n() + j]; }
};

double rbf(const std::array<double, kFeatureCount>& a, const std::array<double, kFeatureCount>& b,
           double gamma) {
  double d2 = 0.0;
  for (int f = 0; f < kFeatureCount; ++f) {
    const double d = a[f] - b[f];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

// Tightest admissible bias interval [lo_bound, hi_bound] implied by the KKT
// conditions: every i that can still move its alpha up constrains the bias
// from one side, every i that can move down constrains it from the other.
// The pair gap (hi - lo) is the convergence measure.
struct BiasWindow {
  double hi = 0.0;  // max over indices requiring bias >= g_i
  double lo = 0.0;  // min over indices requiring bias <= g_i
  double bias() const { return 0.5 * (hi + lo); }
  double gap() const { return hi - lo; }
};

BiasWindow bias_window(const SmoState& s) {
  const double eps = 1e-9 * s.c;
  BiasWindow w;
  bool any_hi = false, any_lo = false;
  for (std::size_t i = 0; i < s.n(); ++i) {
    const double g = s.y[i] - s.u[i];
    const bool can_up = s.y[i] > 0 ? s.alpha[i] < s.c - eps : s.alpha[i] > eps;
    const bool can_down = s.y[i] > 0 ? s.alpha[i] > eps : s.alpha[i] < s.c - eps;
    if (can_up && (!any_hi || g > w.hi)) {
      w.hi = g;
      any_hi = true;
    }
    if (can_down && (!any_lo || g < w.lo)) {
      w.lo = g;
      any_lo = true;
    }
  }
  if (!any_hi || !any_lo) {
    // One side unconstrained: no violation is expressible, treat as converged.
    if (any_hi) w.lo = w.hi;
    if (any_lo) w.hi = w.lo;
  }
  return w;
}

// Joint optimization of the pair (i1, i2) holding everything else fixed.
// Returns false when the pair cannot move.
bool take_step(SmoState& s, std::size_t i1, std::size_t i2, double e1_minus_e2) {
  if (i1 == i2) return false;
  const double a1 = s.alpha[i1], a2 = s.alpha[i2];
  const double y1 = s.y[i1], y2 = s.y[i2];
  const double sgn = y1 * y2;

  double low, high;
  if (sgn < 0.0) {
    low = std::max(0.0, a2 - a1);
    high = std::min(s.c, s.c + a2 - a1);
  } else {
    low = std::max(0.0, a1 + a2 - s.c);
    high = std::min(s.c, a1 + a2);
  }
  if (!(high - low > 0.0)) return false;

  const double k11 = s.k(i1, i1), k22 = s.k(i2, i2), k12 = s.k(i1, i2);
  const double eta = k11 + k22 - 2.0 * k12;

  double a2_new;
  if (eta > 1e-12) {
    a2_new = std::clamp(a2 + y2 * e1_minus_e2 / eta, low, high);
  } else {
    // Flat direction: the objective is linear along the pair, move to the
    // better bound or give up when the slope vanishes.
    const double slope = y2 * e1_minus_e2;
    if (slope > 0.0)
      a2_new = high;
    else if (slope < 0.0)
      a2_new = low;
    else
      return false;
  }
  if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;

  double a1_new = a1 + sgn * (a2 - a2_new);
  double a2_fixed = a2_new;
  if (a1_new < 0.0) {  // repair fp drift without breaking the equality constraint
    a2_fixed += sgn * a1_new;
    a1_new = 0.0;
  } else if (a1_new > s.c) {
    a2_fixed += sgn * (a1_new - s.c);
    a1_new = s.c;
  }

  const double d1 = y1 * (a1_new - a1);
  const double d2 = y2 * (a2_fixed - a2);
  for (std::size_t i = 0; i < s.n(); ++i) s.u[i] += d1 * s.k(i1, i) + d2 * s.k(i2, i);
  s.alpha[i1] = a1_new;
  s.alpha[i2] = a2_fixed;
  return true;
}

double dual_objective(const SmoState& s) {
  double sum_alpha = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < s.n(); ++i) {
    sum_alpha += s.alpha[i];
    quad += s.alpha[i] * s.y[i] * s.u[i];
  }
  return sum_alpha - 0.5 * quad;
}

}  // namespace

SvmRbfModel train_svm_rbf(const LabeledDataset& train, double c, double gamma) {
  train.require_both_classes();
  if (!(c > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("svm: c and gamma must be > 0");

  std::vector<std::array<double, kFeatureCount>> points;
  points.reserve(train.rows.size());
  for (const auto& r : train.rows) points.push_back(r.features.as_array());

  SmoState s{points, {}, c, gamma, {}, {}, {}};
  const std::size_t n = points.size();
  s.y.reserve(n);
  for (const auto& r : train.rows) s.y.push_back(r.positive ? 1.0 : -1.0);
  s.kernel.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k = rbf(points[i], points[j], gamma);
      s.kernel[i * n + j] = k;
      s.kernel[j * n + i] = k;
    }
  }
  s.alpha.assign(n, 0.0);
  s.u.assign(n, 0.0);

  // Maximal-violating-pair loop: pair the strongest bias-from-below constraint
  // (largest g over the can-move-up set) with the strongest bias-from-above
  // constraint (smallest g over the can-move-down set). For such a pair the
  // joint step is admissible in the needed direction, so it always moves.
  const double eps = 1e-9 * s.c;
  int steps = 0;
  while (true) {
    std::size_t i_up = n, i_dn = n;
    double g_up = 0.0, g_dn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = s.y[i] - s.u[i];
      const bool can_up = s.y[i] > 0 ? s.alpha[i] < s.c - eps : s.alpha[i] > eps;
      const bool can_down = s.y[i] > 0 ? s.alpha[i] > eps : s.alpha[i] < s.c - eps;
      if (can_up && (i_up == n || g > g_up)) {
        g_up = g;
        i_up = i;
      }
      if (can_down && (i_dn == n || g < g_dn)) {
        g_dn = g;
        i_dn = i;
      }
    }
    if (i_up == n || i_dn == n || g_up - g_dn <= 2.0 * kKktTolerance) break;
    if (steps >= kMaxSmoSteps) {
      std::ostringstream msg;
      msg << "svm training did not converge: steps=" << steps << " kkt_gap=" << (g_up - g_dn)
          << " dual=" << dual_objective(s);
      throw TrainingError(msg.str());
    }

    // Second-order partner choice: among admissible partners below g_up, pick
    // the one with the largest objective gain (g_up - g_j)^2 / (2 eta). This
    // converges far faster than the plain maximal pair on near-singular
    // kernels while the maximal pair remains the fallback.
    std::size_t i2 = i_dn;
    {
      double best_gain = -1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i_up) continue;
        const bool can_down = s.y[j] > 0 ? s.alpha[j] > eps : s.alpha[j] < s.c - eps;
        if (!can_down) continue;
        const double g = s.y[j] - s.u[j];
        const double diff = g_up - g;
        if (diff <= 0.0) continue;
        const double eta =
            std::max(s.k(i_up, i_up) + s.k(j, j) - 2.0 * s.k(i_up, j), 1e-12);
        const double gain = diff * diff / eta;
        if (gain > best_gain) {
          best_gain = gain;
          i2 = j;
        }
      }
    }

    // E_i - E_j = g_j - g_i regardless of the bias.
    bool progressed = take_step(s, i_up, i2, (s.y[i2] - s.u[i2]) - g_up);
    if (!progressed && i2 != i_dn) progressed = take_step(s, i_up, i_dn, g_dn - g_up);
    if (!progressed) {
      // Floating-point corner: the top pair would not move. Try the most
      // violating admissible partners in violation order before giving up.
      std::vector<std::pair<double, std::size_t>> downs, ups;
      for (std::size_t j = 0; j < n; ++j) {
        const double g = s.y[j] - s.u[j];
        const bool can_up = s.y[j] > 0 ? s.alpha[j] < s.c - eps : s.alpha[j] > eps;
        const bool can_down = s.y[j] > 0 ? s.alpha[j] > eps : s.alpha[j] < s.c - eps;
        if (can_down && j != i_dn) downs.emplace_back(g, j);
        if (can_up && j != i_up) ups.emplace_back(-g, j);
      }
      std::sort(downs.begin(), downs.end());
      std::sort(ups.begin(), ups.end());
      for (std::size_t t = 0; t < downs.size() && !progressed; ++t)
        progressed = take_step(s, i_up, downs[t].second, downs[t].first - g_up);
      for (std::size_t t = 0; t < ups.size() && !progressed; ++t)
        progressed = take_step(s, ups[t].second, i_dn, g_dn - (-ups[t].first));
      if (!progressed) {
        std::ostringstream msg;
        msg << "svm training stalled: steps=" << steps << " kkt_gap=" << (g_up - g_dn)
            << " dual=" << dual_objective(s);
        throw TrainingError(msg.str());
      }
    }
    ++steps;
  }

  SvmRbfModel model;
  model.gamma = gamma;
  model.c = c;
  model.bias = bias_window(s).bias();
  model.smo_steps = steps;
  model.dual_objective = dual_objective(s);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.alpha[i] > 1e-12 * c) {
      model.support_vectors.push_back(points[i]);
      model.alpha_y.push_back(s.alpha[i] * s.y[i]);
    }
  }
  if (model.support_vectors.empty())
    throw TrainingError("svm training produced no support vectors");
  return model;
}

namespace {

std::vector<int> stratified_fold_ids(const LabeledDataset& data, int folds) {
  std::vector<int> ids(data.rows.size());
  int pos_seen = 0, neg_seen = 0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    int& seen = data.rows[i].positive ? pos_seen : neg_seen;
    ids[i] = seen % folds;
    ++seen;
  }
  return ids;
}

}  // namespace

GridSearchResult grid_search_svm(const LabeledDataset& train, std::span<const double> c_grid,
                                 std::span<const double> gamma_grid, int folds,
                                 GridObjective objective) {
  train.require_both_classes();
  if (c_grid.empty() || gamma_grid.empty())
    throw std::invalid_argument("grid search: empty hyperparameter grid");
  for (double v : c_grid)
    if (!(v > 0.0)) throw std::invalid_argument("grid search: c values must be > 0");
  for (double v : gamma_grid)
    if (!(v > 0.0)) throw std::invalid_argument("grid search: gamma values must be > 0");

  const bool use_cv = objective == GridObjective::cross_validation;
  std::vector<int> fold_ids;
  if (use_cv) {
    if (folds < 2) throw std::invalid_argument("grid search: cross-validation needs folds >= 2");
    if (train.count(true) < static_cast<std::size_t>(folds) ||
        train.count(false) < static_cast<std::size_t>(folds))
      throw std::invalid_argument("grid search: each class needs at least `folds` rows");
    fold_ids = stratified_fold_ids(train, folds);
  }

  GridSearchResult result;
  bool have_best = false;
  for (double c : c_grid) {
    for (double gamma : gamma_grid) {
      ++result.cells_evaluated;
      double score = 0.0;
      try {
        if (use_cv) {
          double fold_score_sum = 0.0;
          for (int f = 0; f < folds; ++f) {
            LabeledDataset fit, holdout;
            for (std::size_t i = 0; i < train.rows.size(); ++i)
              (fold_ids[i] == f ? holdout : fit).rows.push_back(train.rows[i]);
            const SvmRbfModel m = train_svm_rbf(fit, c, gamma);
            std::size_t correct = 0;
            for (const auto& r : holdout.rows)
              correct += classify_svm(m, r.features.as_array()) == r.positive ? 1 : 0;
            fold_score_sum += static_cast<double>(correct) / holdout.rows.size();
          }
          score = fold_score_sum / folds;
        } else {
          const SvmRbfModel m = train_svm_rbf(train, c, gamma);
          std::size_t correct = 0;
          for (const auto& r : train.rows)
            correct += classify_svm(m, r.features.as_array()) == r.positive ? 1 : 0;
          score = static_cast<double>(correct) / train.rows.size();
        }
      } catch (const TrainingError& err) {
        std::ostringstream msg;
        msg << "cell c=" << c << " gamma=" << gamma << " skipped: " << err.what();
        result.warnings.push_back(msg.str());
        continue;
      }
      const bool better =
          !have_best || score > result.best_score ||
          (score == result.best_score &&
           (c < result.best_c || (c == result.best_c && gamma < result.best_gamma)));
      if (better) {
        result.best_score = score;
        result.best_c = c;
        result.best_gamma = gamma;
        have_best = true;
      }
    }
  }
  if (!have_best) throw TrainingError("grid search: every cell failed to train");
  result.model = train_svm_rbf(train, result.best_c, result.best_gamma);
  return result;
}

}  // namespace ringscan
