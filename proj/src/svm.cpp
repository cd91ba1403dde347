// SPDX-License-Identifier: Apache-2.0
#include "gfd/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gfd/errors.hpp"

namespace gfd {

TrainingSet make_training_set(Mat x, Vec y) {
  if (x.rows() != y.size()) throw std::invalid_argument("example/label count mismatch");
  if (x.rows() < 2 || x.cols() < 1) throw std::invalid_argument("need at least two examples");
  bool pos = false, neg = false;
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1.0) {
      pos = true;
    } else if (y[i] == -1.0) {
      neg = true;
    } else {
      throw std::invalid_argument("labels must be +1 or -1");
    }
  }
  if (!pos || !neg) throw std::invalid_argument("need at least one example of each label");
  return TrainingSet{std::move(x), std::move(y)};
}

namespace {

struct Solver {
  const Mat& x;
  const Vec& y;
  const double c;
  Mat k;      // Gram matrix
  Vec alpha;
  Vec err;    // f(x_i) - y_i under the current multipliers and bias
  double bias = 0.0;

  Solver(const TrainingSet& ts, double box)
      : x(ts.x), y(ts.y), c(box), k(ts.x * ts.x.transpose()), alpha(Vec::Zero(ts.x.rows())),
        err(-ts.y) {}

  bool take_step(Index i, Index j) {
    if (i == j) return false;
    const double ai = alpha[i], aj = alpha[j];
    const double s = y[i] * y[j];
    double lo, hi;
    if (s < 0.0) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(c, c + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - c);
      hi = std::min(c, ai + aj);
    }
    if (lo >= hi) return false;
    const double eta = k(i, i) + k(j, j) - 2.0 * k(i, j);

    double aj_new;
    if (eta > 0.0) {
      aj_new = std::clamp(aj + y[j] * (err[i] - err[j]) / eta, lo, hi);
    } else {
      // Flat (duplicate points) or numerically concave direction: the dual
      // is linear along it, so the best feasible point is a box end.
      const double slope = y[j] * (err[i] - err[j]);
      const double gain_lo = slope * (lo - aj) - 0.5 * eta * (lo - aj) * (lo - aj);
      const double gain_hi = slope * (hi - aj) - 0.5 * eta * (hi - aj) * (hi - aj);
      if (std::max(gain_lo, gain_hi) <= 0.0) return false;
      aj_new = gain_lo > gain_hi ? lo : hi;
    }
    if (std::abs(aj_new - aj) < 1e-12 * (aj_new + aj + 1e-12)) return false;
    double ai_new = std::clamp(ai + s * (aj - aj_new), 0.0, c);

    const double di = y[i] * (ai_new - ai);
    const double dj = y[j] * (aj_new - aj);
    const double b1 = bias - err[i] - di * k(i, i) - dj * k(i, j);
    const double b2 = bias - err[j] - di * k(i, j) - dj * k(j, j);
    double bias_new;
    if (ai_new > 0.0 && ai_new < c) {
      bias_new = b1;
    } else if (aj_new > 0.0 && aj_new < c) {
      bias_new = b2;
    } else {
      bias_new = 0.5 * (b1 + b2);
    }

    err += di * k.col(i) + dj * k.col(j) + Vec::Constant(err.size(), bias_new - bias);
    bias = bias_new;
    alpha[i] = ai_new;
    alpha[j] = aj_new;
    return true;
  }

  // The bias value that would put example i exactly on its margin. Each
  // index bounds the admissible bias from below (up set: y=+1 free to grow,
  // y=-1 free to shrink) or above (down set, mirrored); the multipliers are
  // optimal exactly when the two sets still leave a non-empty interval.
  double pivot(Index i) const { return bias - err[i]; }

  // Clipped steps can leave a multiplier a few ulps shy of a bound, too
  // close for any later step to finish the move but far enough to keep the
  // index selectable. Membership therefore uses a small relative window.
  bool at_lower(Index i) const { return alpha[i] <= 1e-8 * c; }
  bool at_upper(Index i) const { return alpha[i] >= c - 1e-8 * c; }

  bool in_up_set(Index i) const {
    return (y[i] > 0.0 && !at_upper(i)) || (y[i] < 0.0 && !at_lower(i));
  }
  bool in_down_set(Index i) const {
    return (y[i] > 0.0 && !at_lower(i)) || (y[i] < 0.0 && !at_upper(i));
  }
};

}  // namespace

LinearSvmModel train_binary(const TrainingSet& ts, double C, double tol) {
  if (!(C > 0.0)) throw std::invalid_argument("box constraint must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  constexpr Index kMaxSteps = 100000;
  Solver sv(ts, C);
  const Index l = ts.x.rows();

  Index steps = 0;
  for (;; ++steps) {
    // The pair steps only ever see error differences, so the running bias
    // cancels out of everything below; convergence is judged bias-free.
    Index up = -1, down = -1;
    double b_lo = -std::numeric_limits<double>::infinity();
    double b_hi = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < l; ++i) {
      const double g = sv.pivot(i);
      if (sv.in_up_set(i) && g > b_lo) {
        b_lo = g;
        up = i;
      }
      if (sv.in_down_set(i) && g < b_hi) {
        b_hi = g;
        down = i;
      }
    }
    const double half_gap = 0.5 * (b_lo - b_hi);
    if (up < 0 || down < 0 || half_gap <= tol) break;
    if (steps >= kMaxSteps) throw ConvergenceError("dual solver hit its step cap", half_gap);

    // Second-order partner choice: among the admissible down-set indices,
    // take the one promising the largest dual gain against the worst
    // violator. Falls back to the plain extreme pair, then a full sweep.
    Index partner = -1;
    double best_gain = -1.0;
    for (Index j = 0; j < l; ++j) {
      if (!sv.in_down_set(j)) continue;
      const double g = sv.pivot(j);
      if (g >= b_lo) continue;
      double eta = sv.k(up, up) + sv.k(j, j) - 2.0 * sv.k(up, j);
      if (eta < 1e-12) eta = 1e-12;
      const double gain = (b_lo - g) * (b_lo - g) / (2.0 * eta);
      if (gain > best_gain) {
        best_gain = gain;
        partner = j;
      }
    }
    if (partner >= 0 && (sv.take_step(up, partner) || sv.take_step(partner, up))) continue;
    if (sv.take_step(up, down) || sv.take_step(down, up)) continue;
    bool moved = false;
    for (Index i = 0; i < l && !moved; ++i) {
      for (Index j = i + 1; j < l && !moved; ++j) {
        moved = sv.take_step(i, j) || sv.take_step(j, i);
      }
    }
    if (!moved) throw ConvergenceError("dual solver stalled", half_gap);
  }

  LinearSvmModel m;
  m.alphas = sv.alpha;
  m.c_used = C;
  m.passes = steps;
  m.w = ts.x.transpose() * sv.alpha.cwiseProduct(ts.y);

  // Untouched multipliers stay exactly zero, so any positive value marks a
  // genuine support vector; the floor only guards the margin average for b.
  const double sv_floor = 1e-7 * C;
  double b_sum = 0.0;
  Index b_count = 0;
  for (Index i = 0; i < l; ++i) {
    if (m.alphas[i] > 0.0) m.support_indices.push_back(i);
    if (m.alphas[i] > sv_floor && m.alphas[i] < C - sv_floor) {
      b_sum += ts.y[i] - m.w.dot(ts.x.row(i));
      ++b_count;
    }
  }
  if (b_count > 0) {
    m.b = b_sum / static_cast<double>(b_count);
  } else {
    // Every multiplier sits at a bound: place the bias at the hinge-loss
    // minimizing breakpoint, lowest value on ties.
    double best_loss = std::numeric_limits<double>::infinity();
    double best_b = 0.0;
    for (Index i = 0; i < l; ++i) {
      const double cand = ts.y[i] - m.w.dot(ts.x.row(i));
      double loss = 0.0;
      for (Index j = 0; j < l; ++j) {
        loss += std::max(0.0, 1.0 - ts.y[j] * (m.w.dot(ts.x.row(j)) + cand));
      }
      if (loss < best_loss - 1e-12 || (std::abs(loss - best_loss) <= 1e-12 && cand < best_b)) {
        best_loss = loss;
        best_b = cand;
      }
    }
    m.b = best_b;
  }

  const Index n_sv = static_cast<Index>(m.support_indices.size());
  m.support_x.resize(n_sv, ts.x.cols());
  m.support_v.resize(n_sv);
  for (Index s = 0; s < n_sv; ++s) {
    const Index i = m.support_indices[static_cast<std::size_t>(s)];
    m.support_x.row(s) = ts.x.row(i);
    m.support_v[s] = m.alphas[i] * ts.y[i];
  }

  double kkt = 0.0;
  for (Index i = 0; i < l; ++i) {
    const double margin = ts.y[i] * (m.w.dot(ts.x.row(i)) + m.b);
    if (m.alphas[i] < C - sv_floor) kkt = std::max(kkt, 1.0 - margin);
  }
  m.kkt_violation = std::max(kkt, 0.0);
  return m;
}

double decision(const LinearSvmModel& m, VecView x) {
  if (x.size() != m.w.size()) throw std::invalid_argument("feature dimension mismatch");
  // Deserialized models carry only (w, b); freshly trained ones answer in
  // the dual form, which agrees with w.x + b to solver precision.
  if (m.support_v.size() == 0) return m.w.dot(x) + m.b;
  return m.support_v.dot(m.support_x * x) + m.b;
}

int classify(const LinearSvmModel& m, VecView x) { return decision(m, x) >= 0.0 ? 1 : -1; }

namespace {

TrainingSet one_vs_all_set(const std::vector<FeatureVector>& features, const std::string& positive) {
  const Index l = static_cast<Index>(features.size());
  const Index d = features.front().levels.size();
  Mat x(l, d);
  Vec y(l);
  for (Index i = 0; i < l; ++i) {
    const FeatureVector& fv = features[static_cast<std::size_t>(i)];
    if (fv.levels.size() != d) throw std::invalid_argument("feature dimensions differ");
    x.row(i) = fv.levels;
    y[i] = fv.label == positive ? 1.0 : -1.0;
  }
  return make_training_set(std::move(x), std::move(y));
}

}  // namespace

MulticlassModel train_ova(const std::vector<FeatureVector>& features,
                          const std::vector<std::string>& classes, double C, double tol) {
  if (classes.size() < 2) throw std::invalid_argument("need at least two classes");
  if (features.empty()) throw std::invalid_argument("no training features");
  for (const std::string& c : classes) {
    const bool seen = std::any_of(features.begin(), features.end(),
                                  [&](const FeatureVector& fv) { return fv.label == c; });
    if (!seen) throw std::invalid_argument("class '" + c + "' has no training examples");
  }

  MulticlassModel mm;
  mm.class_names = classes;
  mm.models.reserve(classes.size());
  for (const std::string& c : classes) {
    mm.models.push_back(train_binary(one_vs_all_set(features, c), C, tol));
  }
  return mm;
}

std::string predict_ova(const MulticlassModel& mm, VecView x) {
  if (mm.models.empty()) throw std::invalid_argument("empty model");
  std::size_t best = 0;
  double best_val = decision(mm.models[0], x);
  for (std::size_t c = 1; c < mm.models.size(); ++c) {
    const double val = decision(mm.models[c], x);
    if (val > best_val) {
      best_val = val;
      best = c;
    }
  }
  return mm.class_names[best];
}

namespace {

double pct(Index hits, Index total) {
  return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

SuccessReport success_metrics(const MulticlassModel& mm, const std::vector<FeatureVector>& train,
                              const std::vector<FeatureVector>& test) {
  if (train.empty() || test.empty()) throw std::invalid_argument("empty evaluation split");

  SuccessReport rep;
  for (std::size_t c = 0; c < mm.class_names.size(); ++c) {
    const std::string& name = mm.class_names[c];
    const LinearSvmModel& model = mm.models[c];
    ClassStats st;
    st.name = name;

    for (int which = 0; which < 2; ++which) {
      const auto& split = which == 0 ? train : test;
      Index bin_hits = 0;
      Index class_total = 0, class_hits = 0;
      for (const FeatureVector& fv : split) {
        const int want = fv.label == name ? 1 : -1;
        if (classify(model, fv.levels) == want) ++bin_hits;
        if (fv.label == name) {
          ++class_total;
          if (predict_ova(mm, fv.levels) == name) ++class_hits;
        }
      }
      const double bin = pct(bin_hits, static_cast<Index>(split.size()));
      const double rec = class_total > 0 ? pct(class_hits, class_total) : 0.0;
      if (which == 0) {
        st.train_binary_pct = bin;
        st.train_recall_pct = rec;
      } else {
        st.test_binary_pct = bin;
        st.test_recall_pct = rec;
      }
    }
    rep.per_class.push_back(std::move(st));
  }

  Index train_hits = 0, test_hits = 0;
  for (const FeatureVector& fv : train) {
    if (predict_ova(mm, fv.levels) == fv.label) ++train_hits;
  }
  for (const FeatureVector& fv : test) {
    if (predict_ova(mm, fv.levels) == fv.label) ++test_hits;
  }
  rep.train_overall_pct = pct(train_hits, static_cast<Index>(train.size()));
  rep.test_overall_pct = pct(test_hits, static_cast<Index>(test.size()));
  return rep;
}

}  // namespace gfd
