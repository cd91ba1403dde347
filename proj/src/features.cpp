// SPDX-License-Identifier: Apache-2.0
#include "gfd/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gfd/errors.hpp"

namespace gfd {

std::string objective_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::normalized_dot: return "ndot";
    case ObjectiveKind::dot_product: return "dot";
    case ObjectiveKind::local_gaussian_correlation: return "lgc";
  }
  throw std::invalid_argument("unknown objective kind");
}

ObjectiveKind parse_objective(const std::string& name) {
  if (name == "ndot") return ObjectiveKind::normalized_dot;
  if (name == "dot") return ObjectiveKind::dot_product;
  if (name == "lgc") return ObjectiveKind::local_gaussian_correlation;
  throw ConfigError("unknown objective '" + name + "' (expected lgc, dot or ndot)");
}

double gaussian_tau(Index n) {
  if (n < 1) throw std::invalid_argument("frame half-width must be at least 1");
  return static_cast<double>(n) / std::sqrt(2.0 * std::log(10.0));
}

Vec gaussian_weights(Index n) {
  const double tau = gaussian_tau(n);
  Vec w(2 * n + 1);
  for (Index i = 1; i <= 2 * n + 1; ++i) {
    const double d = static_cast<double>(i - (n + 1));
    w[i - 1] = std::exp(-d * d / (tau * tau));
  }
  return w;
}

FrameObjective FrameObjective::make(ObjectiveKind kind, Index n) {
  if (n < 1) throw std::invalid_argument("frame half-width must be at least 1");
  FrameObjective obj;
  obj.kind = kind;
  obj.half_width_n = n;
  if (kind == ObjectiveKind::local_gaussian_correlation) {
    obj.tau = gaussian_tau(n);
    obj.weights = gaussian_weights(n);
  } else {
    obj.tau = 0.0;
    obj.weights = Vec::Ones(2 * n + 1);
  }
  return obj;
}

double frame_similarity(VecView X, VecView C, const FrameObjective& obj) {
  const Index len = 2 * obj.half_width_n + 1;
  if (X.size() != len || C.size() != len) {
    throw std::invalid_argument("frame length must be 2n+1");
  }

  if (obj.kind == ObjectiveKind::normalized_dot) {
    const double nx = X.norm();
    const double nc = C.norm();
    if (nx == 0.0 || nc == 0.0) throw UndefinedCosineError("cosine against a zero-norm frame");
    const double cosine = X.dot(C) / (nx * nc);
    return std::clamp(cosine, -1.0, 1.0);
  }

  // A constant frame has zero deviations; report exact zero rather than the
  // rounding dust the mean subtraction would leave.
  if (X.maxCoeff() == X.minCoeff() || C.maxCoeff() == C.minCoeff()) return 0.0;

  const double x_mean = X.mean();
  const double c_mean = C.mean();
  double acc = 0.0;
  for (Index i = 0; i < len; ++i) {
    acc += obj.weights[i] * (X[i] - x_mean) * (C[i] - c_mean);
  }
  return acc;
}

ScaleTrace select_scales(VecView x, const Scalogram& scg, const FrameObjective& obj, Index hop) {
  if (hop < 1) throw std::invalid_argument("hop must be at least 1");
  if (x.size() != scg.signal_len) throw std::invalid_argument("scalogram belongs to another signal");
  const Index n = obj.half_width_n;
  const Index len = x.size();
  if (len < 2 * n + 1) throw std::invalid_argument("signal shorter than one frame");

  ScaleTrace tr;
  for (Index b = n; b + n < len; b += hop) tr.centers.push_back(b);
  tr.selected_scales.resize(static_cast<Index>(tr.centers.size()));
  tr.objective_values.resize(static_cast<Index>(tr.centers.size()));

  const Index frame = 2 * n + 1;
  Vec coeff_frame(frame);
  for (std::size_t ci = 0; ci < tr.centers.size(); ++ci) {
    const Index b = tr.centers[ci];
    const auto x_frame = x.segment(b - n, frame);
    Index best_row = 0;
    double best_score = 0.0;
    bool have_score = false;
    for (Index row = 0; row < scg.grid.size(); ++row) {
      coeff_frame = scg.coefficients.row(row).segment(b - n, frame);
      double score;
      try {
        score = frame_similarity(x_frame, coeff_frame, obj);
      } catch (const UndefinedCosineError&) {
        score = 0.0;
      }
      if (!have_score || score > best_score) {
        have_score = true;
        best_score = score;
        best_row = row;
      }
    }
    tr.selected_scales[static_cast<Index>(ci)] = scg.grid.scales[best_row];
    tr.objective_values[static_cast<Index>(ci)] = best_score;
  }
  return tr;
}

FeatureVector scale_distribution(const ScaleTrace& tr, const ScaleGrid& grid, std::string label) {
  if (tr.centers.empty()) throw std::invalid_argument("empty scale trace");
  Vec counts = Vec::Zero(grid.size());
  for (Index i = 0; i < tr.selected_scales.size(); ++i) {
    const Index bin = grid.index_of(tr.selected_scales[i]);
    if (bin < 0) throw std::invalid_argument("trace contains a scale outside the grid");
    counts[bin] += 1.0;
  }
  FeatureVector fv;
  fv.levels = counts / counts.sum();
  fv.label = std::move(label);
  fv.provenance = "raw-signal";
  return fv;
}

FeatureVector mix_imf_features(const std::vector<FeatureVector>& per_imf) {
  if (per_imf.empty()) throw std::invalid_argument("no feature vectors to mix");
  const Index dim = per_imf.front().levels.size();
  Vec acc = Vec::Zero(dim);
  for (const FeatureVector& fv : per_imf) {
    if (fv.levels.size() != dim) throw std::invalid_argument("mixed feature lengths differ");
    acc += fv.levels;
  }
  FeatureVector fv;
  fv.levels = acc / static_cast<double>(per_imf.size());
  fv.label = per_imf.front().label;
  fv.provenance = "imf-mixed(" + std::to_string(per_imf.size()) + ")";
  return fv;
}

}  // namespace gfd
