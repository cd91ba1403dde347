// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gfd/cwt.hpp"
#include "gfd/types.hpp"

namespace gfd {

enum class ObjectiveKind { normalized_dot, dot_product, local_gaussian_correlation };

/// "ndot", "dot" or "lgc".
std::string objective_name(ObjectiveKind kind);
/// Inverse of objective_name; unknown names raise ConfigError.
ObjectiveKind parse_objective(const std::string& name);

/// Gaussian width that puts the frame's edge samples at one percent
/// participation: tau = n / sqrt(2 ln 10).
double gaussian_tau(Index n);

/// Weights w_i = exp(-(i - (n+1))^2 / tau^2) for i = 1..2n+1. Center weight
/// is 1, both edges land on 0.01.
Vec gaussian_weights(Index n);

struct FrameObjective {
  ObjectiveKind kind = ObjectiveKind::local_gaussian_correlation;
  Index half_width_n = 15;  // frame holds 2n+1 samples
  double tau = 0.0;         // set for local_gaussian_correlation
  Vec weights;              // cached frame weights, all ones unless Gaussian

  static FrameObjective make(ObjectiveKind kind, Index n);
};

/// Similarity between a signal frame X and its wavelet-coefficient frame C.
///   normalized_dot: cosine of the raw vectors, in [-1, 1]; a zero-norm
///     vector raises UndefinedCosineError.
///   dot_product / local_gaussian_correlation: sum of w_i (x_i - mean(X)) *
///     (c_i - mean(C)); a constant X or C gives exactly 0.
double frame_similarity(VecView X, VecView C, const FrameObjective& obj);

struct ScaleTrace {
  std::vector<Index> centers;
  Vec selected_scales;
  Vec objective_values;
};

/// For every frame center b = n, n+hop, ... up to len-1-n, picks the grid
/// scale whose coefficient frame maximizes the objective. Ties go to the
/// smallest scale; frames where normalized_dot is undefined score 0.
ScaleTrace select_scales(VecView x, const Scalogram& scg, const FrameObjective& obj, Index hop = 1);

struct FeatureVector {
  Vec levels;  // non-negative, sums to 1
  std::string label;
  std::string provenance;  // "raw-signal" or "imf-mixed(k)"
};

/// Normalized histogram of the trace's selected scales over the grid.
FeatureVector scale_distribution(const ScaleTrace& tr, const ScaleGrid& grid,
                                 std::string label = {});

/// Elementwise mean of one feature vector per mode.
FeatureVector mix_imf_features(const std::vector<FeatureVector>& per_imf);

}  // namespace gfd
