// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gfd/features.hpp"
#include "gfd/types.hpp"

namespace gfd {

struct TrainingSet {
  Mat x;  // one example per row
  Vec y;  // +1 or -1 per example
};

/// Validates labels (+1/-1 only, both present) and shape.
TrainingSet make_training_set(Mat x, Vec y);

struct LinearSvmModel {
  Vec w;
  double b = 0.0;
  Vec alphas;  // one multiplier per training example, in training order
  Mat support_x;
  Vec support_v;  // alpha_i * y_i for the support vectors
  std::vector<Index> support_indices;
  double c_used = 0.0;
  Index passes = 0;         // pairwise steps the solver spent
  double kkt_violation = 0.0;
};

/// Maximizes the soft-margin dual with box constraint C by pairwise
/// coordinate ascent over the most violating pair, keeping sum(alpha_i y_i)
/// = 0 throughout. Stops once some bias satisfies every margin condition to
/// within tol; throws ConvergenceError if no pair can move before then or
/// the step cap runs out.
LinearSvmModel train_binary(const TrainingSet& ts, double C = 1e3, double tol = 1e-4);

/// Pre-sign decision value: the dual form sum_i v_i (x_i . x) + b when the
/// model still carries its support vectors, w.x + b after deserialization.
/// The two agree to solver precision.
double decision(const LinearSvmModel& m, VecView x);

/// sign(decision); an exact zero counts as +1.
int classify(const LinearSvmModel& m, VecView x);

struct MulticlassModel {
  std::vector<std::string> class_names;
  std::vector<LinearSvmModel> models;  // one-versus-all, one per class
};

/// One binary model per class: that class against everything else.
MulticlassModel train_ova(const std::vector<FeatureVector>& features,
                          const std::vector<std::string>& classes, double C = 1e3,
                          double tol = 1e-4);

/// Class with the largest decision value; ties go to the earlier class.
std::string predict_ova(const MulticlassModel& mm, VecView x);

struct ClassStats {
  std::string name;
  double train_binary_pct = 0.0;  // one-vs-all accuracy of this class's model
  double test_binary_pct = 0.0;
  double train_recall_pct = 0.0;  // multiclass recall on this class's examples
  double test_recall_pct = 0.0;
};

struct SuccessReport {
  std::vector<ClassStats> per_class;
  double train_overall_pct = 0.0;
  double test_overall_pct = 0.0;
};

SuccessReport success_metrics(const MulticlassModel& mm, const std::vector<FeatureVector>& train,
                              const std::vector<FeatureVector>& test);

}  // namespace gfd
