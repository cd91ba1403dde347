// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfd/emd.hpp"
#include "gfd/features.hpp"
#include "gfd/signal.hpp"
#include "gfd/svm.hpp"

namespace gfd {

struct InputSpec {
  std::string path;
  std::string label;
  SignalFormat format = SignalFormat::csv;
  Index channel = 0;
  double rate_hz = 0.0;  // CSV only; WAV brings its own
};

struct PipelineConfig {
  bool synthetic = true;
  std::vector<InputSpec> inputs;  // one recording per condition when not synthetic

  Index segments_per_condition = 80;
  Index segment_len = 1250;  // synthetic stream length per condition = segments * len
  double fs_hz = 10000.0;    // synthetic only

  bool use_emd = false;
  Index imf_count = 3;  // modes fed into feature mixing
  SiftConfig sift;

  Index min_scale = 1;  // integer scale grid min_scale..max_scale
  Index max_scale = 32;
  ObjectiveKind objective = ObjectiveKind::local_gaussian_correlation;
  Index frame_n = 15;
  Index hop = 1;

  double train_fraction = 0.375;
  double svm_c = 1e3;
  std::uint64_t seed = 1;

  std::string out_dir = "out";
  int threads = 0;  // 0 = hardware concurrency
};

struct RunReport {
  SuccessReport success;
  std::string objective;
  std::string emd_mode;  // "off" or "k=<count>"
  Index feature_dim = 0;
  Index train_count = 0;
  Index test_count = 0;
  double seconds = 0.0;
  std::vector<std::string> artifact_paths;
};

/// Segments every condition, extracts one scale-distribution feature vector
/// per segment (mixed over the first imf_count modes when EMD is on), does
/// a seeded stratified train/test split, trains one-versus-all models and
/// scores them. Writes features CSV, model JSON, per-condition trace CSVs
/// and scalogram SVGs, the report, and a config echo into out_dir.
RunReport run_pipeline(const PipelineConfig& cfg);

/// Regenerates demo signal 1 (two steady tones) or 2 (tone plus chirp),
/// decomposes it, and writes scalogram plus scale-trace artifacts for the
/// composite and its first two modes: six SVGs and six CSVs.
std::vector<std::string> run_examples(int which, const std::string& out_dir);

struct ObjectiveComparison {
  std::vector<RunReport> runs;  // lgc, dot, ndot order
  std::string table_text;
};

/// Runs the pipeline once per objective on identical seeded splits and
/// merges the reports into one table (written under out_dir too).
ObjectiveComparison compare_objectives(const PipelineConfig& cfg);

}  // namespace gfd
