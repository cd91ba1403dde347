// SPDX-License-Identifier: Apache-2.0
#include "gfd/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <utility>

#include "gfd/cwt.hpp"
#include "gfd/errors.hpp"
#include "gfd/io.hpp"
#include "gfd/parallel.hpp"
#include "gfd/rng.hpp"
#include "gfd/textio.hpp"

namespace gfd {
namespace {

namespace fs = std::filesystem;

void validate(const PipelineConfig& cfg) {
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  }
  if (cfg.min_scale < 1) throw ConfigError("scale grid must start at 1 or above");
  if (cfg.max_scale < cfg.min_scale + 1) throw ConfigError("scale grid needs at least two levels");
  if (cfg.use_emd && cfg.imf_count < 1) throw ConfigError("imf count must be at least 1");
  if (cfg.frame_n < 1) throw ConfigError("frame half-width must be at least 1");
  if (cfg.hop < 1) throw ConfigError("hop must be at least 1");
  if (!(cfg.svm_c > 0.0)) throw ConfigError("svm C must be positive");
  if (cfg.segments_per_condition < 1) throw ConfigError("need at least one segment per condition");
  if (cfg.synthetic && cfg.segment_len < 2 * cfg.frame_n + 1) {
    throw ConfigError("segment length must cover at least one frame");
  }
  if (!cfg.synthetic && cfg.inputs.empty()) throw ConfigError("no input recordings given");
}

std::string emd_mode_name(const PipelineConfig& cfg) {
  return cfg.use_emd ? "k=" + std::to_string(cfg.imf_count) : "off";
}

std::string run_heading(const PipelineConfig& cfg) {
  return "objective=" + objective_name(cfg.objective) + " emd=" + emd_mode_name(cfg) +
         " seed=" + std::to_string(cfg.seed);
}

std::vector<SegmentSet> gather_segments(const PipelineConfig& cfg) {
  if (cfg.synthetic) {
    return generate_gear_dataset(default_gear_conditions(), cfg.segments_per_condition,
                                 cfg.segment_len, cfg.fs_hz, cfg.seed);
  }
  std::vector<SegmentSet> sets;
  for (const InputSpec& in : cfg.inputs) {
    const Signal s = load_signal(in.path, in.format, in.channel, in.rate_hz);
    sets.push_back(
        split_segments(s, cfg.segments_per_condition, in.label.empty() ? in.path : in.label));
  }
  return sets;
}

FeatureVector segment_features(const Signal& seg, const std::string& label,
                               const PipelineConfig& cfg, const ScaleGrid& grid,
                               const FrameObjective& obj) {
  auto distribution_of = [&](const Signal& s) {
    const Scalogram scg = cwt(s, grid);
    const ScaleTrace tr = select_scales(s.samples, scg, obj, cfg.hop);
    return scale_distribution(tr, grid, label);
  };

  if (!cfg.use_emd) return distribution_of(seg);

  const ImfSet modes = decompose(seg, cfg.sift);
  std::vector<FeatureVector> per_imf;
  const Index k = std::min<Index>(cfg.imf_count, static_cast<Index>(modes.imfs.size()));
  for (Index i = 0; i < k; ++i) {
    per_imf.push_back(distribution_of(make_signal(modes.imfs[i], seg.sample_rate_hz)));
  }
  // A segment with no oscillatory mode falls back to its raw samples.
  if (per_imf.empty()) per_imf.push_back(distribution_of(seg));
  return mix_imf_features(per_imf);
}

void write_config_echo(const PipelineConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write " + path);
  out << "synthetic=" << (cfg.synthetic ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < cfg.inputs.size(); ++i) {
    const InputSpec& in = cfg.inputs[i];
    out << "input." << i << ".path=" << in.path << '\n';
    out << "input." << i << ".label=" << in.label << '\n';
    out << "input." << i << ".format=" << (in.format == SignalFormat::csv ? "csv" : "wav") << '\n';
    out << "input." << i << ".channel=" << in.channel << '\n';
    out << "input." << i << ".rate_hz=" << format_double(in.rate_hz) << '\n';
  }
  out << "segments=" << cfg.segments_per_condition << '\n';
  out << "segment_len=" << cfg.segment_len << '\n';
  out << "fs_hz=" << format_double(cfg.fs_hz) << '\n';
  out << "emd=" << (cfg.use_emd ? "true" : "false") << '\n';
  out << "imfs=" << cfg.imf_count << '\n';
  out << "sd_threshold=" << format_double(cfg.sift.sd_threshold) << '\n';
  out << "max_sift_iters=" << cfg.sift.max_sift_iters << '\n';
  out << "max_imfs=" << cfg.sift.max_imfs << '\n';
  out << "boundary=" << (cfg.sift.boundary == BoundaryPolicy::mirror ? "mirror" : "clamp") << '\n';
  out << "residual_range_floor=" << format_double(cfg.sift.residual_range_floor) << '\n';
  out << "scale_min=" << cfg.min_scale << '\n';
  out << "scales=" << cfg.max_scale << '\n';
  out << "objective=" << objective_name(cfg.objective) << '\n';
  out << "frame_n=" << cfg.frame_n << '\n';
  out << "hop=" << cfg.hop << '\n';
  out << "train_frac=" << format_double(cfg.train_fraction) << '\n';
  out << "svm_c=" << format_double(cfg.svm_c) << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "threads=" << cfg.threads << '\n';
  out.flush();
  if (!out) throw FileError("write failed for " + path);
}

}  // namespace

RunReport run_pipeline(const PipelineConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.out_dir);

  const std::vector<SegmentSet> sets = gather_segments(cfg);

  // Conditions sharing a label pool into one class, first appearance wins.
  std::vector<std::string> class_names;
  std::vector<std::size_t> class_of_set(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const std::string& label = sets[s].source_label;
    std::size_t c = 0;
    while (c < class_names.size() && class_names[c] != label) ++c;
    if (c == class_names.size()) class_names.push_back(label);
    class_of_set[s] = c;
  }

  const ScaleGrid grid = ScaleGrid::integer_range(cfg.min_scale, cfg.max_scale);
  const FrameObjective obj = FrameObjective::make(cfg.objective, cfg.frame_n);

  struct Item {
    const Signal* seg;
    std::size_t class_idx;
  };
  std::vector<Item> items;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (const Signal& seg : sets[s].segments) items.push_back({&seg, class_of_set[s]});
  }

  std::vector<FeatureVector> feats(items.size());
  parallel_for(
      static_cast<Index>(items.size()),
      [&](Index i) {
        const Item& it = items[static_cast<std::size_t>(i)];
        feats[static_cast<std::size_t>(i)] =
            segment_features(*it.seg, class_names[it.class_idx], cfg, grid, obj);
      },
      cfg.threads);

  // Seeded stratified split: shuffle each class and take the first
  // floor(fraction * count) for training.
  std::vector<FeatureVector> train, test;
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].class_idx == c) idx.push_back(i);
    }
    std::mt19937_64 eng(mix_seed(cfg.seed, 0x10000 + c));
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(eng() % (i + 1));
      std::swap(idx[i], idx[j]);
    }
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(cfg.train_fraction * static_cast<double>(idx.size())));
    if (n_train == 0 || n_train == idx.size()) {
      throw ConfigError("train fraction leaves an empty split for class '" + class_names[c] + "'");
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
      (i < n_train ? train : test).push_back(feats[idx[i]]);
    }
  }

  const MulticlassModel mm = train_ova(train, class_names, cfg.svm_c);

  RunReport rep;
  rep.success = success_metrics(mm, train, test);
  rep.objective = objective_name(cfg.objective);
  rep.emd_mode = emd_mode_name(cfg);
  rep.feature_dim = grid.size();
  rep.train_count = static_cast<Index>(train.size());
  rep.test_count = static_cast<Index>(test.size());

  auto artifact = [&](const std::string& name) {
    std::string p = (fs::path(cfg.out_dir) / name).string();
    rep.artifact_paths.push_back(p);
    return p;
  };

  write_features_csv(feats, artifact("features.csv"));
  save_model_json(mm, artifact("model.json"));

  for (std::size_t s = 0; s < sets.size(); ++s) {
    const std::string& label = sets[s].source_label;
    const Signal& first = sets[s].segments.front();
    const Scalogram scg = cwt(first, grid);
    const ScaleTrace tr = select_scales(first.samples, scg, obj, cfg.hop);
    write_heatmap_svg(scg, &tr, label + ": |W| and selected scales",
                      artifact("scalogram_" + label + ".svg"));
    write_trace_csv(tr, artifact("trace_" + label + ".csv"));
    if (cfg.use_emd) {
      write_imfset_csv(decompose(first, cfg.sift), artifact("imfs_" + label + ".csv"));
    }
  }

  const std::string heading = run_heading(cfg);
  {
    std::ofstream out(artifact("report.txt"));
    if (!out) throw FileError("cannot write report.txt");
    out << success_table_text(heading, rep.success);
  }
  {
    std::ofstream out(artifact("report.csv"));
    if (!out) throw FileError("cannot write report.csv");
    out << "run,class,split,metric,value\n" << success_table_csv(heading, rep.success);
  }
  write_config_echo(cfg, artifact("config_echo.ini"));

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<std::string> run_examples(int which, const std::string& out_dir) {
  if (which != 1 && which != 2) throw ConfigError("example id must be 1 or 2");
  fs::create_directories(out_dir);

  const double fs_hz = 1000.0;
  const ComponentMix mix =
      which == 1 ? generate_example1(3.0, fs_hz) : generate_example2(1.0, fs_hz);
  const ImfSet modes = decompose(mix.y, SiftConfig{});

  const ScaleGrid grid = ScaleGrid::integer_range(64);
  const FrameObjective obj = FrameObjective::make(ObjectiveKind::local_gaussian_correlation, 15);

  std::vector<std::pair<std::string, const Vec*>> series;
  series.emplace_back("y", &mix.y.samples);
  if (!modes.imfs.empty()) series.emplace_back("imf1", &modes.imfs[0]);
  if (modes.imfs.size() > 1) series.emplace_back("imf2", &modes.imfs[1]);

  std::vector<std::string> paths;
  const std::string stem = "example" + std::to_string(which) + "_";
  for (const auto& [name, samples] : series) {
    const Signal s = make_signal(*samples, fs_hz);
    const Scalogram scg = cwt(s, grid);
    const ScaleTrace tr = select_scales(s.samples, scg, obj, 1);

    const std::string base = (fs::path(out_dir) / (stem + name)).string();
    write_scalogram_csv(scg, base + "_scalogram.csv");
    write_heatmap_svg(scg, &tr, stem + name + ": |W| and selected scales",
                      base + "_scalogram.svg");
    write_trace_csv(tr, base + "_trace.csv");
    write_trace_svg(tr, grid, stem + name + ": selected scale per frame", base + "_trace.svg");
    paths.push_back(base + "_scalogram.csv");
    paths.push_back(base + "_scalogram.svg");
    paths.push_back(base + "_trace.csv");
    paths.push_back(base + "_trace.svg");
  }
  return paths;
}

ObjectiveComparison compare_objectives(const PipelineConfig& cfg) {
  validate(cfg);
  fs::create_directories(cfg.out_dir);

  ObjectiveComparison cmp;
  std::string csv = "run,class,split,metric,value\n";
  for (ObjectiveKind kind : {ObjectiveKind::local_gaussian_correlation, ObjectiveKind::dot_product,
                             ObjectiveKind::normalized_dot}) {
    PipelineConfig sub = cfg;
    sub.objective = kind;
    sub.out_dir = (fs::path(cfg.out_dir) / objective_name(kind)).string();
    RunReport rep = run_pipeline(sub);
    cmp.table_text += success_table_text(run_heading(sub), rep.success) + "\n";
    csv += success_table_csv(run_heading(sub), rep.success);
    cmp.runs.push_back(std::move(rep));
  }

  {
    std::ofstream out((fs::path(cfg.out_dir) / "comparison.txt").string());
    if (!out) throw FileError("cannot write comparison.txt");
    out << cmp.table_text;
  }
  {
    std::ofstream out((fs::path(cfg.out_dir) / "comparison.csv").string());
    if (!out) throw FileError("cannot write comparison.csv");
    out << csv;
  }
  return cmp;
}

}  // namespace gfd
