// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gfd/errors.hpp"
#include "gfd/io.hpp"
#include "gfd/pipeline.hpp"

namespace {

struct CommonOpts {
  gfd::PipelineConfig cfg;
  std::string objective = "lgc";
  std::string boundary = "mirror";
  bool force_synthetic = false;
  std::vector<std::string> inputs;
  std::string input_format = "csv";
  gfd::Index channel = 0;
  double rate_hz = 0.0;
};

void add_pipeline_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_flag("--synthetic", o.force_synthetic,
                "use the built-in synthetic gear dataset (default when no --input)");
  cmd->add_option("--input", o.inputs, "recording to analyze, path or path:label; repeatable");
  cmd->add_option("--format", o.input_format, "input file format")
      ->check(CLI::IsMember({"csv", "wav"}));
  cmd->add_option("--rate", o.rate_hz, "sample rate in Hz for CSV inputs");
  cmd->add_option("--channel", o.channel, "channel index for multi-channel inputs");
  cmd->add_option("--segments", o.cfg.segments_per_condition, "segments per condition");
  cmd->add_option("--segment-len", o.cfg.segment_len, "synthetic segment length in samples");
  cmd->add_option("--fs", o.cfg.fs_hz, "synthetic sample rate in Hz");
  cmd->add_flag("--emd", o.cfg.use_emd, "decompose each segment and mix per-mode features");
  cmd->add_option("--imfs", o.cfg.imf_count, "modes fed into feature mixing");
  cmd->add_option("--sd-threshold", o.cfg.sift.sd_threshold, "sifting stop threshold");
  cmd->add_option("--max-sift-iters", o.cfg.sift.max_sift_iters, "sift iteration cap per mode");
  cmd->add_option("--max-imfs", o.cfg.sift.max_imfs, "decomposition mode cap");
  cmd->add_option("--boundary", o.boundary, "envelope end handling")
      ->check(CLI::IsMember({"mirror", "clamp"}));
  cmd->add_option("--scale-min", o.cfg.min_scale, "lowest scale in the integer grid");
  cmd->add_option("--scales", o.cfg.max_scale, "highest scale in the integer grid");
  cmd->add_option("--objective", o.objective, "frame objective")
      ->check(CLI::IsMember({"lgc", "dot", "ndot"}));
  cmd->add_option("--frame-n", o.cfg.frame_n, "frame half-width n (frame holds 2n+1 samples)");
  cmd->add_option("--hop", o.cfg.hop, "frame center stride");
  cmd->add_option("--train-frac", o.cfg.train_fraction, "training share per class");
  cmd->add_option("--svm-c", o.cfg.svm_c, "soft-margin box constraint");
  cmd->add_option("--seed", o.cfg.seed, "seed for generation and splitting");
  cmd->add_option("--out", o.cfg.out_dir, "artifact directory");
  cmd->add_option("--threads", o.cfg.threads, "worker threads, 0 = all cores");
}

gfd::PipelineConfig finalize(const CommonOpts& o) {
  gfd::PipelineConfig cfg = o.cfg;
  cfg.objective = gfd::parse_objective(o.objective);
  cfg.sift.boundary =
      o.boundary == "clamp" ? gfd::BoundaryPolicy::clamp : gfd::BoundaryPolicy::mirror;
  if (o.force_synthetic && !o.inputs.empty()) {
    throw gfd::ConfigError("--synthetic and --input are mutually exclusive");
  }
  cfg.synthetic = o.inputs.empty();
  for (const std::string& spec : o.inputs) {
    gfd::InputSpec in;
    const std::size_t colon = spec.rfind(':');
    if (colon != std::string::npos && colon > 0 &&
        spec.find('/', colon) == std::string::npos && colon + 1 < spec.size()) {
      in.path = spec.substr(0, colon);
      in.label = spec.substr(colon + 1);
    } else {
      in.path = spec;
      in.label = spec;
    }
    in.format = o.input_format == "wav" ? gfd::SignalFormat::wav : gfd::SignalFormat::csv;
    in.channel = o.channel;
    in.rate_hz = o.rate_hz;
    if (in.format == gfd::SignalFormat::csv && !(in.rate_hz > 0.0)) {
      throw gfd::ConfigError("CSV inputs need --rate");
    }
    cfg.inputs.push_back(std::move(in));
  }
  return cfg;
}

std::string heading_of(const gfd::RunReport& rep) {
  return "objective=" + rep.objective + " emd=" + rep.emd_mode;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gear-fault feature extraction and classification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value file");

  CommonOpts pipe_opts;
  CLI::App* pipe_cmd = app.add_subcommand("pipeline", "run the full feature + SVM pipeline once");
  add_pipeline_options(pipe_cmd, pipe_opts);

  CommonOpts cmp_opts;
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "run the pipeline under all three objectives, same splits");
  add_pipeline_options(cmp_cmd, cmp_opts);

  int example_which = 1;
  std::string example_out = "out/examples";
  CLI::App* ex_cmd = app.add_subcommand("examples", "emit scalogram and trace artifacts for the built-in demo signals");
  ex_cmd->add_option("which", example_which, "demo signal: 1 = two tones, 2 = tone + chirp")
      ->check(CLI::IsMember({1, 2}));
  ex_cmd->add_option("--out", example_out, "artifact directory");

  std::string train_features, train_model_out = "model.json";
  double train_c = 1e3;
  double train_tol = 1e-4;
  CLI::App* train_cmd = app.add_subcommand("train", "train one-versus-all models from a feature CSV");
  train_cmd->add_option("--features", train_features, "feature CSV with labels")->required();
  train_cmd->add_option("--svm-c", train_c, "soft-margin box constraint");
  train_cmd->add_option("--svm-tol", train_tol, "solver stopping tolerance");
  train_cmd->add_option("--out", train_model_out, "model JSON path");

  std::string pred_model, pred_features, pred_out;
  CLI::App* pred_cmd = app.add_subcommand("predict", "classify a feature CSV with a saved model");
  pred_cmd->add_option("--model", pred_model, "model JSON")->required();
  pred_cmd->add_option("--features", pred_features, "feature CSV")->required();
  pred_cmd->add_option("--out", pred_out, "prediction CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (pipe_cmd->parsed()) {
      const gfd::RunReport rep = gfd::run_pipeline(finalize(pipe_opts));
      std::cout << gfd::success_table_text(heading_of(rep), rep.success);
      std::cout << "features: " << rep.train_count << " train / " << rep.test_count
                << " test, dim " << rep.feature_dim << '\n';
      std::cout << "artifacts in " << pipe_opts.cfg.out_dir << " (" << rep.artifact_paths.size()
                << " files, " << rep.seconds << " s)\n";
    } else if (cmp_cmd->parsed()) {
      const gfd::ObjectiveComparison cmp = gfd::compare_objectives(finalize(cmp_opts));
      std::cout << cmp.table_text;
      std::cout << "artifacts in " << cmp_opts.cfg.out_dir << '\n';
    } else if (ex_cmd->parsed()) {
      for (const std::string& p : gfd::run_examples(example_which, example_out)) {
        std::cout << p << '\n';
      }
    } else if (train_cmd->parsed()) {
      const auto features = gfd::load_features_csv(train_features);
      std::vector<std::string> classes;
      for (const auto& fv : features) {
        bool seen = false;
        for (const auto& c : classes) seen = seen || c == fv.label;
        if (!seen) classes.push_back(fv.label);
      }
      const gfd::MulticlassModel mm = gfd::train_ova(features, classes, train_c, train_tol);
      gfd::save_model_json(mm, train_model_out);
      const gfd::SuccessReport rep = gfd::success_metrics(mm, features, features);
      std::cout << gfd::success_table_text("training set " + train_features, rep);
      std::cout << "model written to " << train_model_out << '\n';
    } else if (pred_cmd->parsed()) {
      const gfd::MulticlassModel mm = gfd::load_model_json(pred_model);
      const auto features = gfd::load_features_csv(pred_features);
      std::ofstream out;
      if (!pred_out.empty()) {
        out.open(pred_out);
        if (!out) throw gfd::FileError("cannot write " + pred_out);
        out << "index,label,predicted\n";
      }
      gfd::Index hits = 0, labeled = 0;
      for (std::size_t i = 0; i < features.size(); ++i) {
        const std::string pred = gfd::predict_ova(mm, features[i].levels);
        if (out.is_open()) out << i << ',' << features[i].label << ',' << pred << '\n';
        bool known = false;
        for (const auto& c : mm.class_names) known = known || c == features[i].label;
        if (known) {
          ++labeled;
          if (pred == features[i].label) ++hits;
        }
      }
      std::cout << features.size() << " rows classified";
      if (labeled > 0) {
        std::cout << ", " << hits << '/' << labeled << " labeled rows correct";
      }
      std::cout << '\n';
      if (out.is_open() && !out.flush()) throw gfd::FileError("write failed for " + pred_out);
    }
  } catch (const gfd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const gfd::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (violation " << e.kkt_violation() << ")\n";
    return 4;
  } catch (const gfd::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
