// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gfd/cwt.hpp"
#include "gfd/emd.hpp"
#include "gfd/features.hpp"
#include "gfd/io.hpp"
#include "gfd/pipeline.hpp"
#include "gfd/signal.hpp"
#include "gfd/svm.hpp"
#include "test_util.hpp"

namespace fsys = std::filesystem;
using gfd::Index;
using gfd::Mat;
using gfd::Vec;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------- tones ---

struct ToneMix {
  std::vector<double> amp, omega, phase;  // omega in rad per sample

  double eval(double t) const {
    double v = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) v += amp[i] * std::cos(omega[i] * t + phase[i]);
    return v;
  }

  Vec sample(Index n) const {
    Vec x(n);
    for (Index t = 0; t < n; ++t) x[t] = eval(static_cast<double>(t));
    return x;
  }
};

ToneMix random_tones(std::mt19937_64& eng, int count, double min_period, double max_period) {
  std::uniform_real_distribution<double> period(min_period, max_period);
  std::uniform_real_distribution<double> amp(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * testutil::kPi);
  ToneMix mix;
  for (int i = 0; i < count; ++i) {
    mix.amp.push_back(amp(eng));
    mix.omega.push_back(2.0 * testutil::kPi / period(eng));
    mix.phase.push_back(phase(eng));
  }
  return mix;
}

// Composite Simpson quadrature of the transform integrand over the kernel
// support, evaluated on the continuous-time tone mix.
double quadrature_coefficient(const ToneMix& mix, double a, double b) {
  const double lo = b - 6.0 * a;
  const double hi = b + 6.0 * a;
  Index m = static_cast<Index>(std::ceil((hi - lo) / 0.002));
  if (m % 2 == 1) ++m;
  const double h = (hi - lo) / static_cast<double>(m);
  const double gain = 1.0 / std::sqrt(a);
  auto f = [&](double t) { return mix.eval(t) * gain * gfd::morlet((t - b) / a); };
  double sum = f(lo) + f(hi);
  for (Index k = 1; k < m; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * f(lo + static_cast<double>(k) * h);
  }
  return sum * h / 3.0;
}

// ------------------------------------------------------------ criteria ---

void check_reconstruction_and_counts() {
  const Timer timer;
  std::mt19937_64 eng(2024);
  std::uniform_int_distribution<Index> len(2000, 10000);

  double worst_err = 0.0;
  Index count_violations = 0;
  Index modes_checked = 0;
  const gfd::SiftConfig cfg;

  for (int trial = 0; trial < 50; ++trial) {
    const Index n = len(eng);
    const Vec x = testutil::random_tone_mix(eng, n);
    const gfd::ImfSet set = gfd::decompose(gfd::make_signal(x, 1000.0), cfg);

    Vec sum = set.residual;
    for (const Vec& m : set.imfs) sum += m;
    worst_err = std::max(worst_err, (sum - x).cwiseAbs().maxCoeff());

    for (std::size_t k = 0; k < set.imfs.size(); ++k) {
      if (set.sift_counts[k] >= cfg.max_sift_iters) continue;
      ++modes_checked;
      const Index zc = gfd::count_zero_crossings(set.imfs[k]);
      const Index ex = gfd::count_extrema(set.imfs[k]);
      if (std::abs(zc - ex) > 1) ++count_violations;
    }
  }

  const double secs = timer.seconds();
  report(1, "decomposition reconstruction identity", worst_err < 1e-9 && secs < 30.0,
         fmt("max reconstruction error %.3e over 50 signals (%.1f s)", worst_err, secs));
  report(2, "mode count balance", count_violations == 0 && modes_checked > 0,
         fmt("%lld of %lld finished modes off balance", static_cast<long long>(count_violations),
             static_cast<long long>(modes_checked)));
}

void check_transform_quadrature() {
  const Timer timer;
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> scale_dist(4.0, 40.0);

  double worst_rel = 0.0;
  const Index n = 2000;
  const Index margin = 241;  // interior for every probed scale

  for (int sig = 0; sig < 5; ++sig) {
    const ToneMix mix = random_tones(eng, 2 + sig % 2, 24.0, 200.0);
    const gfd::Signal s = gfd::make_signal(mix.sample(n), 1000.0);

    std::vector<double> raw(10);
    for (double& a : raw) a = scale_dist(eng);
    std::sort(raw.begin(), raw.end());
    for (std::size_t i = 1; i < raw.size(); ++i) {
      if (raw[i] <= raw[i - 1]) raw[i] = raw[i - 1] + 0.37;
    }
    const gfd::ScaleGrid grid =
        gfd::make_scale_grid(Eigen::Map<const Vec>(raw.data(), static_cast<Index>(raw.size())));
    const gfd::Scalogram sc = gfd::cwt(s, grid);

    std::uniform_int_distribution<Index> b_dist(margin, n - 1 - margin);
    for (Index row = 0; row < grid.size(); ++row) {
      const double row_max =
          sc.coefficients.row(row).segment(margin, n - 2 * margin).cwiseAbs().maxCoeff();
      Index b = b_dist(eng);
      for (int tries = 0; tries < 500; ++tries) {
        if (std::abs(sc.coefficients(row, b)) >= 0.3 * row_max) break;
        b = b_dist(eng);
      }
      const double lib = sc.coefficients(row, b);
      const double ref = quadrature_coefficient(mix, grid.scales[row], static_cast<double>(b));
      worst_rel = std::max(worst_rel, std::abs(lib - ref) / std::abs(ref));
    }
  }

  report(3, "transform agrees with quadrature", worst_rel < 1e-6,
         fmt("worst relative error %.3e over 50 probes (%.1f s)", worst_rel, timer.seconds()));
}

struct TraceSummary {
  double band_fraction = 0.0;  // interior frames inside [lo, hi]
  double modal_scale = 0.0;
};

TraceSummary summarize_trace(const gfd::ScaleTrace& tr, Index lo_center, Index hi_center,
                             double band_lo, double band_hi) {
  std::vector<double> picks;
  for (std::size_t i = 0; i < tr.centers.size(); ++i) {
    if (tr.centers[i] < lo_center || tr.centers[i] > hi_center) continue;
    picks.push_back(tr.selected_scales[static_cast<Index>(i)]);
  }
  TraceSummary out;
  if (picks.empty()) return out;

  Index in_band = 0;
  for (double p : picks) {
    if (p >= band_lo && p <= band_hi) ++in_band;
  }
  out.band_fraction = static_cast<double>(in_band) / static_cast<double>(picks.size());

  std::sort(picks.begin(), picks.end());
  double best_val = picks[0];
  std::size_t best_run = 0, i = 0;
  while (i < picks.size()) {
    std::size_t j = i;
    while (j + 1 < picks.size() && picks[j + 1] == picks[i]) ++j;
    if (j - i + 1 > best_run) {
      best_run = j - i + 1;
      best_val = picks[i];
    }
    i = j + 1;
  }
  out.modal_scale = best_val;
  return out;
}

void check_two_tone_selection() {
  const Timer timer;
  const gfd::ComponentMix mix = gfd::generate_example1(3.0, 1000.0);
  const gfd::ImfSet modes = gfd::decompose(mix.y, gfd::SiftConfig{});

  const gfd::ScaleGrid grid = gfd::ScaleGrid::integer_range(64);
  const auto obj = gfd::FrameObjective::make(gfd::ObjectiveKind::local_gaussian_correlation, 15);
  const Index lo = 384, hi = 3000 - 1 - 384;  // clear of the widest kernel's cone

  auto trace_of = [&](const Vec& x) {
    const gfd::Scalogram sc = gfd::cwt(gfd::make_signal(x, 1000.0), grid);
    return gfd::select_scales(x, sc, obj, 1);
  };

  const TraceSummary composite = summarize_trace(trace_of(mix.y.samples), lo, hi, 18.0, 22.0);

  bool modes_ok = modes.imfs.size() >= 2;
  TraceSummary m1, m2;
  if (modes_ok) {
    m1 = summarize_trace(trace_of(modes.imfs[0]), lo, hi, 18.0, 22.0);
    m2 = summarize_trace(trace_of(modes.imfs[1]), lo, hi, 36.0, 44.0);
  }

  const double secs = timer.seconds();
  const bool pass = composite.band_fraction >= 0.90 && modes_ok && m1.modal_scale >= 18.0 &&
                    m1.modal_scale <= 22.0 && m2.modal_scale >= 36.0 && m2.modal_scale <= 44.0 &&
                    secs < 10.0;
  report(4, "two-tone scale selection", pass,
         fmt("composite in [18,22] %.1f%%, mode-1 modal %.0f, mode-2 modal %.0f (%.1f s)",
             100.0 * composite.band_fraction, m1.modal_scale, m2.modal_scale, secs));
}

void check_chirp_trace() {
  const Timer timer;
  const gfd::ComponentMix mix = gfd::generate_example2(1.0, 1000.0);
  const gfd::ImfSet modes = gfd::decompose(mix.y, gfd::SiftConfig{});

  if (modes.imfs.empty()) {
    report(5, "chirp trace falls with frequency", false, "decomposition produced no modes");
    return;
  }

  const gfd::ScaleGrid grid = gfd::ScaleGrid::integer_range(64);
  const auto obj = gfd::FrameObjective::make(gfd::ObjectiveKind::local_gaussian_correlation, 15);
  const gfd::Scalogram sc = gfd::cwt(gfd::make_signal(modes.imfs[0], 1000.0), grid);
  const gfd::ScaleTrace tr = gfd::select_scales(modes.imfs[0], sc, obj, 1);

  // The sweep owns the first mode past the crossover with the steady tone;
  // stay inside [0.15 s, 0.95 s].
  std::vector<double> centers, picks;
  for (std::size_t i = 0; i < tr.centers.size(); ++i) {
    if (tr.centers[i] < 150 || tr.centers[i] > 950) continue;
    centers.push_back(static_cast<double>(tr.centers[i]));
    picks.push_back(tr.selected_scales[static_cast<Index>(i)]);
  }
  const double rho = testutil::spearman(centers, picks);
  report(5, "chirp trace falls with frequency", rho < -0.8,
         fmt("Spearman(center, scale) = %.3f over %zu frames (%.1f s)", rho, picks.size(),
             timer.seconds()));
}

void check_objective_properties() {
  const Timer timer;
  std::mt19937_64 eng(41);
  std::normal_distribution<double> dist;
  const Index n = 15;
  const Index frame = 2 * n + 1;

  const auto ndot = gfd::FrameObjective::make(gfd::ObjectiveKind::normalized_dot, n);
  const auto dot = gfd::FrameObjective::make(gfd::ObjectiveKind::dot_product, n);
  const auto lgc = gfd::FrameObjective::make(gfd::ObjectiveKind::local_gaussian_correlation, n);

  auto random_frame = [&]() {
    Vec v(frame);
    for (Index i = 0; i < frame; ++i) v[i] = dist(eng);
    return v;
  };

  Index range_violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Vec a = random_frame();
    const Vec b = random_frame();
    const double v = gfd::frame_similarity(a, b, ndot);
    if (v < -1.0 || v > 1.0) ++range_violations;
  }

  Index zero_violations = 0;
  for (double level : {0.0, 1.0, -2.5, 1e6}) {
    const Vec c = Vec::Constant(frame, level);
    const Vec r = random_frame();
    if (gfd::frame_similarity(c, r, dot) != 0.0) ++zero_violations;
    if (gfd::frame_similarity(r, c, dot) != 0.0) ++zero_violations;
    if (gfd::frame_similarity(c, r, lgc) != 0.0) ++zero_violations;
    if (gfd::frame_similarity(r, c, lgc) != 0.0) ++zero_violations;
  }

  double worst_edge = 0.0;
  for (Index w_n : {5, 15, 40, 100}) {
    const Vec w = gfd::gaussian_weights(w_n);
    worst_edge = std::max(worst_edge, std::abs(w[0] - 0.01));
    worst_edge = std::max(worst_edge, std::abs(w[2 * w_n] - 0.01));
  }

  Index argmax_flips = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = random_frame();
    std::vector<Vec> rows;
    for (int r = 0; r < 16; ++r) rows.push_back(random_frame());
    for (const auto* obj : {&ndot, &dot, &lgc}) {
      for (double lambda : {0.25, 3.0, 113.0}) {
        const Vec scaled = lambda * x;
        Index best_plain = 0, best_scaled = 0;
        double top_plain = gfd::frame_similarity(x, rows[0], *obj);
        double top_scaled = gfd::frame_similarity(scaled, rows[0], *obj);
        for (Index r = 1; r < 16; ++r) {
          const double vp = gfd::frame_similarity(x, rows[static_cast<std::size_t>(r)], *obj);
          const double vs = gfd::frame_similarity(scaled, rows[static_cast<std::size_t>(r)], *obj);
          if (vp > top_plain) {
            top_plain = vp;
            best_plain = r;
          }
          if (vs > top_scaled) {
            top_scaled = vs;
            best_scaled = r;
          }
        }
        if (best_plain != best_scaled) ++argmax_flips;
      }
    }
  }

  const bool pass =
      range_violations == 0 && zero_violations == 0 && worst_edge < 1e-12 && argmax_flips == 0;
  report(6, "objective properties", pass,
         fmt("range violations %lld, constant-frame nonzeros %lld, edge weight error %.2e, "
             "argmax flips %lld (%.1f s)",
             static_cast<long long>(range_violations), static_cast<long long>(zero_violations),
             worst_edge, static_cast<long long>(argmax_flips), timer.seconds()));
}

void check_svm() {
  const Timer timer;

  Mat x(2, 2);
  x << 2, 2, 0, 0;
  Vec y(2);
  y << 1, -1;
  const auto two = gfd::train_binary(gfd::make_training_set(x, y), 1e3);
  const bool two_ok = std::abs(two.w[0] - 0.5) < 1e-4 && std::abs(two.w[1] - 0.5) < 1e-4 &&
                      std::abs(two.b + 1.0) < 1e-4;

  // A larger separable problem for the dual identities.
  std::mt19937_64 eng(55);
  std::normal_distribution<double> noise(0.0, 0.2);
  const Index per = 40;
  Mat bx(2 * per, 3);
  Vec by(2 * per);
  for (Index i = 0; i < per; ++i) {
    bx(i, 0) = 1.5 + noise(eng);
    bx(i, 1) = -1.0 + noise(eng);
    bx(i, 2) = 0.5 + noise(eng);
    by[i] = 1.0;
    bx(per + i, 0) = -1.0 + noise(eng);
    bx(per + i, 1) = 1.0 + noise(eng);
    bx(per + i, 2) = -0.5 + noise(eng);
    by[per + i] = -1.0;
  }
  const auto ts = gfd::make_training_set(bx, by);
  const auto m = gfd::train_binary(ts, 1e3, 1e-6);

  const double alpha_balance = std::abs(m.alphas.dot(ts.y));

  double worst_agreement = 0.0;
  std::uniform_real_distribution<double> probe(-2.0, 2.0);
  gfd::LinearSvmModel primal_only = m;
  primal_only.support_x.resize(0, 0);
  primal_only.support_v.resize(0);
  primal_only.support_indices.clear();
  for (int t = 0; t < 100; ++t) {
    Vec p(3);
    p << probe(eng), probe(eng), probe(eng);
    worst_agreement =
        std::max(worst_agreement, std::abs(gfd::decision(m, p) - gfd::decision(primal_only, p)));
  }

  const Index n_sv = static_cast<Index>(m.support_indices.size());
  Mat sx(n_sv, 3);
  Vec sy(n_sv);
  for (Index k = 0; k < n_sv; ++k) {
    sx.row(k) = ts.x.row(m.support_indices[static_cast<std::size_t>(k)]);
    sy[k] = ts.y[m.support_indices[static_cast<std::size_t>(k)]];
  }
  const auto again = gfd::train_binary(gfd::make_training_set(sx, sy), 1e3, 1e-6);
  const double w_rel = (again.w - m.w).norm() / m.w.norm();
  const double b_rel = std::abs(again.b - m.b) / std::max(1.0, std::abs(m.b));

  const bool pass = two_ok && worst_agreement < 1e-8 && alpha_balance < 1e-6 && w_rel < 1e-4 &&
                    b_rel < 1e-4;
  report(7, "svm analytic optimum and dual identities", pass,
         fmt("two-point w=(%.5f, %.5f) b=%.5f, decision gap %.2e, alpha balance %.2e, "
             "sv-retrain dw %.2e db %.2e (%.1f s)",
             two.w[0], two.w[1], two.b, worst_agreement, alpha_balance, w_rel, b_rel,
             timer.seconds()));
}

void check_synthetic_classification(const fsys::path& root) {
  const Timer timer;
  bool all_train_perfect = true;
  bool lgc_test_ok = true;
  std::string worst_note = "all train cells 100.00";

  for (int emd_mode = 0; emd_mode < 3; ++emd_mode) {
    for (const auto kind :
         {gfd::ObjectiveKind::local_gaussian_correlation, gfd::ObjectiveKind::dot_product,
          gfd::ObjectiveKind::normalized_dot}) {
      gfd::PipelineConfig cfg;
      cfg.segments_per_condition = 80;
      cfg.segment_len = 1250;
      cfg.fs_hz = 10000.0;
      // 32 levels starting above the finest integer scale: at unit sampling
      // the scale-1 kernel degenerates to a near-delta, so its coefficient
      // row is a copy of the signal and the cosine objective would pin every
      // frame there regardless of class.
      cfg.min_scale = 2;
      cfg.max_scale = 33;
      cfg.objective = kind;
      cfg.use_emd = emd_mode > 0;
      cfg.imf_count = emd_mode == 1 ? 3 : 4;
      cfg.train_fraction = 0.375;
      cfg.seed = 1;
      cfg.threads = 0;
      cfg.out_dir =
          (root / ("run_" + std::to_string(emd_mode) + "_" + gfd::objective_name(kind))).string();

      const gfd::RunReport rep = gfd::run_pipeline(cfg);
      if (rep.train_count != 90 || rep.test_count != 150) {
        all_train_perfect = false;
        worst_note = fmt("split %lld/%lld instead of 90/150",
                         static_cast<long long>(rep.train_count),
                         static_cast<long long>(rep.test_count));
      }
      for (const auto& cs : rep.success.per_class) {
        if (cs.train_binary_pct != 100.0 || cs.train_recall_pct != 100.0) {
          all_train_perfect = false;
          worst_note = fmt("%s emd=%s train %s %.2f%%", rep.objective.c_str(),
                           rep.emd_mode.c_str(), cs.name.c_str(), cs.train_binary_pct);
        }
      }
      if (rep.success.train_overall_pct != 100.0) all_train_perfect = false;
      if (kind == gfd::ObjectiveKind::local_gaussian_correlation &&
          rep.success.test_overall_pct < 99.0) {
        lgc_test_ok = false;
        worst_note = fmt("lgc emd=%s test overall %.2f%%", rep.emd_mode.c_str(),
                         rep.success.test_overall_pct);
      }
    }
  }

  const double secs = timer.seconds();
  report(8, "synthetic classification grid", all_train_perfect && lgc_test_ok && secs < 300.0,
         fmt("%s (%.1f s)", worst_note.c_str(), secs));
}

std::string slurp(const fsys::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_determinism(const fsys::path& root) {
  const Timer timer;
  gfd::PipelineConfig cfg;
  cfg.segments_per_condition = 80;
  cfg.segment_len = 1250;
  cfg.fs_hz = 10000.0;
  cfg.max_scale = 32;
  cfg.train_fraction = 0.375;
  cfg.seed = 42;
  cfg.threads = 0;

  cfg.out_dir = (root / "det_a").string();
  gfd::run_pipeline(cfg);
  cfg.out_dir = (root / "det_b").string();
  gfd::run_pipeline(cfg);

  const bool feats_same =
      slurp(root / "det_a" / "features.csv") == slurp(root / "det_b" / "features.csv");
  const bool model_same =
      slurp(root / "det_a" / "model.json") == slurp(root / "det_b" / "model.json");
  report(9, "seeded runs are byte-identical", feats_same && model_same,
         fmt("features %s, model %s (%.1f s)", feats_same ? "identical" : "differ",
             model_same ? "identical" : "differ", timer.seconds()));
}

}  // namespace

int main() {
  const fsys::path root = fsys::temp_directory_path() / "gfd_acceptance";
  fsys::remove_all(root);
  fsys::create_directories(root);

  try {
    check_reconstruction_and_counts();
  } catch (const std::exception& e) {
    report(1, "decomposition reconstruction identity", false, e.what());
    report(2, "mode count balance", false, "skipped after failure above");
  }
  try {
    check_transform_quadrature();
  } catch (const std::exception& e) {
    report(3, "transform agrees with quadrature", false, e.what());
  }
  try {
    check_two_tone_selection();
  } catch (const std::exception& e) {
    report(4, "two-tone scale selection", false, e.what());
  }
  try {
    check_chirp_trace();
  } catch (const std::exception& e) {
    report(5, "chirp trace falls with frequency", false, e.what());
  }
  try {
    check_objective_properties();
  } catch (const std::exception& e) {
    report(6, "objective properties", false, e.what());
  }
  try {
    check_svm();
  } catch (const std::exception& e) {
    report(7, "svm analytic optimum and dual identities", false, e.what());
  }
  try {
    check_synthetic_classification(root);
  } catch (const std::exception& e) {
    report(8, "synthetic classification grid", false, e.what());
  }
  try {
    check_determinism(root);
  } catch (const std::exception& e) {
    report(9, "seeded runs are byte-identical", false, e.what());
  }

  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures;
}
