// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfd/types.hpp"

namespace gfd {

struct Signal {
  Vec samples;
  double sample_rate_hz = 0.0;

  Index size() const { return samples.size(); }
  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

/// Validates and wraps: at least two samples, all finite, positive rate.
/// Bad rate is a ConfigError, bad samples a DataError.
Signal make_signal(Vec samples, double sample_rate_hz);

/// Equal-length consecutive cuts of one recording plus its condition tag.
struct SegmentSet {
  std::vector<Signal> segments;
  std::string source_label;
};

/// A two-component synthetic signal and the sum that gets analyzed.
struct ComponentMix {
  Signal y1, y2, y;
};

/// Two steady tones: y1 = sin(40*pi*t) at 20 Hz, y2 = 2*cos(80*pi*t) at
/// 40 Hz, t in seconds.
ComponentMix generate_example1(double duration_s, double fs_hz);

/// Tone plus chirp: y1 = sin(40*pi*t), y2 = cos(2*pi*(10 + 80t)*t). The
/// chirp's instantaneous frequency is 10 + 160t Hz.
ComponentMix generate_example2(double duration_s, double fs_hz);

/// One synthetic machine condition: an amplitude-modulated meshing tone, an
/// optional steady second tone, a repeating decaying-ring impulse train, and
/// white noise.
struct GearCondition {
  std::string label;
  double tone_hz = 1000.0;
  double tone_amp = 1.0;
  double mod_depth = 0.0;   // AM depth on the tone, at mod_hz
  double mod_hz = 0.0;
  double tone2_hz = 0.0;    // unmodulated secondary tone
  double tone2_amp = 0.0;
  double impulse_amp = 0.0;  // peak of each ring burst
  double impulse_hz = 0.0;   // burst repetition rate
  double noise_std = 0.0;
};

/// Three presets (healthy / chipped / worn) tuned to stay linearly
/// separable after feature extraction.
std::vector<GearCondition> default_gear_conditions();

/// One continuous stream per condition, chopped into segments_per_condition
/// pieces of segment_len samples. Deterministic for a fixed seed.
std::vector<SegmentSet> generate_gear_dataset(const std::vector<GearCondition>& conditions,
                                              Index segments_per_condition, Index segment_len,
                                              double fs_hz, std::uint64_t seed);

/// Consecutive non-overlapping cuts of length floor(len / n_segments);
/// the trailing remainder is dropped.
SegmentSet split_segments(const Signal& s, Index n_segments, std::string source_label = {});

enum class SignalFormat { csv, wav };

/// Reads one channel of a file. CSV carries no rate, so csv_rate_hz
/// supplies it; WAV files use the rate stored in their header.
Signal load_signal(const std::string& path, SignalFormat format, Index channel = 0,
                   double csv_rate_hz = 0.0);

/// One sample per row at full round-trip precision.
void save_signal_csv(const Signal& s, const std::string& path);

}  // namespace gfd
