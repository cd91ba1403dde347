// SPDX-License-Identifier: Apache-2.0
#include "gfd/signal.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "gfd/errors.hpp"
#include "gfd/rng.hpp"
#include "gfd/textio.hpp"

namespace gfd {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Decaying-ring burst shape shared by all synthetic impulse trains.
constexpr double kRingFreqFraction = 0.28;  // carrier, as a fraction of fs
constexpr double kRingDecaySamples = 12.0;
constexpr double kRingSpanDecays = 8.0;  // burst length in decay constants

Index sample_count(double duration_s, double fs_hz) {
  if (!(duration_s > 0.0) || !(fs_hz > 0.0)) {
    throw std::invalid_argument("duration and sample rate must be positive");
  }
  const Index n = static_cast<Index>(std::llround(duration_s * fs_hz));
  if (n < 2) throw std::invalid_argument("duration too short for the sample rate");
  return n;
}

}  // namespace

Signal make_signal(Vec samples, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw ConfigError("sample rate must be positive and finite");
  }
  if (samples.size() < 2) throw DataError("signal needs at least two samples");
  if (!samples.allFinite()) throw DataError("signal contains NaN or Inf samples");
  return Signal{std::move(samples), sample_rate_hz};
}

ComponentMix generate_example1(double duration_s, double fs_hz) {
  const Index n = sample_count(duration_s, fs_hz);
  Vec a(n), b(n);
  for (Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs_hz;
    a[k] = std::sin(40.0 * kPi * t);
    b[k] = 2.0 * std::cos(80.0 * kPi * t);
  }
  ComponentMix mix;
  mix.y1 = make_signal(a, fs_hz);
  mix.y2 = make_signal(b, fs_hz);
  mix.y = make_signal(a + b, fs_hz);
  return mix;
}

ComponentMix generate_example2(double duration_s, double fs_hz) {
  const Index n = sample_count(duration_s, fs_hz);
  Vec a(n), b(n);
  for (Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs_hz;
    a[k] = std::sin(40.0 * kPi * t);
    b[k] = std::cos(2.0 * kPi * (10.0 + 80.0 * t) * t);
  }
  ComponentMix mix;
  mix.y1 = make_signal(a, fs_hz);
  mix.y2 = make_signal(b, fs_hz);
  mix.y = make_signal(a + b, fs_hz);
  return mix;
}

std::vector<GearCondition> default_gear_conditions() {
  GearCondition healthy;
  healthy.label = "healthy";
  healthy.noise_std = 0.03;

  // Chipped tooth: once-per-rev AM plus one strong resonance burst per rev.
  // The burst peak is set so the ring outweighs the meshing tone inside the
  // frames it covers, which marks those frames at the ring scale for the
  // amplitude-weighted objectives too.
  GearCondition chipped;
  chipped.label = "chipped";
  chipped.mod_depth = 0.6;
  chipped.mod_hz = 24.0;
  chipped.impulse_amp = 4.0;
  chipped.impulse_hz = 24.0;
  chipped.noise_std = 0.03;

  // Worn teeth: distorted meshing raises the second meshing harmonic above
  // the fundamental, with dense low-level impacting and a noisier floor.
  GearCondition worn;
  worn.label = "worn";
  worn.tone2_hz = 2000.0;
  worn.tone2_amp = 1.5;
  worn.impulse_amp = 2.0;
  worn.impulse_hz = 360.0;
  worn.noise_std = 0.12;

  return {healthy, chipped, worn};
}

std::vector<SegmentSet> generate_gear_dataset(const std::vector<GearCondition>& conditions,
                                              Index segments_per_condition, Index segment_len,
                                              double fs_hz, std::uint64_t seed) {
  if (conditions.empty()) throw std::invalid_argument("need at least one gear condition");
  if (segments_per_condition < 1) throw std::invalid_argument("need at least one segment per condition");
  if (segment_len < 2) throw std::invalid_argument("segment length must be at least 2");
  if (!(fs_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");

  const Index len = segments_per_condition * segment_len;
  const double ring_hz = kRingFreqFraction * fs_hz;
  const Index ring_span = static_cast<Index>(std::ceil(kRingDecaySamples * kRingSpanDecays));

  std::vector<SegmentSet> out;
  out.reserve(conditions.size());
  for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
    const GearCondition& c = conditions[ci];
    Vec x = Vec::Zero(len);

    for (Index k = 0; k < len; ++k) {
      const double t = static_cast<double>(k) / fs_hz;
      double env = 1.0;
      if (c.mod_depth != 0.0 && c.mod_hz > 0.0) env += c.mod_depth * std::sin(2.0 * kPi * c.mod_hz * t);
      x[k] = c.tone_amp * env * std::sin(2.0 * kPi * c.tone_hz * t);
      if (c.tone2_amp != 0.0 && c.tone2_hz > 0.0) x[k] += c.tone2_amp * std::sin(2.0 * kPi * c.tone2_hz * t);
    }

    if (c.impulse_amp != 0.0 && c.impulse_hz > 0.0) {
      const double period = fs_hz / c.impulse_hz;  // in samples
      for (Index burst = 0;; ++burst) {
        const Index start = static_cast<Index>(std::llround(static_cast<double>(burst) * period));
        if (start >= len) break;
        const Index stop = std::min(len, start + ring_span);
        for (Index k = start; k < stop; ++k) {
          const double dt = static_cast<double>(k - start);
          x[k] += c.impulse_amp * std::exp(-dt / kRingDecaySamples) *
                  std::sin(2.0 * kPi * ring_hz * dt / fs_hz);
        }
      }
    }

    if (c.noise_std > 0.0) {
      std::mt19937_64 eng(mix_seed(seed, static_cast<std::uint64_t>(ci)));
      std::normal_distribution<double> gauss(0.0, c.noise_std);
      for (Index k = 0; k < len; ++k) x[k] += gauss(eng);
    }

    out.push_back(split_segments(make_signal(std::move(x), fs_hz), segments_per_condition, c.label));
  }
  return out;
}

SegmentSet split_segments(const Signal& s, Index n_segments, std::string source_label) {
  if (n_segments < 1) throw std::invalid_argument("segment count must be at least 1");
  const Index seg_len = s.size() / n_segments;
  if (seg_len < 2) throw std::invalid_argument("too many segments for the signal length");

  SegmentSet set;
  set.source_label = std::move(source_label);
  set.segments.reserve(static_cast<std::size_t>(n_segments));
  for (Index i = 0; i < n_segments; ++i) {
    set.segments.push_back(make_signal(s.samples.segment(i * seg_len, seg_len), s.sample_rate_hz));
  }
  return set;
}

namespace {

Signal load_csv(const std::string& path, Index channel, double rate_hz) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);

  std::vector<double> values;
  std::string line;
  std::size_t row = 0;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view sv(line);
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t')) sv.remove_suffix(1);
    if (sv.empty()) continue;

    // Walk comma-separated fields until the requested column.
    std::string_view field;
    Index col = 0;
    std::string_view rest = sv;
    bool found = false;
    while (true) {
      const std::size_t comma = rest.find(',');
      field = comma == std::string_view::npos ? rest : rest.substr(0, comma);
      while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
      while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
      if (col == channel) {
        found = true;
        break;
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      ++col;
    }
    if (!found) {
      throw ChannelError("row " + std::to_string(row) + " of " + path + " has no column " +
                         std::to_string(channel));
    }

    double v = 0.0;
    if (!parse_double(field, v)) {
      if (first_content_row) {  // header row
        first_content_row = false;
        continue;
      }
      throw ParseError("row " + std::to_string(row) + " of " + path + ": cannot parse '" +
                       std::string(field) + "'");
    }
    first_content_row = false;
    values.push_back(v);
  }

  if (values.size() < 2) throw DataError(path + " holds fewer than two samples");
  return make_signal(Eigen::Map<const Vec>(values.data(), static_cast<Index>(values.size())), rate_hz);
}

std::uint32_t read_u32(const std::string& buf, std::size_t at) {
  std::uint32_t v;
  std::memcpy(&v, buf.data() + at, 4);
  return v;
}

std::uint16_t read_u16(const std::string& buf, std::size_t at) {
  std::uint16_t v;
  std::memcpy(&v, buf.data() + at, 2);
  return v;
}

Signal load_wav(const std::string& path, Index channel) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();

  if (buf.size() < 12 || buf.compare(0, 4, "RIFF") != 0 || buf.compare(8, 4, "WAVE") != 0) {
    throw ParseError(path + " is not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_at = 0, data_len = 0;
  bool have_fmt = false;

  std::size_t at = 12;
  while (at + 8 <= buf.size()) {
    const std::string id = buf.substr(at, 4);
    const std::uint32_t size = read_u32(buf, at + 4);
    const std::size_t body = at + 8;
    if (body + size > buf.size()) throw ParseError(path + ": truncated '" + id + "' chunk");
    if (id == "fmt ") {
      if (size < 16) throw ParseError(path + ": fmt chunk too short");
      format = read_u16(buf, body);
      channels = read_u16(buf, body + 2);
      rate = read_u32(buf, body + 4);
      bits = read_u16(buf, body + 14);
      if (format == 0xFFFE) {  // extensible: real code leads the GUID
        if (size < 26) throw ParseError(path + ": extensible fmt chunk too short");
        format = read_u16(buf, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data_at = body;
      data_len = size;
    }
    at = body + size + (size & 1);
  }

  if (!have_fmt || data_at == 0) throw ParseError(path + ": missing fmt or data chunk");
  if (channels == 0 || rate == 0) throw ParseError(path + ": invalid fmt chunk");
  if (channel < 0 || channel >= static_cast<Index>(channels)) {
    throw ChannelError(path + " has " + std::to_string(channels) + " channels, requested " +
                       std::to_string(channel));
  }

  const bool pcm16 = format == 1 && bits == 16;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !f32) {
    throw ParseError(path + ": unsupported encoding (need 16-bit PCM or 32-bit float)");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = data_len / frame_bytes;
  if (frames < 2) throw DataError(path + " holds fewer than two frames");

  Vec samples(static_cast<Index>(frames));
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t p = data_at + f * frame_bytes + static_cast<std::size_t>(channel) * bytes_per_sample;
    if (pcm16) {
      std::int16_t raw;
      std::memcpy(&raw, buf.data() + p, 2);
      samples[static_cast<Index>(f)] = static_cast<double>(raw) / 32768.0;
    } else {
      float raw;
      std::memcpy(&raw, buf.data() + p, 4);
      samples[static_cast<Index>(f)] = static_cast<double>(raw);
    }
  }
  return make_signal(std::move(samples), static_cast<double>(rate));
}

}  // namespace

Signal load_signal(const std::string& path, SignalFormat format, Index channel, double csv_rate_hz) {
  if (channel < 0) throw ConfigError("channel index must be non-negative");
  if (format == SignalFormat::csv) return load_csv(path, channel, csv_rate_hz);
  return load_wav(path, channel);
}

void save_signal_csv(const Signal& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write " + path);
  for (Index i = 0; i < s.size(); ++i) out << format_double(s.samples[i]) << '\n';
  if (!out) throw FileError("write failed for " + path);
}

}  // namespace gfd
