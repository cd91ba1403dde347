// SPDX-License-Identifier: Apache-2.0
#include "gfd/cwt.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gfd {
namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

}  // namespace

ScaleGrid ScaleGrid::integer_range(Index max_scale) { return integer_range(1, max_scale); }

ScaleGrid ScaleGrid::integer_range(Index min_scale, Index max_scale) {
  if (min_scale < 1) throw std::invalid_argument("scale grid starts at 1 or above");
  if (max_scale < min_scale) throw std::invalid_argument("scale grid range is empty");
  Vec s(max_scale - min_scale + 1);
  for (Index i = 0; i < s.size(); ++i) s[i] = static_cast<double>(min_scale + i);
  return make_scale_grid(std::move(s));
}

Index ScaleGrid::index_of(double scale) const {
  for (Index i = 0; i < scales.size(); ++i) {
    if (scales[i] == scale) return i;
  }
  return -1;
}

ScaleGrid make_scale_grid(Vec scales) {
  if (scales.size() == 0) throw std::invalid_argument("empty scale grid");
  for (Index i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw std::invalid_argument("scales must be positive");
    if (i > 0 && !(scales[i] > scales[i - 1])) {
      throw std::invalid_argument("scales must be strictly increasing");
    }
  }
  return ScaleGrid{std::move(scales)};
}

double morlet(double t, const WaveletParams& params) {
  return kInvSqrt2Pi * std::exp(-t * t) * std::cos(params.two_pi_nu0 * t);
}

SampledKernel daughter(double a, double b, const WaveletParams& params) {
  if (!(a > 0.0)) throw std::invalid_argument("scale must be positive");
  const double half_span = a * kKernelCutoff;
  const Index start = static_cast<Index>(std::ceil(b - half_span));
  const Index stop = static_cast<Index>(std::floor(b + half_span));
  const double gain = 1.0 / std::sqrt(a);

  SampledKernel k;
  k.start = start;
  k.taps.resize(stop - start + 1);
  for (Index t = start; t <= stop; ++t) {
    k.taps[t - start] = gain * morlet((static_cast<double>(t) - b) / a, params);
  }
  return k;
}

Scalogram cwt(const Signal& x, const ScaleGrid& grid, const WaveletParams& params) {
  const Index n = x.size();
  Scalogram sc;
  sc.grid = grid;
  sc.signal_len = n;
  sc.coefficients.resize(grid.size(), n);

  for (Index row = 0; row < grid.size(); ++row) {
    const double a = grid.scales[row];
    // Integer shifts reuse one kernel per scale: the taps of
    // daughter(a, b) at integer t depend only on t - b.
    const SampledKernel base = daughter(a, 0.0, params);
    const Index radius = -base.start;
    if (base.taps.size() >= 4 * n) {
      throw std::invalid_argument("scale too large for the signal length");
    }
    for (Index b = 0; b < n; ++b) {
      const Index lo = std::max<Index>(0, b - radius);
      const Index hi = std::min<Index>(n - 1, b + radius);
      sc.coefficients(row, b) =
          x.samples.segment(lo, hi - lo + 1).dot(base.taps.segment(lo - b + radius, hi - lo + 1));
    }
  }
  return sc;
}

double scale_for_frequency(double f_hz, double fs_hz, const WaveletParams& params) {
  if (!(f_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
  if (!(fs_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
  return params.two_pi_nu0 / (2.0 * kPi) * fs_hz / f_hz;
}

}  // namespace gfd
