// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gfd/signal.hpp"
#include "gfd/types.hpp"

namespace gfd {

/// Oscillation parameter of the real Morlet mother wavelet
/// psi(t) = (1/sqrt(2*pi)) * exp(-t^2) * cos(two_pi_nu0 * t).
struct WaveletParams {
  double two_pi_nu0 = 5.0;
};

/// Daughter kernels are cut off at |t - b| <= a * kKernelCutoff; the mother
/// wavelet is below 1e-15 past that point.
inline constexpr double kKernelCutoff = 6.0;

struct ScaleGrid {
  Vec scales;  // strictly increasing, all positive

  static ScaleGrid integer_range(Index max_scale);
  static ScaleGrid integer_range(Index min_scale, Index max_scale);

  Index size() const { return scales.size(); }
  /// Index of an exact grid member, -1 if absent.
  Index index_of(double scale) const;
};

/// Validates positivity and strict ordering.
ScaleGrid make_scale_grid(Vec scales);

double morlet(double t, const WaveletParams& params = {});

/// Daughter wavelet a^(-1/2) psi((t - b)/a) sampled at integer t; taps[i]
/// holds the value at t = start + i.
struct SampledKernel {
  Index start = 0;
  Vec taps;
};

SampledKernel daughter(double a, double b, const WaveletParams& params = {});

struct Scalogram {
  Mat coefficients;  // rows follow grid.scales, cols are time indices b
  ScaleGrid grid;
  Index signal_len = 0;
};

/// W(a, b) = sum_t x(t) * daughter_{a,b}(t), unit-step sum over integer
/// sample indices, zero extension past the ends.
Scalogram cwt(const Signal& x, const ScaleGrid& grid, const WaveletParams& params = {});

/// Scale whose daughter wavelet oscillates at f_hz for data sampled at
/// fs_hz: (two_pi_nu0 / (2*pi)) * fs / f.
double scale_for_frequency(double f_hz, double fs_hz, const WaveletParams& params = {});

}  // namespace gfd
