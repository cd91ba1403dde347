// SPDX-License-Identifier: Apache-2.0
#include "gfd/emd.hpp"

#include <cmath>
#include <cstdlib>

#include "gfd/errors.hpp"
#include "gfd/spline.hpp"

namespace gfd {

std::vector<Index> local_maxima(const Vec& x) {
  std::vector<Index> out;
  const Index n = x.size();
  Index i = 1;
  while (i + 1 < n) {
    if (x[i] > x[i - 1]) {
      Index j = i;
      while (j + 1 < n && x[j + 1] == x[i]) ++j;
      if (j + 1 < n && x[j + 1] < x[i]) out.push_back((i + j) / 2);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<Index> local_minima(const Vec& x) { return local_maxima(-x); }

Index count_zero_crossings(const Vec& x) {
  Index count = 0;
  int last_sign = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const int sign = x[i] > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++count;
    last_sign = sign;
  }
  return count;
}

Index count_extrema(const Vec& x) {
  return static_cast<Index>(local_maxima(x).size() + local_minima(x).size());
}

namespace {

// Spline knots through the given extrema, extended past both ends either by
// reflecting the two nearest extrema or by clamping to the end samples.
Vec envelope_through(const Vec& x, const std::vector<Index>& extrema, BoundaryPolicy policy) {
  const Index n = x.size();
  const Index m = static_cast<Index>(extrema.size());
  std::vector<double> kx, ky;
  kx.reserve(static_cast<std::size_t>(m) + 2);
  ky.reserve(static_cast<std::size_t>(m) + 2);

  if (policy == BoundaryPolicy::mirror) {
    kx.push_back(static_cast<double>(-extrema[1]));
    ky.push_back(x[extrema[1]]);
    kx.push_back(static_cast<double>(-extrema[0]));
    ky.push_back(x[extrema[0]]);
  } else {
    kx.push_back(0.0);
    ky.push_back(x[0]);
  }
  for (Index i = 0; i < m; ++i) {
    kx.push_back(static_cast<double>(extrema[static_cast<std::size_t>(i)]));
    ky.push_back(x[extrema[static_cast<std::size_t>(i)]]);
  }
  const Index last = n - 1;
  if (policy == BoundaryPolicy::mirror) {
    kx.push_back(static_cast<double>(2 * last - extrema[m - 1]));
    ky.push_back(x[extrema[m - 1]]);
    kx.push_back(static_cast<double>(2 * last - extrema[m - 2]));
    ky.push_back(x[extrema[m - 2]]);
  } else {
    kx.push_back(static_cast<double>(last));
    ky.push_back(x[last]);
  }

  // Mirror can duplicate abscissae when extrema sit symmetric to an end;
  // drop the duplicate, keeping the interior knot.
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < kx.size(); ++i) {
    if (!fx.empty() && kx[i] <= fx.back()) continue;
    fx.push_back(kx[i]);
    fy.push_back(ky[i]);
  }

  NaturalCubicSpline spline(Eigen::Map<const Vec>(fx.data(), static_cast<Index>(fx.size())),
                            Eigen::Map<const Vec>(fy.data(), static_cast<Index>(fy.size())));
  return spline.sample(n);
}

double range_of(const Vec& x) { return x.maxCoeff() - x.minCoeff(); }

void check_config(const SiftConfig& cfg) {
  if (!(cfg.sd_threshold > 0.0 && cfg.sd_threshold < 1.0)) {
    throw std::invalid_argument("sd threshold must lie strictly between 0 and 1");
  }
  if (cfg.max_sift_iters < 1) throw std::invalid_argument("sift iteration cap must be at least 1");
  if (cfg.max_imfs < 1) throw std::invalid_argument("mode cap must be at least 1");
  if (cfg.residual_range_floor < 0.0) {
    throw std::invalid_argument("residual range floor must be non-negative");
  }
}

}  // namespace

std::pair<Vec, Vec> envelopes(const Vec& x, BoundaryPolicy policy) {
  const std::vector<Index> maxima = local_maxima(x);
  const std::vector<Index> minima = local_minima(x);
  if (maxima.size() < 2 || minima.size() < 2) {
    throw MonotoneSignalError("too few extrema to build envelopes");
  }
  Vec upper = envelope_through(x, maxima, policy);
  Vec lower = envelope_through(x, minima, policy);
  // Envelopes interpolate their knots, so they already touch x at every
  // extremum; swap any boundary crossings so upper stays the upper one.
  for (Index i = 0; i < x.size(); ++i) {
    if (upper[i] < lower[i]) std::swap(upper[i], lower[i]);
  }
  return {std::move(upper), std::move(lower)};
}

std::pair<Vec, double> sift_once(const Vec& h, BoundaryPolicy policy) {
  auto [upper, lower] = envelopes(h, policy);
  Vec h_next = h - 0.5 * (upper + lower);

  // Plain sequential accumulation: the normalized squared difference must
  // reproduce the textbook sum bit for bit.
  double num = 0.0;
  double den = 0.0;
  for (Index i = 0; i < h.size(); ++i) {
    const double d = h[i] - h_next[i];
    num += d * d;
    den += h[i] * h[i];
  }
  if (den == 0.0) throw DegenerateInputError("sift on an all-zero series");
  return {std::move(h_next), num / den};
}

std::pair<Vec, Index> extract_imf(const Vec& x, const SiftConfig& cfg) {
  check_config(cfg);
  Vec h = x;
  Index iters = 0;
  while (iters < cfg.max_sift_iters) {
    auto [h_next, sd] = sift_once(h, cfg.boundary);
    h = std::move(h_next);
    ++iters;
    if (sd >= cfg.sd_threshold) continue;
    // A small sd alone is not enough: broadband modes settle in amplitude
    // while their crossing and extrema counts still disagree, and such a mode
    // is not yet done. Keep sifting until the counts line up or the cap hits.
    const Index zc = count_zero_crossings(h);
    const Index ex = count_extrema(h);
    if (std::abs(zc - ex) <= 1) break;
  }
  return {std::move(h), iters};
}

ImfSet decompose(const Signal& x, const SiftConfig& cfg) {
  check_config(cfg);
  ImfSet out;
  Vec residual = x.samples;
  const double source_range = range_of(residual);

  while (static_cast<Index>(out.imfs.size()) < cfg.max_imfs) {
    if (range_of(residual) < cfg.residual_range_floor * source_range) break;
    try {
      auto [imf, iters] = extract_imf(residual, cfg);
      residual -= imf;
      out.imfs.push_back(std::move(imf));
      out.sift_counts.push_back(iters);
    } catch (const MonotoneSignalError&) {
      break;
    }
  }
  out.residual = std::move(residual);
  return out;
}

}  // namespace gfd
