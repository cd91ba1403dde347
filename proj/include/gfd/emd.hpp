// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "gfd/signal.hpp"
#include "gfd/types.hpp"

namespace gfd {

enum class BoundaryPolicy { mirror, clamp };

struct SiftConfig {
  double sd_threshold = 0.25;
  Index max_sift_iters = 64;
  Index max_imfs = 32;
  BoundaryPolicy boundary = BoundaryPolicy::mirror;
  /// Decomposition stops once the residual's peak-to-peak range drops below
  /// this fraction of the source's. Keeps spline ripple from being peeled
  /// off as bogus extra modes.
  double residual_range_floor = 0.01;
};

struct ImfSet {
  std::vector<Vec> imfs;
  Vec residual;
  /// Sift iterations spent on each mode. An entry equal to the configured
  /// max_sift_iters marks a cap-terminated mode.
  std::vector<Index> sift_counts;
};

/// Interior local extrema, plateau-aware (a flat top yields its middle index).
std::vector<Index> local_maxima(const Vec& x);
std::vector<Index> local_minima(const Vec& x);

/// Sign changes between consecutive non-zero samples.
Index count_zero_crossings(const Vec& x);
Index count_extrema(const Vec& x);

/// Cubic-spline envelopes through the local maxima (upper) and minima
/// (lower), evaluated at every sample index. Throws MonotoneSignalError
/// when either side has fewer than two extrema.
std::pair<Vec, Vec> envelopes(const Vec& x, BoundaryPolicy policy);

/// One sifting step: returns h - mean_envelope(h) and the normalized squared
/// difference sd = sum((h - h_next)^2) / sum(h^2).
std::pair<Vec, double> sift_once(const Vec& h, BoundaryPolicy policy);

/// Sifts until sd < sd_threshold and the zero-crossing and extrema counts
/// agree within one, or the iteration cap is hit. Returns the mode and the
/// number of sifts spent.
std::pair<Vec, Index> extract_imf(const Vec& x, const SiftConfig& cfg);

/// Peels modes off the running residual, highest frequency first, until the
/// residual has too few extrema, its range falls under the floor, or
/// max_imfs is reached. The modes plus residual always sum back to x.
ImfSet decompose(const Signal& x, const SiftConfig& cfg);

}  // namespace gfd
