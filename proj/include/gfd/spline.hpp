// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gfd/types.hpp"

namespace gfd {

/// Natural cubic spline through strictly increasing knots: second derivative
/// zero at both end knots. With two knots it degenerates to the straight
/// line through them. Queries at a knot abscissa return the knot ordinate
/// bit for bit.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(Vec knots_x, Vec knots_y);

  double operator()(double t) const;

  /// Evaluates at t = 0, 1, ..., count-1 in one monotone sweep.
  Vec sample(Index count) const;

 private:
  Index segment_of(double t) const;
  double eval_segment(Index seg, double t) const;

  Vec x_, y_;
  Vec second_;  // second derivative at each knot
};

}  // namespace gfd
