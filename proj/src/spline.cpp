// SPDX-License-Identifier: Apache-2.0
#include "gfd/spline.hpp"

#include <stdexcept>
#include <utility>

namespace gfd {

NaturalCubicSpline::NaturalCubicSpline(Vec knots_x, Vec knots_y)
    : x_(std::move(knots_x)), y_(std::move(knots_y)) {
  const Index n = x_.size();
  if (n < 2) throw std::invalid_argument("spline needs at least two knots");
  if (y_.size() != n) throw std::invalid_argument("spline knot x/y size mismatch");
  for (Index i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline knots must be strictly increasing");
  }

  second_ = Vec::Zero(n);
  if (n == 2) return;

  // Tridiagonal system for interior second derivatives, natural ends fixed
  // at zero. Solved with the Thomas algorithm.
  const Index m = n - 2;
  Vec diag(m), rhs(m), upper(m);
  for (Index i = 0; i < m; ++i) {
    const double h0 = x_[i + 1] - x_[i];
    const double h1 = x_[i + 2] - x_[i + 1];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
  }
  for (Index i = 1; i < m; ++i) {
    const double lower = x_[i + 1] - x_[i];
    const double factor = lower / diag[i - 1];
    diag[i] -= factor * upper[i - 1];
    rhs[i] -= factor * rhs[i - 1];
  }
  second_[m] = rhs[m - 1] / diag[m - 1];
  for (Index i = m - 1; i >= 1; --i) {
    second_[i] = (rhs[i - 1] - upper[i - 1] * second_[i + 1]) / diag[i - 1];
  }
}

Index NaturalCubicSpline::segment_of(double t) const {
  // Rightmost segment whose left knot is <= t; clamps to the end segments
  // so out-of-range queries extrapolate the boundary cubic.
  Index lo = 0;
  Index hi = x_.size() - 2;
  while (lo < hi) {
    const Index mid = (lo + hi + 1) / 2;
    if (x_[mid] <= t) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

double NaturalCubicSpline::eval_segment(Index seg, double t) const {
  if (t == x_[seg]) return y_[seg];
  if (t == x_[seg + 1]) return y_[seg + 1];
  const double h = x_[seg + 1] - x_[seg];
  const double a = (x_[seg + 1] - t) / h;
  const double b = (t - x_[seg]) / h;
  return a * y_[seg] + b * y_[seg + 1] +
         ((a * a * a - a) * second_[seg] + (b * b * b - b) * second_[seg + 1]) * (h * h) / 6.0;
}

double NaturalCubicSpline::operator()(double t) const { return eval_segment(segment_of(t), t); }

Vec NaturalCubicSpline::sample(Index count) const {
  Vec out(count);
  Index seg = 0;
  const Index last_seg = x_.size() - 2;
  for (Index t = 0; t < count; ++t) {
    const double td = static_cast<double>(t);
    while (seg < last_seg && x_[seg + 1] <= td) ++seg;
    out[t] = eval_segment(seg, td);
  }
  return out;
}

}  // namespace gfd
