// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "gfd/cwt.hpp"
#include "test_util.hpp"

using gfd::Index;
using gfd::Vec;

namespace {

// Straight transcription of the transform definition, no kernel reuse.
double direct_coefficient(const Vec& x, double a, double b) {
  const Index lo = static_cast<Index>(std::ceil(b - 6.0 * a));
  const Index hi = static_cast<Index>(std::floor(b + 6.0 * a));
  double sum = 0.0;
  for (Index t = lo; t <= hi; ++t) {
    if (t < 0 || t >= x.size()) continue;  // zero extension
    sum += x[t] * gfd::morlet((static_cast<double>(t) - b) / a) / std::sqrt(a);
  }
  return sum;
}

}  // namespace

TEST_CASE("mother wavelet") {
  CHECK(gfd::morlet(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  for (double t : {0.3, 1.1, 2.7}) {
    CHECK(gfd::morlet(t) == doctest::Approx(gfd::morlet(-t)).epsilon(1e-15));
  }
  CHECK(std::abs(gfd::morlet(10.0)) < 1e-40);  // support is effectively [-6, 6]
  CHECK(std::abs(gfd::morlet(6.0)) < 1e-15);

  // Oscillation parameter: first zero of cos(5t) at t = pi/10.
  CHECK(gfd::morlet(testutil::kPi / 10.0) == doctest::Approx(0.0).epsilon(1e-15));
  gfd::WaveletParams slow;
  slow.two_pi_nu0 = 2.0;
  CHECK(gfd::morlet(testutil::kPi / 4.0, slow) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("daughter kernels") {
  const gfd::SampledKernel unit = gfd::daughter(1.0, 0.0);
  CHECK(unit.start == -6);
  REQUIRE(unit.taps.size() == 13);
  for (Index i = 0; i < 13; ++i) {
    CHECK(unit.taps[i] == gfd::morlet(static_cast<double>(unit.start + i)));
  }

  const gfd::SampledKernel shifted = gfd::daughter(2.0, 0.5);
  CHECK(shifted.start == -11);  // ceil(0.5 - 12)
  CHECK(shifted.start + shifted.taps.size() - 1 == 12);
  const double expect = gfd::morlet((3.0 - 0.5) / 2.0) / std::sqrt(2.0);
  CHECK(shifted.taps[3 - shifted.start] == doctest::Approx(expect).epsilon(1e-15));

  // Unit-step sampling keeps the kernel energy scale-free.
  const double e5 = gfd::daughter(5.0, 0.0).taps.squaredNorm();
  for (double a : {10.0, 20.0, 40.0}) {
    CHECK(gfd::daughter(a, 0.0).taps.squaredNorm() == doctest::Approx(e5).epsilon(1e-6));
  }

  CHECK_THROWS_AS(gfd::daughter(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gfd::daughter(-3.0, 0.0), std::invalid_argument);
}

TEST_CASE("scale grids") {
  const gfd::ScaleGrid grid = gfd::ScaleGrid::integer_range(5);
  REQUIRE(grid.size() == 5);
  CHECK(grid.scales[0] == 1.0);
  CHECK(grid.scales[4] == 5.0);
  CHECK(grid.index_of(3.0) == 2);
  CHECK(grid.index_of(3.5) == -1);

  CHECK_THROWS_AS(gfd::ScaleGrid::integer_range(0), std::invalid_argument);
  CHECK_THROWS_AS(gfd::make_scale_grid(Vec::Zero(3)), std::invalid_argument);
  Vec down(3);
  down << 3, 2, 1;
  CHECK_THROWS_AS(gfd::make_scale_grid(down), std::invalid_argument);
  Vec flat(2);
  flat << 2, 2;
  CHECK_THROWS_AS(gfd::make_scale_grid(flat), std::invalid_argument);
}

TEST_CASE("transform matches the direct sum") {
  std::mt19937_64 eng(5);
  Vec x = testutil::random_tone_mix(eng, 64);
  const gfd::Signal sig = gfd::make_signal(x, 1000.0);

  Vec scales(4);
  scales << 1.0, 2.0, 3.5, 5.0;
  const gfd::Scalogram sc = gfd::cwt(sig, gfd::make_scale_grid(scales));

  REQUIRE(sc.coefficients.rows() == 4);
  REQUIRE(sc.coefficients.cols() == 64);
  CHECK(sc.signal_len == 64);
  CHECK(sc.grid.scales[2] == 3.5);

  double worst = 0.0;
  for (Index row = 0; row < 4; ++row) {
    for (Index b = 0; b < 64; ++b) {
      const double ref = direct_coefficient(x, scales[row], static_cast<double>(b));
      worst = std::max(worst, std::abs(sc.coefficients(row, b) - ref));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("transform basics") {
  const gfd::Signal zero = {Vec::Zero(128), 100.0};
  const gfd::ScaleGrid grid = gfd::ScaleGrid::integer_range(8);
  CHECK(gfd::cwt(zero, grid).coefficients.cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 eng(9);
  const Vec u = testutil::random_tone_mix(eng, 256);
  const Vec v = testutil::random_tone_mix(eng, 256);
  const gfd::Mat wu = gfd::cwt({u, 100.0}, grid).coefficients;
  const gfd::Mat wv = gfd::cwt({v, 100.0}, grid).coefficients;
  const gfd::Mat wmix = gfd::cwt({2.0 * u - 0.5 * v, 100.0}, grid).coefficients;
  CHECK((wmix - (2.0 * wu - 0.5 * wv)).cwiseAbs().maxCoeff() < 1e-10);

  // Integer shift moves the response along without reshaping it.
  const Index shift = 37;
  Vec moved = Vec::Zero(256);
  moved.tail(256 - shift) = u.head(256 - shift);
  const gfd::Mat wm = gfd::cwt({moved, 100.0}, grid).coefficients;
  for (Index row = 0; row < grid.size(); ++row) {
    const Index r = static_cast<Index>(6.0 * grid.scales[row]) + 1;
    for (Index b = r; b + shift + r < 256; b += 5) {
      CHECK(std::abs(wm(row, b + shift) - wu(row, b)) < 1e-10);
    }
  }

  // Kernel wider than four signal lengths is refused.
  CHECK_THROWS_AS(gfd::cwt({Vec::Ones(64), 100.0}, gfd::make_scale_grid(Vec::Constant(1, 22.0))),
                  std::invalid_argument);
}

TEST_CASE("tone energy concentrates at the matching scale") {
  // 25 Hz at 1 kHz should peak near scale 31.8.
  Vec x(1500);
  for (Index t = 0; t < x.size(); ++t)
    x[t] = std::sin(2.0 * testutil::kPi * 25.0 * static_cast<double>(t) / 1000.0);
  const gfd::Scalogram sc = gfd::cwt({x, 1000.0}, gfd::ScaleGrid::integer_range(64));

  const double target = gfd::scale_for_frequency(25.0, 1000.0);
  Index best = 0;
  double best_mean = -1.0;
  for (Index row = 0; row < 64; ++row) {
    const double m = sc.coefficients.row(row).segment(400, 700).cwiseAbs().mean();
    if (m > best_mean) {
      best_mean = m;
      best = row;
    }
  }
  const double got = sc.grid.scales[best];
  CHECK(std::abs(got - target) / target < 0.10);
}

TEST_CASE("two-tone scalogram shows both ridges") {
  const gfd::ComponentMix mix = gfd::generate_example1(3.0, 1000.0);
  const gfd::Scalogram sc = gfd::cwt(mix.y, gfd::ScaleGrid::integer_range(64));

  Vec profile(64);
  for (Index row = 0; row < 64; ++row)
    profile[row] = sc.coefficients.row(row).segment(300, 2400).cwiseAbs().mean();

  auto band_peak = [&](Index lo, Index hi) {  // scales are row + 1
    Index best = lo;
    for (Index s = lo; s <= hi; ++s)
      if (profile[s - 1] > profile[best - 1]) best = s;
    return best;
  };

  const Index fast = band_peak(14, 26);  // 40 Hz lives near scale 20
  const Index slow = band_peak(32, 48);  // 20 Hz lives near scale 40
  CHECK(std::abs(fast - 20) <= 2);
  CHECK(std::abs(slow - 40) <= 4);

  // The 40 Hz component has twice the amplitude, so its ridge wins overall.
  const Index global = band_peak(1, 64);
  CHECK(std::abs(global - 20) <= 2);

  // Interior ridge points are genuine local maxima along the scale axis.
  CHECK(profile[fast - 1] > profile[fast - 3]);
  CHECK(profile[fast - 1] > profile[fast + 1]);
  CHECK(profile[slow - 1] > profile[slow - 3]);
  CHECK(profile[slow - 1] > profile[slow + 1]);
}

TEST_CASE("scale for frequency") {
  CHECK(gfd::scale_for_frequency(20.0, 1000.0) == doctest::Approx(39.78873577).epsilon(1e-9));
  CHECK(gfd::scale_for_frequency(40.0, 1000.0) == doctest::Approx(19.89436789).epsilon(1e-9));
  const double f_unit = 5.0 / (2.0 * testutil::kPi) * 1000.0;
  CHECK(gfd::scale_for_frequency(f_unit, 1000.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gfd::scale_for_frequency(0.0, 1000.0), std::invalid_argument);
  CHECK_THROWS_AS(gfd::scale_for_frequency(20.0, 0.0), std::invalid_argument);
}
