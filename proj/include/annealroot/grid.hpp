#pragma once

#include <cstddef>

#include "annealroot/problem.hpp"

namespace annealroot {

/// Evenly spaced nx-by-ny lattice over a rectangle, endpoints included.
///
/// Cells are stored row-major: index = j * nx + i, with i along the real
/// axis and j along the imaginary axis (j = 0 at im_min).
struct GridSpec {
  double re_min = -2.0;
  double re_max = 2.0;
  double im_min = -2.0;
  double im_max = 2.0;
  int nx = 1000;
  int ny = 1000;

  void validate() const;

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

  /// Weighted-endpoint form, so grids symmetric about an axis produce
  /// bitwise mirror-image coordinates.
  Complex point(int i, int j) const {
    return {axis(re_min, re_max, i, nx), axis(im_min, im_max, j, ny)};
  }

 private:
  static double axis(double lo, double hi, int k, int n) {
    if (n == 1) return lo;
    return (lo * (n - 1 - k) + hi * k) / (n - 1);
  }
};

}  // namespace annealroot
