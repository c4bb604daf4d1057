#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace wmx {

// Single-channel row-major plane.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> v;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0)
      : width(w), height(h), v(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
};

// Orthonormal DCT-II basis: basis(u, x) = c(u) cos(pi (2x + 1) u / 2n).
std::vector<double> dct_matrix(int n);

// Separable orthonormal 2D DCT-II of a whole plane and its inverse.
Plane dct2d(const Plane& p);
Plane idct2d(const Plane& p);

// Value at (x, y) of the orthonormal 2D DCT basis function (u, v) on an n x n block.
double dct_basis(int n, int u, int v, int x, int y);

// One-level orthonormal Haar subbands; HL holds horizontal detail, LH vertical.
struct HaarBands {
  Plane ll, hl, lh, hh;
};

// Needs even width and height.
HaarBands haar_forward(const Plane& p);
Plane haar_inverse(const HaarBands& b);

// (row, col) pairs of a rows x cols grid in JPEG zig-zag order.
std::vector<std::pair<int, int>> zigzag_order(int rows, int cols);

}  // namespace wmx
