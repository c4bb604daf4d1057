#include "wmx/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <opencv2/core.hpp>

#include "wmx/error.hpp"

namespace wmx {

std::vector<double> dct_matrix(int n) {
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u) {
    const double c = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int x = 0; x < n; ++x) {
      m[static_cast<std::size_t>(u) * n + x] =
          c * std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * n));
    }
  }
  return m;
}

double dct_basis(int n, int u, int v, int x, int y) {
  const double cu = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  const double cv = v == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  return cu * std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * n)) * cv *
         std::cos(std::numbers::pi * (2 * y + 1) * v / (2.0 * n));
}

namespace {

// out = M_rows * p * M_cols^T (forward) or M_rows^T * p * M_cols (inverse).
Plane separable(const Plane& p, bool inverse) {
  const int w = p.width, h = p.height;
  auto mr = dct_matrix(h);
  auto mc = dct_matrix(w);
  const cv::Mat rows(h, h, CV_64F, mr.data());
  const cv::Mat cols(w, w, CV_64F, mc.data());
  const cv::Mat in(h, w, CV_64F, const_cast<double*>(p.v.data()));
  cv::Mat tmp, res;
  cv::gemm(rows, in, 1.0, cv::noArray(), 0.0, tmp, inverse ? cv::GEMM_1_T : 0);
  cv::gemm(tmp, cols, 1.0, cv::noArray(), 0.0, res, inverse ? 0 : cv::GEMM_2_T);
  Plane out(w, h);
  std::copy(res.ptr<double>(), res.ptr<double>() + out.v.size(), out.v.begin());
  return out;
}

}  // namespace

namespace {

// OpenCV's DCT handles even sizes only; its scaling is the orthonormal one.
Plane transform(const Plane& p, bool inverse) {
  if (p.width % 2 != 0 || p.height % 2 != 0) return separable(p, inverse);
  const cv::Mat in(p.height, p.width, CV_64F, const_cast<double*>(p.v.data()));
  cv::Mat res;
  cv::dct(in, res, inverse ? cv::DCT_INVERSE : 0);
  Plane out(p.width, p.height);
  std::copy(res.ptr<double>(), res.ptr<double>() + out.v.size(), out.v.begin());
  return out;
}

}  // namespace

Plane dct2d(const Plane& p) { return transform(p, false); }
Plane idct2d(const Plane& p) { return transform(p, true); }

HaarBands haar_forward(const Plane& p) {
  if (p.width % 2 != 0 || p.height % 2 != 0) throw DimensionError("haar_forward: odd plane size");
  const int w = p.width / 2, h = p.height / 2;
  HaarBands b{Plane(w, h), Plane(w, h), Plane(w, h), Plane(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double a = p.at(2 * x, 2 * y), bb = p.at(2 * x + 1, 2 * y);
      const double c = p.at(2 * x, 2 * y + 1), d = p.at(2 * x + 1, 2 * y + 1);
      b.ll.at(x, y) = 0.5 * (a + bb + c + d);
      b.hl.at(x, y) = 0.5 * (a - bb + c - d);
      b.lh.at(x, y) = 0.5 * (a + bb - c - d);
      b.hh.at(x, y) = 0.5 * (a - bb - c + d);
    }
  }
  return b;
}

Plane haar_inverse(const HaarBands& b) {
  const int w = b.ll.width, h = b.ll.height;
  Plane p(2 * w, 2 * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double ll = b.ll.at(x, y), hl = b.hl.at(x, y), lh = b.lh.at(x, y), hh = b.hh.at(x, y);
      p.at(2 * x, 2 * y) = 0.5 * (ll + hl + lh + hh);
      p.at(2 * x + 1, 2 * y) = 0.5 * (ll - hl + lh - hh);
      p.at(2 * x, 2 * y + 1) = 0.5 * (ll + hl - lh - hh);
      p.at(2 * x + 1, 2 * y + 1) = 0.5 * (ll - hl - lh + hh);
    }
  }
  return p;
}

std::vector<std::pair<int, int>> zigzag_order(int rows, int cols) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int s = 0; s < rows + cols - 1; ++s) {
    if (s % 2 == 0) {
      // Up and to the right.
      for (int r = std::min(s, rows - 1); r >= 0 && s - r < cols; --r) out.emplace_back(r, s - r);
    } else {
      for (int c = std::min(s, cols - 1); c >= 0 && s - c < rows; --c) out.emplace_back(s - c, c);
    }
  }
  return out;
}

}  // namespace wmx
