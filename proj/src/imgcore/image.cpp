#include "wmx/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "wmx/detail/cv_bridge.hpp"
#include "wmx/error.hpp"

namespace wmx {
namespace {

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": image shapes differ (" + std::to_string(a.width()) +
                         "x" + std::to_string(a.height()) + "x" + std::to_string(a.channels()) +
                         " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()) +
                         "x" + std::to_string(b.channels()) + ")");
  }
}

void require_rgb(const Image& img, const char* what) {
  if (img.channels() != 3) throw DimensionError(std::string(what) + ": expected 3 channels");
}

// JFIF forward matrix rows; chroma rows sum to zero.
constexpr double kToYcc[3][3] = {{0.299, 0.587, 0.114},
                                 {-0.168735891647856, -0.331264108352144, 0.5},
                                 {0.5, -0.418687589158345, -0.081312410841655}};
constexpr double kToRgb[3][3] = {{1.0, 0.0, 1.402},
                                 {1.0, -0.344136286201022, -0.714136286201022},
                                 {1.0, 1.772, 0.0}};

double chroma_offset(PixelRange r) { return r.min + r.span() * (128.0 / 255.0); }

}  // namespace

Image::Image(int width, int height, int channels, double fill, PixelRange range)
    : width_(width), height_(height), channels_(channels), range_(range) {
  if (width < 0 || height < 0 || channels < 0) throw DimensionError("negative image dimension");
  if (!(range.max > range.min)) throw ConfigError("pixel range must satisfy max > min");
  data_.assign(static_cast<std::size_t>(width) * height * channels, range.clamp(fill));
}

Image Image::from_samples(int width, int height, int channels, std::vector<double> samples,
                          PixelRange range) {
  if (samples.size() != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionError("sample count does not match width*height*channels");
  }
  if (!(range.max > range.min)) throw ConfigError("pixel range must satisfy max > min");
  Image img;
  img.width_ = width;
  img.height_ = height;
  img.channels_ = channels;
  img.range_ = range;
  for (auto& v : samples) v = range.clamp(v);
  img.data_ = std::move(samples);
  return img;
}

double mean_squared_error(const Image& a, const Image& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) throw DimensionError("mse: empty image");
  const auto sa = a.samples();
  const auto sb = b.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    acc += d * d;
  }
  return acc / static_cast<double>(sa.size());
}

double psnr(const Image& a, const Image& b) {
  const double mse = mean_squared_error(a, b);
  if (mse == 0.0) return kInfinitePsnr;
  const double r = a.range().span();
  return 10.0 * std::log10(r * r / mse);
}

Residual residual(const Image& watermarked, const Image& original) {
  require_same_shape(watermarked, original, "residual");
  Residual r{original.width(), original.height(), original.channels(), original.range(), {}};
  const auto w = watermarked.samples();
  const auto o = original.samples();
  r.data.resize(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) r.data[i] = w[i] - o[i];
  return r;
}

Image apply_residual(const Image& original, const Residual& r, double scale) {
  if (r.width != original.width() || r.height != original.height() ||
      r.channels != original.channels() || r.data.size() != original.sample_count()) {
    throw DimensionError("apply_residual: residual shape does not match image");
  }
  const auto o = original.samples();
  std::vector<double> out(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) out[i] = o[i] + scale * r.data[i];
  return Image::from_samples(original.width(), original.height(), original.channels(),
                             std::move(out), original.range());
}

Image rgb_to_ycbcr(const Image& img) {
  require_rgb(img, "rgb_to_ycbcr");
  const PixelRange range = img.range();
  const double off = chroma_offset(range);
  const auto s = img.samples();
  std::vector<double> out(s.size());
  for (std::size_t p = 0; p < s.size(); p += 3) {
    const double r = s[p] - range.min, g = s[p + 1] - range.min, b = s[p + 2] - range.min;
    out[p] = range.min + kToYcc[0][0] * r + kToYcc[0][1] * g + kToYcc[0][2] * b;
    out[p + 1] = off + kToYcc[1][0] * r + kToYcc[1][1] * g + kToYcc[1][2] * b;
    out[p + 2] = off + kToYcc[2][0] * r + kToYcc[2][1] * g + kToYcc[2][2] * b;
  }
  return Image::from_samples(img.width(), img.height(), 3, std::move(out), range);
}

Image ycbcr_to_rgb(const Image& img) {
  require_rgb(img, "ycbcr_to_rgb");
  const PixelRange range = img.range();
  const double off = chroma_offset(range);
  const auto s = img.samples();
  std::vector<double> out(s.size());
  for (std::size_t p = 0; p < s.size(); p += 3) {
    const double y = s[p] - range.min, cb = s[p + 1] - off, cr = s[p + 2] - off;
    for (int c = 0; c < 3; ++c) {
      out[p + c] = range.min + kToRgb[c][0] * y + kToRgb[c][1] * cb + kToRgb[c][2] * cr;
    }
  }
  return Image::from_samples(img.width(), img.height(), 3, std::move(out), range);
}

std::vector<double> luma_plane(const Image& img) {
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  std::vector<double> y(n);
  const auto s = img.samples();
  if (img.channels() == 1) {
    std::copy(s.begin(), s.end(), y.begin());
  } else if (img.channels() == 3) {
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = kToYcc[0][0] * s[3 * i] + kToYcc[0][1] * s[3 * i + 1] + kToYcc[0][2] * s[3 * i + 2];
    }
  } else {
    throw DimensionError("luma_plane: expected 1 or 3 channels");
  }
  return y;
}

Image add_luma(const Image& img, std::span<const double> delta) {
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  if (delta.size() != n) throw DimensionError("add_luma: delta plane size mismatch");
  const int ch = img.channels();
  const auto s = img.samples();
  std::vector<double> out(s.begin(), s.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < ch; ++c) out[i * ch + c] += delta[i];
  }
  return Image::from_samples(img.width(), img.height(), ch, std::move(out), img.range());
}

namespace {

Image export_linear(const Residual& r, double gain, bool ycbcr) {
  const double mid = r.range.mid();
  std::vector<double> out(r.data.size());
  if (!ycbcr) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mid + gain * r.data[i];
  } else {
    if (r.channels != 3) throw DimensionError("export_residual: ycbcr mode needs 3 channels");
    for (std::size_t p = 0; p < out.size(); p += 3) {
      for (int c = 0; c < 3; ++c) {
        const double v = kToYcc[c][0] * r.data[p] + kToYcc[c][1] * r.data[p + 1] +
                         kToYcc[c][2] * r.data[p + 2];
        out[p + c] = mid + gain * v;
      }
    }
  }
  return Image::from_samples(r.width, r.height, r.channels, std::move(out), r.range);
}

Image export_fourier(const Residual& r) {
  const int w = r.width, h = r.height, ch = r.channels;
  std::vector<double> mag(r.data.size());
  cv::Mat plane(h, w, CV_64F);
  cv::Mat spectrum;
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) plane.at<double>(y, x) = r.at(x, y, c);
    }
    cv::dft(plane, spectrum, cv::DFT_COMPLEX_OUTPUT);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto z = spectrum.at<cv::Vec2d>(y, x);
        // Shift so the zero frequency lands in the centre.
        const int sx = (x + w / 2) % w, sy = (y + h / 2) % h;
        mag[(static_cast<std::size_t>(sy) * w + sx) * ch + c] = std::log1p(std::hypot(z[0], z[1]));
      }
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(mag.begin(), mag.end());
  const double lo = mag.empty() ? 0.0 : *lo_it, hi = mag.empty() ? 0.0 : *hi_it;
  // Relative tolerance: an impulse gives a spectrum that is constant up to rounding.
  const bool flat = hi - lo <= 1e-12 * std::max(1.0, std::abs(hi));
  for (auto& v : mag) v = flat ? r.range.min : r.range.min + r.range.span() * (v - lo) / (hi - lo);
  return Image::from_samples(w, h, ch, std::move(mag), r.range);
}

}  // namespace

Image export_residual(const Residual& r, ExportMode mode, double gain) {
  if (r.data.size() != static_cast<std::size_t>(r.width) * r.height * r.channels) {
    throw DimensionError("export_residual: residual data size mismatch");
  }
  switch (mode) {
    case ExportMode::rgb:
      return export_linear(r, gain, false);
    case ExportMode::ycbcr:
      return export_linear(r, gain, true);
    case ExportMode::fourier:
      return export_fourier(r);
  }
  throw ConfigError("export_residual: unknown mode");
}

ExportMode parse_export_mode(std::string_view name) {
  if (name == "rgb") return ExportMode::rgb;
  if (name == "ycbcr") return ExportMode::ycbcr;
  if (name == "fourier") return ExportMode::fourier;
  throw ConfigError("unknown residual mode '" + std::string(name) + "' (expected rgb, ycbcr, fourier)");
}

Image read_png(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw Error("cannot read image " + path.string());
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  std::vector<double> samples(static_cast<std::size_t>(rgb.rows) * rgb.cols * 3);
  for (int y = 0; y < rgb.rows; ++y) {
    const auto* row = rgb.ptr<std::uint8_t>(y);
    for (int i = 0; i < rgb.cols * 3; ++i) {
      samples[static_cast<std::size_t>(y) * rgb.cols * 3 + i] = row[i];
    }
  }
  return Image::from_samples(rgb.cols, rgb.rows, 3, std::move(samples));
}

Image quantize8(const Image& img) {
  const PixelRange range = img.range();
  const double step = range.span() / 255.0;
  std::vector<double> out(img.samples().begin(), img.samples().end());
  for (auto& v : out) v = range.min + std::round((v - range.min) / step) * step;
  return Image::from_samples(img.width(), img.height(), img.channels(), std::move(out), range);
}

void write_png(const std::filesystem::path& path, const Image& img) {
  if (img.channels() != 3 && img.channels() != 1) {
    throw DimensionError("write_png: expected 1 or 3 channels");
  }
  const PixelRange range = img.range();
  cv::Mat m(img.height(), img.width(), img.channels() == 3 ? CV_8UC3 : CV_8UC1);
  const auto s = img.samples();
  for (int y = 0; y < img.height(); ++y) {
    auto* row = m.ptr<std::uint8_t>(y);
    for (int i = 0; i < img.width() * img.channels(); ++i) {
      const double v = s[static_cast<std::size_t>(y) * img.width() * img.channels() + i];
      row[i] = static_cast<std::uint8_t>(std::lround(255.0 * (v - range.min) / range.span()));
    }
  }
  if (img.channels() == 3) cv::cvtColor(m, m, cv::COLOR_RGB2BGR);
  if (!cv::imwrite(path.string(), m)) throw Error("cannot write image " + path.string());
}

namespace detail {

cv::Mat to_mat(const Image& img) {
  cv::Mat m(img.height(), img.width(), CV_MAKETYPE(CV_64F, img.channels()));
  const auto s = img.samples();
  std::copy(s.begin(), s.end(), m.ptr<double>(0));
  return m;
}

Image from_mat(const cv::Mat& m, PixelRange range) {
  cv::Mat d;
  if (m.depth() == CV_64F && m.isContinuous()) {
    d = m;
  } else {
    m.convertTo(d, CV_MAKETYPE(CV_64F, m.channels()));
  }
  const auto* p = d.ptr<double>(0);
  std::vector<double> samples(p, p + static_cast<std::size_t>(d.rows) * d.cols * d.channels());
  return Image::from_samples(d.cols, d.rows, d.channels(), std::move(samples), range);
}

}  // namespace detail
}  // namespace wmx
