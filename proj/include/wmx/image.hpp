#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace wmx {

struct PixelRange {
  double min = 0.0;
  double max = 255.0;

  double span() const { return max - min; }
  double mid() const { return 0.5 * (min + max); }
  double clamp(double v) const { return v < min ? min : (v > max ? max : v); }
  bool operator==(const PixelRange&) const = default;
};

// Interleaved raster (row-major, channels innermost) of floating point
// samples. Every sample stays inside range() after any public operation;
// values are quantized to 8 bits only when written to disk.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0, PixelRange range = {});

  // Takes ownership of samples and clamps them into range.
  static Image from_samples(int width, int height, int channels, std::vector<double> samples,
                            PixelRange range = {});

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  PixelRange range() const { return range_; }
  std::size_t sample_count() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<const double> samples() const { return data_; }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  double at(int x, int y, int c) const { return data_[index(x, y, c)]; }
  // Clamps v into range.
  void set(int x, int y, int c, double v) { data_[index(x, y, c)] = range_.clamp(v); }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_ &&
           range_ == other.range_;
  }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  PixelRange range_{};
  std::vector<double> data_;
};

// Signed, unclamped difference between two images of one shape.
struct Residual {
  int width = 0;
  int height = 0;
  int channels = 0;
  PixelRange range{};
  std::vector<double> data;

  double at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

// 10 log10(R^2 / MSE) over all samples; kInfinitePsnr when the images match.
double psnr(const Image& a, const Image& b);

double mean_squared_error(const Image& a, const Image& b);

Residual residual(const Image& watermarked, const Image& original);

// clamp(original + scale * r) per sample.
Image apply_residual(const Image& original, const Residual& r, double scale);

// Full-range BT.601 (JFIF). Chroma is offset by 128/255 of the range, which
// is 128 for the default [0, 255].
Image rgb_to_ycbcr(const Image& img);
Image ycbcr_to_rgb(const Image& img);

// Luma plane (width*height values) of a 3-channel image, or the single
// channel of a 1-channel one.
std::vector<double> luma_plane(const Image& img);

// Adds delta (width*height values) to every channel and clamps. Shifting R,
// G and B equally changes BT.601 luma by exactly delta and leaves chroma alone.
Image add_luma(const Image& img, std::span<const double> delta);

enum class ExportMode { rgb, ycbcr, fourier };

// Visualises a residual. rgb/ycbcr: mid-range + gain * r (ycbcr first maps r
// through the linear part of the colour transform). fourier: per-channel 2D DFT
// magnitude, log(1 + |X|), zero frequency centred, min-max normalised over all
// channels; a constant spectrum maps to range().min.
Image export_residual(const Residual& r, ExportMode mode, double gain = 1.0);

ExportMode parse_export_mode(std::string_view name);

// 8-bit PNG I/O. Grayscale files are expanded to RGB; alpha is dropped.
Image read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image& img);

// Rounds every sample to the 8-bit grid of its range, as a PNG round trip would.
Image quantize8(const Image& img);

}  // namespace wmx
