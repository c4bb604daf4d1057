#include "wmx/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "wmx/detail/cv_bridge.hpp"
#include "wmx/error.hpp"
#include "wmx/transforms.hpp"

namespace wmx {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Samples mapped to [0, 1]; all steps work on this scale.
cv::Mat normalized(const Image& img) {
  cv::Mat m = detail::to_mat(img);
  const PixelRange r = img.range();
  m.convertTo(m, m.type(), 1.0 / r.span(), -r.min / r.span());
  return m;
}

Image denormalized(const cv::Mat& m, PixelRange r) {
  cv::Mat out;
  m.convertTo(out, CV_64F, r.span(), r.min);
  return detail::from_mat(out, r);
}

void require_color(const cv::Mat& m, StepKind kind) {
  if (m.channels() != 3) {
    throw DimensionError(std::string(to_string(kind)) + " needs a 3-channel image");
  }
}

cv::Mat resize_to(const cv::Mat& m, int w, int h) {
  cv::Mat out;
  cv::resize(m, out, cv::Size(std::max(w, 1), std::max(h, 1)), 0, 0, cv::INTER_LINEAR);
  return out;
}

int odd_kernel(const ParamRange& k, Rng& rng) {
  const int lo = static_cast<int>(k.lo), hi = static_cast<int>(k.hi);
  std::vector<int> sizes;
  for (int s = lo; s <= hi; ++s) {
    if (s % 2 == 1) sizes.push_back(s);
  }
  if (sizes.empty()) throw ConfigError("kernel range holds no odd size");
  return sizes[rng.below(sizes.size())];
}

// BT.601 luma per pixel.
cv::Mat gray_of(const cv::Mat& m) {
  cv::Mat g(m.rows, m.cols, CV_64F);
  for (int y = 0; y < m.rows; ++y) {
    for (int x = 0; x < m.cols; ++x) {
      const auto& p = m.at<cv::Vec3d>(y, x);
      g.at<double>(y, x) = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
  }
  return g;
}

cv::Mat blend(const cv::Mat& base, const cv::Mat& img, double factor) {
  cv::Mat out;
  cv::addWeighted(img, factor, base, 1.0 - factor, 0.0, out);
  return cv::min(cv::max(out, 0.0), 1.0);
}

cv::Mat adjust_brightness(const cv::Mat& m, double f) { return cv::min(m * f, 1.0); }

cv::Mat adjust_contrast(const cv::Mat& m, double f) {
  const double mean = cv::mean(gray_of(m))[0];
  return blend(cv::Mat(m.size(), m.type(), cv::Scalar::all(mean)), m, f);
}

cv::Mat adjust_saturation(const cv::Mat& m, double f) {
  cv::Mat g3;
  cv::Mat g = gray_of(m);
  cv::merge(std::vector<cv::Mat>{g, g, g}, g3);
  return blend(g3, m, f);
}

// Rotates hue by `shift` turns through a hand-rolled RGB <-> HSV.
cv::Mat adjust_hue(const cv::Mat& m, double shift) {
  cv::Mat out(m.size(), m.type());
  for (int y = 0; y < m.rows; ++y) {
    for (int x = 0; x < m.cols; ++x) {
      const auto& p = m.at<cv::Vec3d>(y, x);
      const double r = p[0], g = p[1], b = p[2];
      const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
      const double delta = mx - mn;
      double h = 0.0;
      if (delta > 0.0) {
        if (mx == r) {
          h = std::fmod((g - b) / delta, 6.0);
        } else if (mx == g) {
          h = (b - r) / delta + 2.0;
        } else {
          h = (r - g) / delta + 4.0;
        }
        h /= 6.0;
      }
      const double s = mx > 0.0 ? delta / mx : 0.0;
      const double v = mx;
      h = h + shift;
      h -= std::floor(h);
      // Back to RGB.
      const double hh = h * 6.0;
      const int sector = static_cast<int>(std::floor(hh)) % 6;
      const double frac = hh - std::floor(hh);
      const double pp = v * (1.0 - s), q = v * (1.0 - s * frac), t = v * (1.0 - s * (1.0 - frac));
      cv::Vec3d o;
      switch (sector) {
        case 0: o = {v, t, pp}; break;
        case 1: o = {q, v, pp}; break;
        case 2: o = {pp, v, t}; break;
        case 3: o = {pp, q, v}; break;
        case 4: o = {t, pp, v}; break;
        default: o = {v, pp, q}; break;
      }
      out.at<cv::Vec3d>(y, x) = o;
    }
  }
  return out;
}

cv::Mat crop_and_restore(const cv::Mat& m, int x, int y, int w, int h) {
  return resize_to(m(cv::Rect(x, y, w, h)), m.cols, m.rows);
}

cv::Mat random_crop(const cv::Mat& m, const AugmentationStep& s, Rng& rng) {
  const double side = std::sqrt(rng.uniform(s.a.lo, s.a.hi));
  const int w = std::clamp(static_cast<int>(std::lround(m.cols * side)), 1, m.cols);
  const int h = std::clamp(static_cast<int>(std::lround(m.rows * side)), 1, m.rows);
  const int x = static_cast<int>(rng.between(0, m.cols - w));
  const int y = static_cast<int>(rng.between(0, m.rows - h));
  return crop_and_restore(m, x, y, w, h);
}

// Same sampling as torchvision's RandomResizedCrop: ten tries at a random
// area and log-uniform aspect, else a center crop clamped to the ratio range.
cv::Mat random_resized_crop(const cv::Mat& m, const AugmentationStep& s, Rng& rng) {
  const int width = m.cols, height = m.rows;
  const double area = static_cast<double>(width) * height;
  const double log_lo = std::log(s.b.lo), log_hi = std::log(s.b.hi);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double target = area * rng.uniform(s.a.lo, s.a.hi);
    const double aspect = std::exp(rng.uniform(log_lo, log_hi));
    const int w = static_cast<int>(std::lround(std::sqrt(target * aspect)));
    const int h = static_cast<int>(std::lround(std::sqrt(target / aspect)));
    if (w > 0 && w <= width && h > 0 && h <= height) {
      const int y = static_cast<int>(rng.between(0, height - h));
      const int x = static_cast<int>(rng.between(0, width - w));
      return crop_and_restore(m, x, y, w, h);
    }
  }
  const double in_ratio = static_cast<double>(width) / height;
  int w = width, h = height;
  if (in_ratio < s.b.lo) {
    h = static_cast<int>(std::lround(w / s.b.lo));
  } else if (in_ratio > s.b.hi) {
    w = static_cast<int>(std::lround(h * s.b.hi));
  }
  return crop_and_restore(m, (width - w) / 2, (height - h) / 2, w, h);
}

cv::Mat frequency_compress(const cv::Mat& m, double keep) {
  std::vector<cv::Mat> planes;
  cv::split(m, planes);
  const auto order = zigzag_order(m.rows, m.cols);
  const auto kept = static_cast<std::size_t>(std::ceil(keep * static_cast<double>(order.size())));
  for (auto& pl : planes) {
    Plane p(pl.cols, pl.rows);
    for (int y = 0; y < pl.rows; ++y) {
      for (int x = 0; x < pl.cols; ++x) p.at(x, y) = pl.at<double>(y, x);
    }
    Plane coeff = dct2d(p);
    for (std::size_t i = kept; i < order.size(); ++i) coeff.at(order[i].second, order[i].first) = 0.0;
    const Plane back = idct2d(coeff);
    for (int y = 0; y < pl.rows; ++y) {
      for (int x = 0; x < pl.cols; ++x) pl.at<double>(y, x) = back.at(x, y);
    }
  }
  cv::Mat out;
  cv::merge(planes, out);
  return out;
}

cv::Mat jpeg_round_trip(const cv::Mat& m, int quality) {
  cv::Mat eight;
  m.convertTo(eight, CV_8U, 255.0);
  const bool color = m.channels() == 3;
  if (color) cv::cvtColor(eight, eight, cv::COLOR_RGB2BGR);
  std::vector<unsigned char> buf;
  if (!cv::imencode(".jpg", eight, buf, {cv::IMWRITE_JPEG_QUALITY, quality})) {
    throw Error("JPEG encoding failed");
  }
  cv::Mat decoded = cv::imdecode(buf, color ? cv::IMREAD_COLOR : cv::IMREAD_GRAYSCALE);
  if (color) cv::cvtColor(decoded, decoded, cv::COLOR_BGR2RGB);
  cv::Mat out;
  decoded.convertTo(out, CV_64F, 1.0 / 255.0);
  return out;
}

// Line kernel with weights running linearly from (1+d)/2 to (1-d)/2, rotated
// by angle, normalized to unit sum.
cv::Mat motion_kernel(int size, double angle_deg, double direction) {
  const double d = (std::clamp(direction, -1.0, 1.0) + 1.0) / 2.0;
  cv::Mat k = cv::Mat::zeros(size, size, CV_64F);
  for (int i = 0; i < size; ++i) {
    k.at<double>(size / 2, i) = size > 1 ? d + (1.0 - 2.0 * d) / (size - 1) * i : 1.0;
  }
  const cv::Point2f center((size - 1) / 2.0F, (size - 1) / 2.0F);
  cv::Mat rotated;
  cv::warpAffine(k, rotated, cv::getRotationMatrix2D(center, angle_deg, 1.0), k.size(), cv::INTER_LINEAR,
                 cv::BORDER_CONSTANT, 0.0);
  const double sum = cv::sum(rotated)[0];
  if (sum <= 0.0) return k / cv::sum(k)[0];
  return rotated / sum;
}

// Smoothing kernel used for the sharpness degenerate image; border pixels
// keep their values.
cv::Mat sharpness_degenerate(const cv::Mat& m) {
  cv::Mat kernel = (cv::Mat_<double>(3, 3) << 1, 1, 1, 1, 5, 1, 1, 1, 1) / 13.0;
  cv::Mat smooth;
  cv::filter2D(m, smooth, -1, kernel, cv::Point(-1, -1), 0.0, cv::BORDER_REFLECT_101);
  cv::Mat out = m.clone();
  if (m.rows > 2 && m.cols > 2) {
    const cv::Rect inner(1, 1, m.cols - 2, m.rows - 2);
    smooth(inner).copyTo(out(inner));
  }
  return out;
}

cv::Mat posterize(const cv::Mat& m, int bits) {
  const int mask = 0xff & ~((1 << (8 - bits)) - 1);
  cv::Mat out = m.clone();
  for (int r = 0; r < out.rows; ++r) {
    auto* row = out.ptr<double>(r);
    for (int i = 0; i < out.cols * out.channels(); ++i) {
      const int q = static_cast<int>(std::lround(std::clamp(row[i], 0.0, 1.0) * 255.0));
      row[i] = static_cast<double>(q & mask) / 255.0;
    }
  }
  return out;
}

cv::Mat apply_kind(const cv::Mat& m, const AugmentationStep& s, Rng& rng) {
  switch (s.kind) {
    case StepKind::identity:
      return m;
    case StepKind::crop:
      return random_crop(m, s, rng);
    case StepKind::scale: {
      const double f = rng.uniform(s.a.lo, s.a.hi);
      const cv::Mat small = resize_to(m, static_cast<int>(std::lround(m.cols * f)),
                                      static_cast<int>(std::lround(m.rows * f)));
      return resize_to(small, m.cols, m.rows);
    }
    case StepKind::frequency_compress:
      return frequency_compress(m, rng.uniform(s.a.lo, s.a.hi));
    case StepKind::horizontal_flip: {
      cv::Mat out;
      cv::flip(m, out, 1);
      return out;
    }
    case StepKind::rotation: {
      const double angle = rng.uniform(s.a.lo, s.a.hi);
      const cv::Point2f center((m.cols - 1) / 2.0F, (m.rows - 1) / 2.0F);
      cv::Mat out;
      cv::warpAffine(m, out, cv::getRotationMatrix2D(center, angle, 1.0), m.size(), cv::INTER_LINEAR,
                     cv::BORDER_REFLECT_101);
      return out;
    }
    case StepKind::resized_crop:
      return random_resized_crop(m, s, rng);
    case StepKind::jpeg:
      return jpeg_round_trip(m, static_cast<int>(s.a.lo));
    case StepKind::brightness:
      require_color(m, s.kind);
      return adjust_brightness(m, rng.uniform(s.a.lo, s.a.hi));
    case StepKind::contrast:
      require_color(m, s.kind);
      return adjust_contrast(m, rng.uniform(s.a.lo, s.a.hi));
    case StepKind::saturation:
      require_color(m, s.kind);
      return adjust_saturation(m, rng.uniform(s.a.lo, s.a.hi));
    case StepKind::hue:
      require_color(m, s.kind);
      return adjust_hue(m, rng.uniform(s.a.lo, s.a.hi));
    case StepKind::color_jiggle: {
      require_color(m, s.kind);
      const auto& j = s.jiggle;
      const double fb = rng.uniform(1.0 - j[0], 1.0 + j[0]);
      const double fc = rng.uniform(1.0 - j[1], 1.0 + j[1]);
      const double fs = rng.uniform(1.0 - j[2], 1.0 + j[2]);
      const double fh = rng.uniform(-j[3], j[3]);
      std::array<int, 4> order{0, 1, 2, 3};
      for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
      cv::Mat out = m;
      for (int op : order) {
        switch (op) {
          case 0: out = adjust_brightness(out, fb); break;
          case 1: out = adjust_contrast(out, fc); break;
          case 2: out = adjust_saturation(out, fs); break;
          default: out = adjust_hue(out, fh); break;
        }
      }
      return out;
    }
    case StepKind::grayscale: {
      require_color(m, s.kind);
      cv::Mat g = gray_of(m), out;
      cv::merge(std::vector<cv::Mat>{g, g, g}, out);
      return out;
    }
    case StepKind::gaussian_blur: {
      const int k = odd_kernel(s.kernel, rng);
      const double sigma = s.a.hi > 0.0 ? rng.uniform(s.a.lo, s.a.hi) : 0.3 * ((k - 1) * 0.5 - 1.0) + 0.8;
      cv::Mat out;
      cv::GaussianBlur(m, out, cv::Size(k, k), sigma, sigma, cv::BORDER_REFLECT_101);
      return out;
    }
    case StepKind::gaussian_noise: {
      cv::Mat out = m.clone();
      const double std_dev = s.a.lo;
      for (auto it = out.begin<double>(); it != out.end<double>(); ++it) *it += std_dev * rng.normal();
      return out;
    }
    case StepKind::motion_blur: {
      const int k = odd_kernel(s.kernel, rng);
      const double angle = rng.uniform(s.a.lo, s.a.hi);
      const double direction = rng.uniform(s.b.lo, s.b.hi);
      cv::Mat out;
      cv::filter2D(m, out, -1, motion_kernel(k, angle, direction), cv::Point(-1, -1), 0.0,
                   cv::BORDER_REFLECT_101);
      return out;
    }
    case StepKind::posterize: {
      const int bits = static_cast<int>(s.a.lo);
      if (bits >= 8) return m;
      return posterize(m, std::max(bits, 1));
    }
    case StepKind::rgb_shift: {
      std::vector<cv::Mat> planes;
      cv::split(m, planes);
      for (auto& p : planes) p += rng.uniform(-s.a.lo, s.a.lo);
      cv::Mat out;
      cv::merge(planes, out);
      return out;
    }
    case StepKind::sharpness: {
      const double factor = rng.uniform(0.0, s.a.lo);
      return blend(sharpness_degenerate(m), m, factor);
    }
    case StepKind::median_blur: {
      cv::Mat f32, out;
      m.convertTo(f32, CV_32F);
      cv::medianBlur(f32, out, static_cast<int>(s.kernel.lo));
      out.convertTo(out, CV_64F);
      return out;
    }
    case StepKind::box_blur: {
      const int k = static_cast<int>(s.kernel.lo);
      cv::Mat out;
      cv::blur(m, out, cv::Size(k, k), cv::Point(-1, -1), cv::BORDER_REFLECT_101);
      return out;
    }
  }
  throw UnsupportedError("augmentation step kind " + std::to_string(static_cast<int>(s.kind)) +
                         " is not implemented");
}

bool known_kind(StepKind kind) {
  return static_cast<int>(kind) >= static_cast<int>(StepKind::identity) &&
         static_cast<int>(kind) <= static_cast<int>(StepKind::box_blur);
}

AugmentationStep step(StepKind kind, double probability, ParamRange a = {}, ParamRange b = {},
                      ParamRange kernel = {}) {
  AugmentationStep s;
  s.kind = kind;
  s.probability = probability;
  s.a = a;
  s.b = b;
  s.kernel = kernel;
  return s;
}

struct TrustmarkLevel {
  int jpeg_quality;
  ParamRange factor;
  std::array<double, 4> jiggle;
  int blur_kernel;
  double blur_sigma_hi;
  double noise_std;
  double hue;
  int motion_kernel_hi;
  double motion_angle;
  double motion_direction;
  int posterize_bits;
  double rgb_shift;
  double sharpness;
  int box_kernel;
};

AugmentationSuite trustmark(std::string name, const TrustmarkLevel& t) {
  AugmentationSuite s;
  s.name = std::move(name);
  s.always_steps = {step(StepKind::horizontal_flip, 0.5),
                    step(StepKind::resized_crop, 1.0, {0.7, 1.0}, {3.0 / 4.0, 4.0 / 3.0})};
  AugmentationStep jiggle = step(StepKind::color_jiggle, 0.5);
  jiggle.jiggle = t.jiggle;
  const double k = t.blur_kernel;
  s.choice_steps = {
      step(StepKind::jpeg, 0.5, {static_cast<double>(t.jpeg_quality), static_cast<double>(t.jpeg_quality)}),
      step(StepKind::brightness, 0.5, t.factor),
      step(StepKind::contrast, 0.5, t.factor),
      jiggle,
      step(StepKind::grayscale, 0.5),
      step(StepKind::gaussian_blur, 0.5, {0.1, t.blur_sigma_hi}, {}, {k, k}),
      step(StepKind::gaussian_noise, 0.5, {t.noise_std, t.noise_std}),
      step(StepKind::hue, 0.5, {-t.hue, t.hue}),
      step(StepKind::motion_blur, 0.5, {-t.motion_angle, t.motion_angle},
           {-t.motion_direction, t.motion_direction}, {3.0, static_cast<double>(t.motion_kernel_hi)}),
      step(StepKind::posterize, 0.5, {static_cast<double>(t.posterize_bits), static_cast<double>(t.posterize_bits)}),
      step(StepKind::rgb_shift, 0.5, {t.rgb_shift, t.rgb_shift}),
      step(StepKind::saturation, 0.5, t.factor),
      step(StepKind::sharpness, 0.5, {t.sharpness, t.sharpness}),
      step(StepKind::median_blur, 0.5, {}, {}, {3.0, 3.0}),
      step(StepKind::box_blur, 0.5, {}, {}, {static_cast<double>(t.box_kernel), static_cast<double>(t.box_kernel)}),
  };
  s.choice_count = 2;
  return s;
}

}  // namespace

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::identity: return "identity";
    case StepKind::crop: return "crop";
    case StepKind::scale: return "scale";
    case StepKind::frequency_compress: return "frequency_compress";
    case StepKind::horizontal_flip: return "horizontal_flip";
    case StepKind::rotation: return "rotation";
    case StepKind::resized_crop: return "resized_crop";
    case StepKind::jpeg: return "jpeg";
    case StepKind::brightness: return "brightness";
    case StepKind::contrast: return "contrast";
    case StepKind::saturation: return "saturation";
    case StepKind::hue: return "hue";
    case StepKind::color_jiggle: return "color_jiggle";
    case StepKind::grayscale: return "grayscale";
    case StepKind::gaussian_blur: return "gaussian_blur";
    case StepKind::gaussian_noise: return "gaussian_noise";
    case StepKind::motion_blur: return "motion_blur";
    case StepKind::posterize: return "posterize";
    case StepKind::rgb_shift: return "rgb_shift";
    case StepKind::sharpness: return "sharpness";
    case StepKind::median_blur: return "median_blur";
    case StepKind::box_blur: return "box_blur";
  }
  return "unknown";
}

void AugmentationStep::validate() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw ConfigError(std::string(to_string(kind)) + ": probability must lie in [0,1]");
  }
  for (const ParamRange* r : {&a, &b, &kernel}) {
    if (!(r->lo <= r->hi)) throw ConfigError(std::string(to_string(kind)) + ": parameter range lo > hi");
  }
}

std::string AugmentationStep::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s p=%.2f a=[%g,%g] b=[%g,%g] k=[%g,%g]", std::string(to_string(kind)).c_str(),
                probability, a.lo, a.hi, b.lo, b.hi, kernel.lo, kernel.hi);
  return buf;
}

void AugmentationSuite::validate() const {
  for (const auto& s : always_steps) s.validate();
  for (const auto& s : choice_steps) s.validate();
  if (choice_count > choice_steps.size()) {
    throw ConfigError("suite " + name + " draws more steps than its pool holds");
  }
}

std::vector<std::string> suite_names() {
  return {"rivagan", "ssl", "trustmark_low", "trustmark_medium", "trustmark_high"};
}

AugmentationSuite make_suite(std::string_view name) {
  if (name == "rivagan") {
    AugmentationSuite s;
    s.name = "rivagan";
    s.always_steps = {step(StepKind::crop, 0.5, {0.8, 1.0}), step(StepKind::scale, 0.5, {0.8, 1.0}),
                      step(StepKind::frequency_compress, 0.5, {0.5, 1.0})};
    return s;
  }
  if (name == "ssl") {
    AugmentationSuite s;
    s.name = "ssl";
    s.always_steps = {step(StepKind::horizontal_flip, 0.5)};
    s.choice_steps = {step(StepKind::identity, 1.0), step(StepKind::rotation, 1.0, {-30.0, 30.0}),
                      step(StepKind::resized_crop, 1.0, {0.2, 1.0}, {3.0 / 4.0, 4.0 / 3.0}),
                      step(StepKind::scale, 1.0, {0.2, 1.0}), step(StepKind::gaussian_blur, 1.0, {}, {}, {1.0, 17.0})};
    s.choice_count = 1;
    return s;
  }
  if (name == "trustmark_low") {
    return trustmark("trustmark_low", {70, {0.9, 1.1}, {0.05, 0.05, 0.05, 0.01}, 3, 1.0, 0.02, 0.1, 5, 25.0,
                                       0.25, 5, 0.02, 1.0, 3});
  }
  if (name == "trustmark_medium") {
    return trustmark("trustmark_medium", {50, {0.75, 1.25}, {0.1, 0.1, 0.1, 0.02}, 5, 1.5, 0.04, 0.2, 7, 45.0,
                                          0.5, 4, 0.05, 1.5, 5});
  }
  if (name == "trustmark_high") {
    return trustmark("trustmark_high", {40, {0.5, 1.5}, {0.1, 0.1, 0.1, 0.05}, 7, 2.0, 0.08, 0.5, 9, 90.0,
                                        1.0, 3, 0.1, 2.5, 7});
  }
  throw ConfigError("unknown suite '" + std::string(name) + "' (valid: " + std::string(kSuiteNames) + ")");
}

Image apply_step(const Image& img, const AugmentationStep& step, Rng& rng) {
  if (!known_kind(step.kind)) {
    throw UnsupportedError("augmentation step kind " + std::to_string(static_cast<int>(step.kind)) +
                           " is not implemented");
  }
  step.validate();
  if (!(rng.uniform() < step.probability)) return img;
  if (step.kind == StepKind::identity) return img;
  // Exact on the original samples; the [0,1] round trip is not bit-exact.
  if (step.kind == StepKind::horizontal_flip) {
    return detail::from_mat(apply_kind(detail::to_mat(img), step, rng), img.range());
  }
  if (step.kind == StepKind::posterize && step.a.lo >= 8.0) return img;
  return denormalized(apply_kind(normalized(img), step, rng), img.range());
}

Image apply_suite(const Image& img, const AugmentationSuite& suite, std::uint64_t seed) {
  suite.validate();
  Rng rng(seed);
  Image out = img;
  for (const auto& s : suite.always_steps) out = apply_step(out, s, rng);
  std::vector<std::size_t> pool(suite.choice_steps.size());
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < suite.choice_count; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    out = apply_step(out, suite.choice_steps[pool[i]], rng);
  }
  return out;
}

}  // namespace wmx
