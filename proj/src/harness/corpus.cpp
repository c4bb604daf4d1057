#include "wmx/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <opencv2/imgproc.hpp>

#include "wmx/detail/cv_bridge.hpp"
#include "wmx/error.hpp"
#include "wmx/rng.hpp"

namespace wmx {

Image fit_to_max_side(const Image& img, int max_side) {
  if (max_side <= 0) throw ConfigError("max side must be positive");
  if (std::max(img.width(), img.height()) <= max_side) return img;
  const int side = std::min(img.width(), img.height());
  const cv::Mat full = detail::to_mat(img);
  const cv::Rect roi((img.width() - side) / 2, (img.height() - side) / 2, side, side);
  cv::Mat square = full(roi);
  const int target = std::min(side, max_side);
  cv::Mat out;
  if (target == side) {
    out = square.clone();
  } else {
    cv::resize(square, out, cv::Size(target, target), 0, 0, cv::INTER_AREA);
  }
  return detail::from_mat(out, img.range());
}

Corpus load_corpus(const std::filesystem::path& dir, int max_side) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path());
  }
  if (files.empty()) throw ConfigError("corpus directory holds no PNG files: " + dir.string());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

  Corpus corpus;
  for (const auto& f : files) {
    corpus.names.push_back(f.filename().string());
    corpus.images.push_back(fit_to_max_side(read_png(f), max_side));
  }
  corpus.id = dir.filename().string() + ":" + corpus_fingerprint(corpus);
  return corpus;
}

namespace {

cv::Scalar random_color(Rng& rng, double lo = 0.0, double hi = 255.0) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

cv::Mat gradient(int size, Rng& rng) {
  cv::Mat m(size, size, CV_64FC3);
  const cv::Scalar a = random_color(rng, 20, 235), b = random_color(rng, 20, 235);
  const double angle = rng.uniform(0.0, 2.0 * M_PI);
  const double cx = std::cos(angle), cy = std::sin(angle);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double t = 0.5 + ((x - size / 2.0) * cx + (y - size / 2.0) * cy) / (1.5 * size);
      auto& px = m.at<cv::Vec3d>(y, x);
      for (int c = 0; c < 3; ++c) px[c] = a[c] + (b[c] - a[c]) * t;
    }
  }
  return m;
}

// Gaussian-filtered noise at a random correlation length.
cv::Mat texture(int size, Rng& rng) {
  cv::Mat m(size, size, CV_64FC3);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      auto& px = m.at<cv::Vec3d>(y, x);
      for (int c = 0; c < 3; ++c) px[c] = rng.normal();
    }
  }
  const double sigma = rng.uniform(1.0, 6.0);
  cv::GaussianBlur(m, m, cv::Size(0, 0), sigma, sigma, cv::BORDER_REFLECT);
  cv::Scalar mean, stddev;
  cv::meanStdDev(m, mean, stddev);
  const double gain = rng.uniform(20.0, 45.0);
  const cv::Scalar base = random_color(rng, 70, 185);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      auto& px = m.at<cv::Vec3d>(y, x);
      for (int c = 0; c < 3; ++c) px[c] = base[c] + gain * (px[c] - mean[c]) / std::max(stddev[c], 1e-9);
    }
  }
  return m;
}

void add_blobs(cv::Mat& m, Rng& rng, int count) {
  const int size = m.rows;
  for (int i = 0; i < count; ++i) {
    const double bx = rng.uniform(0, size), by = rng.uniform(0, size);
    const double radius = rng.uniform(0.05, 0.3) * size;
    const cv::Scalar color = random_color(rng, -90, 90);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double d2 = ((x - bx) * (x - bx) + (y - by) * (y - by)) / (radius * radius);
        const double w = std::exp(-0.5 * d2);
        auto& px = m.at<cv::Vec3d>(y, x);
        for (int c = 0; c < 3; ++c) px[c] += w * color[c];
      }
    }
  }
}

void add_shapes(cv::Mat& m, Rng& rng, int count) {
  const int size = m.rows;
  for (int i = 0; i < count; ++i) {
    const cv::Scalar color = random_color(rng);
    const cv::Point p(static_cast<int>(rng.below(size)), static_cast<int>(rng.below(size)));
    const int extent = 8 + static_cast<int>(rng.below(size / 4));
    if (rng.uniform() < 0.5) {
      cv::circle(m, p, extent, color, cv::FILLED, cv::LINE_AA);
    } else {
      cv::rectangle(m, p, p + cv::Point(extent, extent * 2 / 3), color, cv::FILLED, cv::LINE_AA);
    }
  }
}

void add_stripes(cv::Mat& m, Rng& rng) {
  const int size = m.rows;
  const double period = rng.uniform(6.0, 40.0);
  const double angle = rng.uniform(0.0, M_PI);
  const double amp = rng.uniform(10.0, 35.0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double s = amp * std::sin(2.0 * M_PI * (x * std::cos(angle) + y * std::sin(angle)) / period);
      auto& px = m.at<cv::Vec3d>(y, x);
      for (int c = 0; c < 3; ++c) px[c] += s;
    }
  }
}

}  // namespace

std::vector<Image> synthetic_images(std::size_t count, int size, std::uint64_t seed) {
  if (size < 16) throw ConfigError("synthetic image size must be at least 16");
  std::vector<Image> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed({seed, hash_name("synthetic-corpus"), i}));
    cv::Mat m;
    switch (i % 5) {
      case 0:
        m = gradient(size, rng);
        add_blobs(m, rng, 6);
        break;
      case 1:
        m = texture(size, rng);
        break;
      case 2:
        m = gradient(size, rng);
        add_shapes(m, rng, 10);
        break;
      case 3:
        m = gradient(size, rng);
        add_stripes(m, rng);
        add_blobs(m, rng, 3);
        break;
      default:
        m = texture(size, rng);
        add_shapes(m, rng, 6);
        cv::GaussianBlur(m, m, cv::Size(0, 0), 0.8);
        break;
    }
    // Sensor-like grain so no image is perfectly smooth.
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        auto& px = m.at<cv::Vec3d>(y, x);
        for (int c = 0; c < 3; ++c) px[c] += 2.0 * rng.normal();
      }
    }
    out.push_back(quantize8(detail::from_mat(m, PixelRange{})));
  }
  return out;
}

void write_synthetic_corpus(const std::filesystem::path& dir, std::size_t count, int size,
                            std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  const auto images = synthetic_images(count, size, seed);
  for (std::size_t i = 0; i < images.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "img_%03zu.png", i);
    write_png(dir / name, images[i]);
  }
}

std::string corpus_fingerprint(const Corpus& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t byte) {
    h ^= byte & 0xff;
    h *= 0x100000001b3ULL;
  };
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (char c : corpus.names[i]) feed(static_cast<unsigned char>(c));
    const Image& img = corpus.images[i];
    feed(static_cast<std::uint64_t>(img.width()));
    feed(static_cast<std::uint64_t>(img.height()));
    for (double s : img.samples()) feed(static_cast<std::uint64_t>(std::lround(s)));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wmx
