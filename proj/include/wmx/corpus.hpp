#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wmx/image.hpp"

namespace wmx {

struct Corpus {
  std::string id;
  std::vector<std::string> names;
  std::vector<Image> images;

  std::size_t size() const { return images.size(); }
  bool empty() const { return images.empty(); }
};

inline constexpr int kDefaultMaxSide = 512;

// Center-crops to a square and scales down to max_side when the longer side
// exceeds it; smaller images pass through.
Image fit_to_max_side(const Image& img, int max_side = kDefaultMaxSide);

// Every *.png in dir (non-recursive), sorted by file name. Throws ConfigError
// when the directory holds no PNG files.
Corpus load_corpus(const std::filesystem::path& dir, int max_side = kDefaultMaxSide);

// Deterministic 8-bit RGB test images: gradients, blobs, textures, shapes.
std::vector<Image> synthetic_images(std::size_t count, int size, std::uint64_t seed);

// Writes synthetic_images as img_000.png, img_001.png, ...
void write_synthetic_corpus(const std::filesystem::path& dir, std::size_t count, int size,
                            std::uint64_t seed);

// FNV-1a over names and quantized samples.
std::string corpus_fingerprint(const Corpus& corpus);

}  // namespace wmx
