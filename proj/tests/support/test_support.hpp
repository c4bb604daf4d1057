#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wmx/bits.hpp"
#include "wmx/corpus.hpp"
#include "wmx/image.hpp"
#include "wmx/rng.hpp"
#include "wmx/toymodel.hpp"
#include "wmx/watermarker.hpp"

namespace wmx::testing {

// Integer-valued samples drawn uniformly from [lo, hi].
Image random_image(Rng& rng, int width, int height, int channels = 3, int lo = 0, int hi = 255);

Image mid_gray(int width = 256, int height = 256);

// The bundled 20-image corpus, loaded once.
const Corpus& bundled_corpus();

// A corpus built from the first `count` bundled images.
Corpus small_corpus(std::size_t count);

// Returns its secret unchanged on extract; the image is untouched.
class ConstantWatermarker final : public Watermarker {
 public:
  explicit ConstantWatermarker(Bits constant) : constant_(std::move(constant)) {}
  std::string name() const override { return "constant"; }
  std::size_t capacity() const override { return constant_.size(); }
  Image embed(const Image& cover, const Bits&) const override { return cover; }
  Bits extract(const Image&) const override { return constant_; }

 private:
  Bits constant_;
};

// Stores bits in the least significant bit of the red channel on a fixed
// pixel subset: every `stride`-th pixel starting at `offset`.
class LsbWatermarker final : public Watermarker {
 public:
  LsbWatermarker(std::string name, std::size_t capacity, std::size_t offset, std::size_t stride)
      : name_(std::move(name)), capacity_(capacity), offset_(offset), stride_(stride) {}
  std::string name() const override { return name_; }
  std::size_t capacity() const override { return capacity_; }
  Image embed(const Image& cover, const Bits& secret) const override;
  Bits extract(const Image& img) const override;

 private:
  std::string name_;
  std::size_t capacity_;
  std::size_t offset_;
  std::size_t stride_;
};

// Wraps another watermarker and flips one extracted bit.
class FlipOneWatermarker final : public Watermarker {
 public:
  explicit FlipOneWatermarker(WatermarkerPtr inner) : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }
  std::size_t capacity() const override { return inner_->capacity(); }
  Image embed(const Image& cover, const Bits& secret) const override { return inner_->embed(cover, secret); }
  Bits extract(const Image& img) const override;

 private:
  WatermarkerPtr inner_;
};

// Adds a fixed residual regardless of the secret; extract returns zeros.
class FixedResidualWatermarker final : public Watermarker {
 public:
  FixedResidualWatermarker(std::string name, std::size_t capacity, double delta)
      : name_(std::move(name)), capacity_(capacity), delta_(delta) {}
  std::string name() const override { return name_; }
  std::size_t capacity() const override { return capacity_; }
  Image embed(const Image& cover, const Bits& secret) const override;
  Bits extract(const Image&) const override { return Bits(capacity_, 0); }

 private:
  std::string name_;
  std::size_t capacity_;
  double delta_;
};

struct BruteForce {
  std::size_t maximum = 0;
  // Maximal independent sets counted by size.
  std::map<std::size_t, std::size_t> maximal;
};

// Every subset of up to 27 points; independence is built incrementally from
// the subset without its lowest vertex.
BruteForce enumerate(const toy::PointSet& pts, const toy::ToyConfig& cfg);

// Runs the wmx binary through the shell; stdout lands in *out when given.
int run_wmx(const std::string& args, std::string* out = nullptr, std::string* err = nullptr);

std::string temp_dir(const std::string& tag);
std::string read_file(const std::string& path);

}  // namespace wmx::testing
