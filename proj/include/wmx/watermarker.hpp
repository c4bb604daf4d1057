#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "wmx/bits.hpp"
#include "wmx/image.hpp"

namespace wmx {

// Blind watermarker contract: embed a fixed-length secret into a cover,
// recover it from the marked image alone.
class Watermarker {
 public:
  virtual ~Watermarker() = default;

  virtual std::string name() const = 0;
  virtual std::size_t capacity() const = 0;
  virtual Image embed(const Image& cover, const Bits& secret) const = 0;
  // Always returns capacity() bits.
  virtual Bits extract(const Image& img) const = 0;

  // The instance to use when this method is applied a second time on top of
  // itself. nullptr means "the same instance again".
  virtual std::shared_ptr<const Watermarker> second_instance() const { return nullptr; }
};

using WatermarkerPtr = std::shared_ptr<const Watermarker>;

enum class Method { dct, dwt, dwtdct, dwtdctsvd, spread_spectrum };

std::string_view to_string(Method m);
// Throws ConfigError naming the valid methods.
Method parse_method(std::string_view name);
inline constexpr std::string_view kMethodNames = "dct, dwt, dwtdct, dwtdctsvd, spread_spectrum";

struct WatermarkerSpec {
  Method method = Method::dct;
  std::size_t capacity_bits = 32;
  std::uint64_t key = 0;
  // QIM lattice step for the transform methods.
  double quantization_step = 12.0;
  // RMS amplitude of the spread-spectrum pattern, in pixel units.
  double embed_strength = 2.5;
  int block_size = 8;

  // Defaults: step 12 (dct, dwtdct), 24 (dwt), 8 (dwtdctsvd); strength 2.5;
  // block 8, or 4 for dwtdctsvd; capacity 32.
  static WatermarkerSpec defaults(Method method, std::uint64_t key = 0);
  void validate() const;
};

// Snaps v to the nearest point of {2 step t + bit step : t integer}.
double qim_embed(double v, double step, int bit);
// Bit of the lattice holding the point nearest v; ties go to 0.
int qim_decode(double v, double step);

Image embed(const WatermarkerSpec& spec, const Image& cover, const Bits& secret);
Bits extract(const WatermarkerSpec& spec, const Image& img);

// Number of carrier slots the method has on a width x height image.
std::size_t available_slots(const WatermarkerSpec& spec, int width, int height);

class ClassicWatermarker final : public Watermarker {
 public:
  explicit ClassicWatermarker(WatermarkerSpec spec);

  const WatermarkerSpec& spec() const { return spec_; }
  std::string name() const override { return std::string(to_string(spec_.method)); }
  std::size_t capacity() const override { return spec_.capacity_bits; }
  Image embed(const Image& cover, const Bits& secret) const override;
  Bits extract(const Image& img) const override;
  // Spread spectrum re-keys (a second carrier set); the QIM methods reuse
  // their key and therefore their slots.
  std::shared_ptr<const Watermarker> second_instance() const override;

 private:
  WatermarkerSpec spec_;
};

WatermarkerPtr make_watermarker(const WatermarkerSpec& spec);

}  // namespace wmx
