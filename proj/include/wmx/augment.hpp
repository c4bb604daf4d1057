#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wmx/image.hpp"
#include "wmx/rng.hpp"

namespace wmx {

enum class StepKind {
  identity,
  crop,
  scale,
  frequency_compress,
  horizontal_flip,
  rotation,
  resized_crop,
  jpeg,
  brightness,
  contrast,
  saturation,
  hue,
  color_jiggle,
  grayscale,
  gaussian_blur,
  gaussian_noise,
  motion_blur,
  posterize,
  rgb_shift,
  sharpness,
  median_blur,
  box_blur,
};

std::string_view to_string(StepKind kind);

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Parameter meaning per kind:
//   crop                 a = area scale
//   scale                a = resize factor (down, then back up)
//   frequency_compress   a = fraction of zig-zag DCT coefficients kept
//   rotation             a = degrees
//   resized_crop         a = area scale, b = aspect ratio
//   jpeg                 a.lo = quality
//   brightness, contrast, saturation   a = factor
//   hue                  a = shift in turns of the hue circle
//   color_jiggle         jiggle = brightness, contrast, saturation, hue
//   gaussian_blur        kernel = odd sizes, a = sigma (0 derives it from kernel)
//   gaussian_noise       a.lo = std on [0,1]-normalized samples
//   motion_blur          kernel = odd sizes, a = degrees, b = direction in [-1,1]
//   posterize            a.lo = bits kept
//   rgb_shift            a.lo = per-channel limit on [0,1]-normalized samples
//   sharpness            a.lo = upper bound of the blend factor
//   median_blur, box_blur   kernel.lo = size
struct AugmentationStep {
  StepKind kind = StepKind::identity;
  double probability = 1.0;
  ParamRange a;
  ParamRange b;
  ParamRange kernel;
  std::array<double, 4> jiggle{};

  // Throws ConfigError on reversed ranges or probability outside [0,1].
  void validate() const;
  std::string describe() const;
};

struct AugmentationSuite {
  std::string name;
  std::vector<AugmentationStep> always_steps;
  std::vector<AugmentationStep> choice_steps;
  std::size_t choice_count = 0;

  void validate() const;
};

inline constexpr std::string_view kSuiteNames = "rivagan, ssl, trustmark_low, trustmark_medium, trustmark_high";

std::vector<std::string> suite_names();
// Throws ConfigError naming the valid suites.
AugmentationSuite make_suite(std::string_view name);

// Draws one uniform number for the probability gate, then the step's own
// parameters only when it fires. Unknown kinds throw UnsupportedError.
Image apply_step(const Image& img, const AugmentationStep& step, Rng& rng);

// Always-steps in order, then choice_count pool steps drawn without
// replacement and applied in draw order.
Image apply_suite(const Image& img, const AugmentationSuite& suite, std::uint64_t seed);

}  // namespace wmx
