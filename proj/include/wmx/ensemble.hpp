#pragma once

#include <optional>
#include <string_view>

#include "wmx/bits.hpp"
#include "wmx/ecc.hpp"
#include "wmx/image.hpp"
#include "wmx/watermarker.hpp"

namespace wmx {

enum class EnsembleMode { series, parallel };

std::string_view to_string(EnsembleMode mode);
EnsembleMode parse_ensemble_mode(std::string_view name);

// wm2 embedded into the output of wm1.
Image series_ensemble(const Image& original, const Watermarker& wm1, const Watermarker& wm2,
                      const Bits& m1, const Bits& m2);

// original + r1/2 + r2/2, clamped; both residuals taken against original.
Image parallel_ensemble(const Image& original, const Watermarker& wm1, const Watermarker& wm2,
                        const Bits& m1, const Bits& m2);

// Scales the residual down until PSNR reaches target_psnr. Returns the input
// unchanged when it already meets the target.
Image psnr_clip(const Image& watermarked, const Image& original, double target_psnr);

// min(p1, p2) + strength * (max(p1, p2) - min(p1, p2)).
double clip_target(double psnr1, double psnr2, double strength);

struct ClipTarget {
  double psnr1 = 0.0;
  double psnr2 = 0.0;
  double target = 0.0;
};

// Embeds each watermark alone on original to get psnr1 and psnr2.
ClipTarget measure_clip_target(const Image& original, const Watermarker& wm1, const Watermarker& wm2,
                               const Bits& m1, const Bits& m2, double strength);

Image clip_to_strength(const Image& watermarked, const Image& original, double strength,
                       const Watermarker& wm1, const Watermarker& wm2, const Bits& m1, const Bits& m2);

struct EnsembleSpec {
  WatermarkerPtr first;
  WatermarkerPtr second;
  EnsembleMode mode = EnsembleMode::parallel;
  // nullopt disables strength clipping.
  std::optional<double> strength;
  std::optional<ecc::LinearCode> code;

  std::size_t raw_capacity() const;
  // code->k() with a code, raw_capacity() without.
  std::size_t effective_capacity() const;
  void validate() const;
};

Image ensemble_embed(const EnsembleSpec& spec, const Image& cover, const Bits& message);

struct EnsembleReadout {
  // Concatenated bits from both extractors.
  Bits raw;
  // nullopt only when the code's decoder gives up.
  std::optional<Bits> message;
  std::size_t corrections = 0;
  bool within_radius = true;

  bool failed() const { return !message.has_value(); }
};

EnsembleReadout ensemble_extract(const EnsembleSpec& spec, const Image& img);

}  // namespace wmx
