#include "wmx/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wmx/error.hpp"

namespace wmx {

namespace {

void check_secret(const Watermarker& wm, const Bits& secret) {
  if (secret.size() != wm.capacity()) {
    throw LengthError(wm.name() + ": secret has " + std::to_string(secret.size()) + " bits, capacity is " +
                      std::to_string(wm.capacity()));
  }
}

}  // namespace

std::string_view to_string(EnsembleMode mode) {
  return mode == EnsembleMode::series ? "series" : "parallel";
}

EnsembleMode parse_ensemble_mode(std::string_view name) {
  if (name == "series") return EnsembleMode::series;
  if (name == "parallel") return EnsembleMode::parallel;
  throw ConfigError("unknown ensemble mode '" + std::string(name) + "' (valid: series, parallel)");
}

Image series_ensemble(const Image& original, const Watermarker& wm1, const Watermarker& wm2,
                      const Bits& m1, const Bits& m2) {
  check_secret(wm1, m1);
  check_secret(wm2, m2);
  return wm2.embed(wm1.embed(original, m1), m2);
}

Image parallel_ensemble(const Image& original, const Watermarker& wm1, const Watermarker& wm2,
                        const Bits& m1, const Bits& m2) {
  check_secret(wm1, m1);
  check_secret(wm2, m2);
  Residual sum = residual(wm1.embed(original, m1), original);
  const Residual r2 = residual(wm2.embed(original, m2), original);
  for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] = 0.5 * sum.data[i] + 0.5 * r2.data[i];
  return apply_residual(original, sum, 1.0);
}

Image psnr_clip(const Image& watermarked, const Image& original, double target_psnr) {
  if (!std::isfinite(target_psnr)) throw ConfigError("psnr_clip: target PSNR must be finite");
  const double mse = mean_squared_error(watermarked, original);
  if (mse == 0.0) return watermarked;
  const double span = original.range().span();
  const double target_mse = span * span * std::pow(10.0, -target_psnr / 10.0);
  const double scale = std::sqrt(target_mse / mse);
  if (scale >= 1.0) return watermarked;
  return apply_residual(original, residual(watermarked, original), scale);
}

double clip_target(double psnr1, double psnr2, double strength) {
  const double lo = std::min(psnr1, psnr2);
  const double hi = std::max(psnr1, psnr2);
  if (strength == 0.0) return lo;
  if (strength == 1.0) return hi;
  return lo + strength * (hi - lo);
}

ClipTarget measure_clip_target(const Image& original, const Watermarker& wm1, const Watermarker& wm2,
                               const Bits& m1, const Bits& m2, double strength) {
  check_secret(wm1, m1);
  check_secret(wm2, m2);
  ClipTarget t;
  t.psnr1 = psnr(wm1.embed(original, m1), original);
  t.psnr2 = psnr(wm2.embed(original, m2), original);
  t.target = clip_target(t.psnr1, t.psnr2, strength);
  return t;
}

Image clip_to_strength(const Image& watermarked, const Image& original, double strength,
                       const Watermarker& wm1, const Watermarker& wm2, const Bits& m1, const Bits& m2) {
  const ClipTarget t = measure_clip_target(original, wm1, wm2, m1, m2, strength);
  // A watermark that leaves the image untouched has infinite PSNR; an
  // infinite target means nothing to clip.
  if (!std::isfinite(t.target)) return watermarked;
  return psnr_clip(watermarked, original, t.target);
}

std::size_t EnsembleSpec::raw_capacity() const {
  return (first ? first->capacity() : 0) + (second ? second->capacity() : 0);
}

std::size_t EnsembleSpec::effective_capacity() const { return code ? code->k() : raw_capacity(); }

void EnsembleSpec::validate() const {
  if (!first || !second) throw ConfigError("ensemble needs two watermarkers");
  if (strength && !std::isfinite(*strength)) throw ConfigError("ensemble strength must be finite");
  if (code && code->n() != raw_capacity()) {
    throw ConfigError("code length " + std::to_string(code->n()) + " does not match the combined capacity " +
                      std::to_string(raw_capacity()) + " of " + first->name() + " + " + second->name());
  }
}

Image ensemble_embed(const EnsembleSpec& spec, const Image& cover, const Bits& message) {
  spec.validate();
  if (message.size() != spec.effective_capacity()) {
    throw LengthError("ensemble message has " + std::to_string(message.size()) + " bits, capacity is " +
                      std::to_string(spec.effective_capacity()));
  }
  const Bits word = spec.code ? spec.code->encode(message) : message;
  const auto [m1, m2] = ecc::split_for_ensemble(word, spec.first->capacity(), spec.second->capacity());
  const Image marked = spec.mode == EnsembleMode::series
                           ? series_ensemble(cover, *spec.first, *spec.second, m1, m2)
                           : parallel_ensemble(cover, *spec.first, *spec.second, m1, m2);
  if (!spec.strength) return marked;
  return clip_to_strength(marked, cover, *spec.strength, *spec.first, *spec.second, m1, m2);
}

EnsembleReadout ensemble_extract(const EnsembleSpec& spec, const Image& img) {
  spec.validate();
  EnsembleReadout out;
  out.raw = ecc::join_from_ensemble(spec.first->extract(img), spec.second->extract(img));
  if (!spec.code) {
    out.message = out.raw;
    return out;
  }
  if (auto decoded = spec.code->decode(out.raw)) {
    out.message = std::move(decoded->message);
    out.corrections = decoded->corrections;
    out.within_radius = decoded->guaranteed;
  } else {
    out.within_radius = false;
  }
  return out;
}

}  // namespace wmx
