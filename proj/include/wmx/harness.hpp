#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wmx/augment.hpp"
#include "wmx/corpus.hpp"
#include "wmx/ensemble.hpp"
#include "wmx/watermarker.hpp"

namespace wmx {

// Worker count: the explicit request if given, else WMX_THREADS, else the
// hardware concurrency. WMX_THREADS also caps an explicit request.
std::size_t resolve_threads(std::optional<std::size_t> requested = std::nullopt);

// Runs fn(i) for i in [0, n) on up to `threads` workers and rethrows the
// first exception once all workers stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

struct EvalConfig {
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// Roles separate the random streams drawn for one (image, trial).
enum class StreamRole : std::uint64_t { secret = 1, overwrite = 2, augment = 3 };

// Seed of the stream for (image, trial, name, role) under a master seed.
std::uint64_t stream_seed(std::uint64_t master, std::size_t image, std::size_t trial, std::string_view name,
                          StreamRole role);
Bits stream_secret(std::uint64_t master, std::size_t image, std::size_t trial, std::string_view name,
                   StreamRole role, std::size_t bits);

struct AccuracyReport {
  std::string method;
  // Empty for clean accuracy.
  std::string suite;
  std::size_t trials = 0;
  // Per-image full-secret accuracy.
  std::vector<double> per_image;
  std::vector<double> per_image_bits;
  double accuracy = 0.0;
  double bit_accuracy = 0.0;
  std::size_t count = 0;
};

AccuracyReport eval_accuracy(const Watermarker& wm, const Corpus& corpus, const EvalConfig& cfg);
AccuracyReport eval_robustness(const Watermarker& wm, const Corpus& corpus, const AugmentationSuite& suite,
                               const EvalConfig& cfg);

struct CoexistenceCell {
  std::string first;
  std::string second;
  double first_alone = 0.0;
  double first_after_second = 0.0;
  double second_with_first = 0.0;
  double second_alone = 0.0;
  std::size_t count = 0;
};

struct CoexistenceMatrix {
  std::vector<std::string> methods;
  // Row-major: cells[row * methods.size() + col], row embedded first.
  std::vector<CoexistenceCell> cells;

  const CoexistenceCell& at(std::size_t row, std::size_t col) const { return cells[row * methods.size() + col]; }
};

// On the diagonal the second embed uses the watermarker's second_instance()
// and a secret from the overwrite stream.
CoexistenceMatrix coexistence_matrix(const std::vector<WatermarkerPtr>& methods, const Corpus& corpus,
                                     const EvalConfig& cfg);

struct TradeoffRow {
  EnsembleMode mode = EnsembleMode::parallel;
  double strength = 0.0;
  std::size_t capacity = 0;
  double accuracy = 0.0;
  // Same order as the suites passed in.
  std::vector<double> robustness;
  double mean_psnr = 0.0;
  std::size_t count = 0;
};

struct TradeoffReport {
  std::vector<std::string> suites;
  std::vector<TradeoffRow> rows;
};

// Series rows for every strength, then parallel rows. The template's mode
// and strength are overridden per row.
TradeoffReport tradeoff_sweep(const EnsembleSpec& spec_template, const std::vector<double>& strengths,
                              const Corpus& corpus, const std::vector<AugmentationSuite>& suites,
                              const EvalConfig& cfg);

struct PsnrDistribution {
  std::vector<double> series;
  std::vector<double> parallel;
  double threshold = 40.0;
  double mean_series = 0.0;
  double mean_parallel = 0.0;
  double above_series = 0.0;
  double above_parallel = 0.0;
};

// One message per image (trial 0), no strength clipping.
PsnrDistribution psnr_distribution(const EnsembleSpec& spec, const Corpus& corpus, const EvalConfig& cfg,
                                   double threshold = 40.0);

struct ReportMeta {
  std::string experiment;
  std::string corpus_id;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<std::pair<std::string, std::string>> parameters;
};

// Fixed six-decimal CSV; infinite PSNR prints as "inf".
std::string accuracy_csv(const std::vector<AccuracyReport>& reports, const Corpus& corpus);
std::string coexistence_csv(const CoexistenceMatrix& m);
std::string tradeoff_csv(const TradeoffReport& r);
std::string psnr_distribution_csv(const PsnrDistribution& d, const Corpus& corpus);

std::string accuracy_json(const std::vector<AccuracyReport>& reports, const Corpus& corpus, const ReportMeta& meta);
std::string coexistence_json(const CoexistenceMatrix& m, const ReportMeta& meta);
std::string tradeoff_json(const TradeoffReport& r, const ReportMeta& meta);
std::string psnr_distribution_json(const PsnrDistribution& d, const Corpus& corpus, const ReportMeta& meta);

}  // namespace wmx
