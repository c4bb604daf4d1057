#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "wmx/error.hpp"
#include "wmx/harness.hpp"
#include "wmx/rng.hpp"

namespace wmx {

namespace {

void require_corpus(const Corpus& corpus, const EvalConfig& cfg) {
  if (corpus.empty()) throw ConfigError("evaluation needs a non-empty corpus");
  if (cfg.trials < 1) throw ConfigError("trials per image must be at least 1");
}

double full_match(const Bits& a, const Bits& b) { return a == b ? 1.0 : 0.0; }

double bit_match(const Bits& a, const Bits& b) {
  if (a.empty()) return 1.0;
  return 1.0 - static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

// Per (image, trial) scores, then per-image means in corpus order.
AccuracyReport run_accuracy(const Watermarker& wm, const Corpus& corpus, const AugmentationSuite* suite,
                            const EvalConfig& cfg) {
  require_corpus(corpus, cfg);
  const std::size_t items = corpus.size() * cfg.trials;
  std::vector<double> full(items), bits(items);
  const std::string name = wm.name();
  parallel_for(items, cfg.threads, [&](std::size_t item) {
    const std::size_t image = item / cfg.trials, trial = item % cfg.trials;
    const Bits secret = stream_secret(cfg.seed, image, trial, name, StreamRole::secret, wm.capacity());
    Image marked = wm.embed(corpus.images[image], secret);
    if (suite) marked = apply_suite(marked, *suite, stream_seed(cfg.seed, image, trial, name, StreamRole::augment));
    const Bits read = wm.extract(marked);
    full[item] = full_match(read, secret);
    bits[item] = bit_match(read, secret);
  });

  AccuracyReport r;
  r.method = name;
  r.suite = suite ? suite->name : "";
  r.trials = cfg.trials;
  r.count = items;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto begin = static_cast<std::ptrdiff_t>(i * cfg.trials);
    const auto end = begin + static_cast<std::ptrdiff_t>(cfg.trials);
    r.per_image.push_back(mean_of({full.begin() + begin, full.begin() + end}));
    r.per_image_bits.push_back(mean_of({bits.begin() + begin, bits.begin() + end}));
  }
  r.accuracy = mean_of(full);
  r.bit_accuracy = mean_of(bits);
  return r;
}

}  // namespace

std::size_t resolve_threads(std::optional<std::size_t> requested) {
  std::size_t cap = 0;
  if (const char* env = std::getenv("WMX_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) cap = v;
  }
  std::size_t n = requested.value_or(cap > 0 ? cap : std::max(1U, std::thread::hardware_concurrency()));
  if (cap > 0) n = std::min(n, cap);
  return std::max<std::size_t>(n, 1);
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t stream_seed(std::uint64_t master, std::size_t image, std::size_t trial, std::string_view name,
                          StreamRole role) {
  return derive_seed({master, image, trial, hash_name(name), static_cast<std::uint64_t>(role)});
}

Bits stream_secret(std::uint64_t master, std::size_t image, std::size_t trial, std::string_view name,
                   StreamRole role, std::size_t bits) {
  Rng rng(stream_seed(master, image, trial, name, role));
  return random_bits(rng, bits);
}

AccuracyReport eval_accuracy(const Watermarker& wm, const Corpus& corpus, const EvalConfig& cfg) {
  return run_accuracy(wm, corpus, nullptr, cfg);
}

AccuracyReport eval_robustness(const Watermarker& wm, const Corpus& corpus, const AugmentationSuite& suite,
                               const EvalConfig& cfg) {
  suite.validate();
  return run_accuracy(wm, corpus, &suite, cfg);
}

CoexistenceMatrix coexistence_matrix(const std::vector<WatermarkerPtr>& methods, const Corpus& corpus,
                                     const EvalConfig& cfg) {
  require_corpus(corpus, cfg);
  if (methods.empty()) throw ConfigError("coexistence needs at least one method");
  const std::size_t k = methods.size();
  const std::size_t items = corpus.size() * cfg.trials;
  // Per item: k standalone scores, then k*k pairs of (first, second) scores.
  std::vector<double> alone(items * k), first_after(items * k * k), second_with(items * k * k);

  parallel_for(items, cfg.threads, [&](std::size_t item) {
    const std::size_t image = item / cfg.trials, trial = item % cfg.trials;
    const Image& cover = corpus.images[image];
    std::vector<Bits> secrets(k);
    std::vector<Image> marked(k);
    for (std::size_t m = 0; m < k; ++m) {
      const auto& wm = *methods[m];
      secrets[m] = stream_secret(cfg.seed, image, trial, wm.name(), StreamRole::secret, wm.capacity());
      marked[m] = wm.embed(cover, secrets[m]);
      alone[item * k + m] = full_match(wm.extract(marked[m]), secrets[m]);
    }
    for (std::size_t row = 0; row < k; ++row) {
      for (std::size_t col = 0; col < k; ++col) {
        const auto& first = *methods[row];
        WatermarkerPtr second = methods[col];
        Bits second_secret = secrets[col];
        if (first.name() == second->name()) {
          if (auto other = second->second_instance()) second = other;
          second_secret =
              stream_secret(cfg.seed, image, trial, first.name(), StreamRole::overwrite, second->capacity());
        }
        const Image both = second->embed(marked[row], second_secret);
        const std::size_t at = (item * k + row) * k + col;
        first_after[at] = full_match(first.extract(both), secrets[row]);
        second_with[at] = full_match(second->extract(both), second_secret);
      }
    }
  });

  CoexistenceMatrix out;
  for (const auto& m : methods) out.methods.push_back(m->name());
  std::vector<double> alone_mean(k, 0.0);
  for (std::size_t m = 0; m < k; ++m) {
    double sum = 0.0;
    for (std::size_t item = 0; item < items; ++item) sum += alone[item * k + m];
    alone_mean[m] = sum / static_cast<double>(items);
  }
  for (std::size_t row = 0; row < k; ++row) {
    for (std::size_t col = 0; col < k; ++col) {
      CoexistenceCell c;
      c.first = out.methods[row];
      c.second = out.methods[col];
      c.first_alone = alone_mean[row];
      c.second_alone = alone_mean[col];
      double a = 0.0, b = 0.0;
      for (std::size_t item = 0; item < items; ++item) {
        a += first_after[(item * k + row) * k + col];
        b += second_with[(item * k + row) * k + col];
      }
      c.first_after_second = a / static_cast<double>(items);
      c.second_with_first = b / static_cast<double>(items);
      c.count = items;
      out.cells.push_back(c);
    }
  }
  return out;
}

TradeoffReport tradeoff_sweep(const EnsembleSpec& spec_template, const std::vector<double>& strengths,
                              const Corpus& corpus, const std::vector<AugmentationSuite>& suites,
                              const EvalConfig& cfg) {
  require_corpus(corpus, cfg);
  if (strengths.empty()) throw ConfigError("tradeoff sweep needs at least one strength");
  spec_template.validate();
  for (const auto& s : suites) s.validate();

  TradeoffReport report;
  for (const auto& s : suites) report.suites.push_back(s.name);
  const std::size_t items = corpus.size() * cfg.trials;
  const std::size_t ns = suites.size();
  for (EnsembleMode mode : {EnsembleMode::series, EnsembleMode::parallel}) {
    for (double strength : strengths) {
      EnsembleSpec spec = spec_template;
      spec.mode = mode;
      spec.strength = strength;
      const std::size_t capacity = spec.effective_capacity();
      std::vector<double> clean(items), quality(items), robust(items * ns);
      parallel_for(items, cfg.threads, [&](std::size_t item) {
        const std::size_t image = item / cfg.trials, trial = item % cfg.trials;
        const Image& cover = corpus.images[image];
        const Bits message = stream_secret(cfg.seed, image, trial, "ensemble", StreamRole::secret, capacity);
        const Image marked = ensemble_embed(spec, cover, message);
        quality[item] = psnr(marked, cover);
        auto score = [&](const Image& img) {
          const EnsembleReadout r = ensemble_extract(spec, img);
          return r.message && *r.message == message ? 1.0 : 0.0;
        };
        clean[item] = score(marked);
        for (std::size_t s = 0; s < ns; ++s) {
          const std::uint64_t seed = derive_seed(
              {stream_seed(cfg.seed, image, trial, "ensemble", StreamRole::augment), hash_name(suites[s].name)});
          robust[item * ns + s] = score(apply_suite(marked, suites[s], seed));
        }
      });
      TradeoffRow row;
      row.mode = mode;
      row.strength = strength;
      row.capacity = capacity;
      row.accuracy = mean_of(clean);
      row.mean_psnr = mean_of(quality);
      row.count = items;
      for (std::size_t s = 0; s < ns; ++s) {
        double sum = 0.0;
        for (std::size_t item = 0; item < items; ++item) sum += robust[item * ns + s];
        row.robustness.push_back(sum / static_cast<double>(items));
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

PsnrDistribution psnr_distribution(const EnsembleSpec& spec, const Corpus& corpus, const EvalConfig& cfg,
                                   double threshold) {
  require_corpus(corpus, cfg);
  spec.validate();
  EnsembleSpec series = spec, parallel = spec;
  series.mode = EnsembleMode::series;
  parallel.mode = EnsembleMode::parallel;
  series.strength.reset();
  parallel.strength.reset();

  PsnrDistribution d;
  d.threshold = threshold;
  d.series.resize(corpus.size());
  d.parallel.resize(corpus.size());
  const std::size_t capacity = spec.effective_capacity();
  parallel_for(corpus.size(), cfg.threads, [&](std::size_t image) {
    const Image& cover = corpus.images[image];
    const Bits message = stream_secret(cfg.seed, image, 0, "ensemble", StreamRole::secret, capacity);
    d.series[image] = psnr(ensemble_embed(series, cover, message), cover);
    d.parallel[image] = psnr(ensemble_embed(parallel, cover, message), cover);
  });
  d.mean_series = mean_of(d.series);
  d.mean_parallel = mean_of(d.parallel);
  auto above = [threshold](const std::vector<double>& v) {
    const auto n = std::count_if(v.begin(), v.end(), [threshold](double p) { return p > threshold; });
    return static_cast<double>(n) / static_cast<double>(v.size());
  };
  d.above_series = above(d.series);
  d.above_parallel = above(d.parallel);
  return d;
}

}  // namespace wmx
