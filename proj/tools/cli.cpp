#include "wmx/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wmx/augment.hpp"
#include "wmx/corpus.hpp"
#include "wmx/ecc.hpp"
#include "wmx/ensemble.hpp"
#include "wmx/error.hpp"
#include "wmx/harness.hpp"
#include "wmx/toymodel.hpp"
#include "wmx/watermarker.hpp"

namespace wmx {

namespace {

struct MethodArgs {
  std::string method;
  std::uint64_t key = 0;
  std::size_t capacity = 32;
  std::optional<double> step;
  std::optional<double> strength;
  std::optional<int> block;

  void add_to(CLI::App* app, const std::string& prefix, bool required, std::uint64_t default_key) {
    key = default_key;
    const std::string p = prefix.empty() ? "--" : "--" + prefix + "-";
    auto* opt = app->add_option(prefix.empty() ? "--method" : "--" + prefix, method,
                                "Watermarking method (" + std::string(kMethodNames) + ")");
    if (required) opt->required();
    app->add_option(p + "key", key, "Key for carriers and slot selection")->capture_default_str();
    app->add_option(p + "capacity", capacity, "Capacity in bits")->capture_default_str();
    app->add_option(p + "step", step, "QIM quantization step");
    app->add_option(p + "alpha", strength, "Spread-spectrum pattern RMS");
    app->add_option(p + "block", block, "Block size");
  }

  WatermarkerSpec spec() const {
    WatermarkerSpec s = WatermarkerSpec::defaults(parse_method(method), key);
    s.capacity_bits = capacity;
    if (step) s.quantization_step = *step;
    if (strength) s.embed_strength = *strength;
    if (block) s.block_size = *block;
    s.validate();
    return s;
  }
};

struct EnsembleArgs {
  MethodArgs first;
  MethodArgs second;
  std::string mode = "parallel";
  std::optional<double> strength;
  std::string ecc;
  std::string ecc_file;

  void add_to(CLI::App* app, bool with_mode, bool with_strength) {
    first.add_to(app, "first", true, 1);
    second.add_to(app, "second", true, 2);
    if (with_mode) app->add_option("--mode", mode, "series or parallel")->capture_default_str();
    if (with_strength) app->add_option("--strength", strength, "Clip strength; omit to disable clipping");
    app->add_option("--ecc", ecc, "Named code, e.g. reed_muller_1(4) or extend(hamming(3))");
    app->add_option("--ecc-file", ecc_file, "Code file (n k d header, generator rows, optional H section)");
  }

  EnsembleSpec spec() const {
    EnsembleSpec s;
    s.first = make_watermarker(first.spec());
    s.second = make_watermarker(second.spec());
    s.mode = parse_ensemble_mode(mode);
    s.strength = strength;
    if (!ecc.empty() && !ecc_file.empty()) throw ConfigError("give either --ecc or --ecc-file, not both");
    if (!ecc.empty()) s.code = ecc::build_named_code(ecc);
    if (!ecc_file.empty()) s.code = ecc::read_code_file(ecc_file);
    s.validate();
    return s;
  }
};

struct EvalArgs {
  std::string corpus;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> threads;
  int max_side = kDefaultMaxSide;
  std::string out;
  std::string json;

  void add_to(CLI::App* app) {
    app->add_option("--corpus", corpus, "Directory of PNG images")->required();
    app->add_option("--trials", trials, "Trials per image")->capture_default_str();
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (WMX_THREADS caps this)");
    app->add_option("--max-side", max_side, "Larger images are center-cropped and scaled")->capture_default_str();
    app->add_option("--out", out, "CSV output path (stdout when omitted)");
    app->add_option("--json", json, "JSON mirror output path");
  }

  EvalConfig config() const {
    EvalConfig c;
    c.trials = trials;
    c.seed = seed;
    c.threads = resolve_threads(threads);
    return c;
  }

  ReportMeta meta(const std::string& experiment, const Corpus& c) const {
    ReportMeta m;
    m.experiment = experiment;
    m.corpus_id = c.id;
    m.seed = seed;
    m.trials = trials;
    return m;
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("failed writing " + path);
}

void emit(const EvalArgs& args, const std::string& csv, const std::string& json) {
  write_text(args.out, csv);
  if (!args.json.empty()) write_text(args.json, json);
}

std::vector<WatermarkerPtr> method_list(const std::string& list, const MethodArgs& base) {
  std::vector<WatermarkerPtr> out;
  for (const auto& name : split_list(list)) {
    MethodArgs m = base;
    m.method = name;
    out.push_back(make_watermarker(m.spec()));
  }
  if (out.empty()) throw ConfigError("--methods lists no methods");
  return out;
}

std::vector<AugmentationSuite> suite_list(const std::string& list) {
  std::vector<AugmentationSuite> out;
  for (const auto& name : split_list(list)) out.push_back(make_suite(name));
  return out;
}

std::vector<double> default_strengths() {
  std::vector<double> s;
  for (int i = -1; i <= 6; ++i) s.push_back(0.2 * i);
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Blind image watermark coexistence and ensembling toolkit", "wmx"};
  app.require_subcommand(1);

  // embed / extract
  MethodArgs embed_method;
  std::string secret_hex, in_path, out_path;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a secret into a PNG");
  embed_method.add_to(embed_cmd, "", true, 0);
  embed_cmd->add_option("--secret-hex", secret_hex, "Secret as hex, leftmost digit = first 4 bits")->required();
  embed_cmd->add_option("--in", in_path, "Cover PNG")->required();
  embed_cmd->add_option("--out", out_path, "Output PNG")->required();

  MethodArgs extract_method;
  auto* extract_cmd = app.add_subcommand("extract", "Print the secret carried by a PNG as hex");
  extract_method.add_to(extract_cmd, "", true, 0);
  extract_cmd->add_option("--in", in_path, "Watermarked PNG")->required();

  // ensemble / ensemble-extract
  EnsembleArgs ens;
  auto* ens_cmd = app.add_subcommand("ensemble", "Embed a message with a two-method ensemble");
  ens.add_to(ens_cmd, true, true);
  ens_cmd->add_option("--secret-hex", secret_hex, "Message as hex")->required();
  ens_cmd->add_option("--in", in_path, "Cover PNG")->required();
  ens_cmd->add_option("--out", out_path, "Output PNG")->required();

  EnsembleArgs ens_x;
  auto* ens_x_cmd = app.add_subcommand("ensemble-extract", "Extract an ensemble message");
  ens_x.add_to(ens_x_cmd, false, false);
  ens_x_cmd->add_option("--in", in_path, "Watermarked PNG")->required();

  // augment
  std::string suite_name;
  std::uint64_t aug_seed = 0;
  auto* aug_cmd = app.add_subcommand("augment", "Apply a robustness augmentation suite");
  aug_cmd->add_option("--suite", suite_name, "Suite (" + std::string(kSuiteNames) + ")")->required();
  aug_cmd->add_option("--seed", aug_seed, "Seed")->capture_default_str();
  aug_cmd->add_option("--in", in_path, "Input PNG")->required();
  aug_cmd->add_option("--out", out_path, "Output PNG")->required();

  // residual
  std::string original_path, export_mode = "rgb";
  double gain = 1.0;
  auto* res_cmd = app.add_subcommand("residual", "Export the residual between a watermarked image and its cover");
  res_cmd->add_option("--watermarked", in_path, "Watermarked PNG")->required();
  res_cmd->add_option("--original", original_path, "Cover PNG")->required();
  res_cmd->add_option("--mode", export_mode, "rgb, ycbcr or fourier")->capture_default_str();
  res_cmd->add_option("--gain", gain, "Gain for rgb and ycbcr modes")->capture_default_str();
  res_cmd->add_option("--out", out_path, "Output PNG")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Run an experiment over a corpus");
  eval_cmd->require_subcommand(1);

  EvalArgs acc_args;
  MethodArgs acc_base;
  std::string acc_methods;
  auto* acc_cmd = eval_cmd->add_subcommand("accuracy", "Full-secret accuracy on clean images");
  acc_args.add_to(acc_cmd);
  acc_cmd->add_option("--methods", acc_methods, "Comma-separated methods")->required();
  acc_cmd->add_option("--key", acc_base.key, "Key for every method")->capture_default_str();
  acc_cmd->add_option("--capacity", acc_base.capacity, "Capacity in bits")->capture_default_str();

  EvalArgs rob_args;
  MethodArgs rob_base;
  std::string rob_methods, rob_suites;
  auto* rob_cmd = eval_cmd->add_subcommand("robust", "Full-secret accuracy after augmentation suites");
  rob_args.add_to(rob_cmd);
  rob_cmd->add_option("--methods", rob_methods, "Comma-separated methods")->required();
  rob_cmd->add_option("--suites", rob_suites, "Comma-separated suites")->required();
  rob_cmd->add_option("--key", rob_base.key, "Key for every method")->capture_default_str();
  rob_cmd->add_option("--capacity", rob_base.capacity, "Capacity in bits")->capture_default_str();

  EvalArgs co_args;
  MethodArgs co_base;
  std::string co_methods;
  auto* co_cmd = eval_cmd->add_subcommand("coexist", "Coexistence matrix over ordered method pairs");
  co_args.add_to(co_cmd);
  co_cmd->add_option("--methods", co_methods, "Comma-separated methods")->required();
  co_cmd->add_option("--key", co_base.key, "Key for every method")->capture_default_str();
  co_cmd->add_option("--capacity", co_base.capacity, "Capacity in bits")->capture_default_str();

  EvalArgs tr_args;
  EnsembleArgs tr_ens;
  std::string tr_strengths, tr_suites;
  auto* tr_cmd = eval_cmd->add_subcommand("tradeoff", "Accuracy/quality sweep over clip strengths");
  tr_args.add_to(tr_cmd);
  tr_ens.add_to(tr_cmd, false, false);
  tr_cmd->add_option("--strengths", tr_strengths, "Comma-separated strengths (default -0.2..1.2 step 0.2)");
  tr_cmd->add_option("--suites", tr_suites, "Comma-separated suites for robustness columns");

  EvalArgs pd_args;
  EnsembleArgs pd_ens;
  double threshold = 40.0;
  auto* pd_cmd = eval_cmd->add_subcommand("psnr-dist", "Per-image PSNR of series and parallel ensembles");
  pd_args.add_to(pd_cmd);
  pd_ens.add_to(pd_cmd, false, false);
  pd_cmd->add_option("--threshold", threshold, "PSNR threshold for the above-fraction")->capture_default_str();

  // toy
  toy::ToyConfig toy_cfg;
  std::string toy_size = "1x1", toy_rule = "adjacent", toy_out;
  auto* toy_cmd = app.add_subcommand("toy", "Geometric toy model on a discretized tiny image");
  toy_cmd->add_option("--channels", toy_cfg.channels, "Channels")->capture_default_str();
  toy_cmd->add_option("--size", toy_size, "HxW")->capture_default_str();
  toy_cmd->add_option("--levels", toy_cfg.levels, "Levels per sample")->capture_default_str();
  toy_cmd->add_option("--min-psnr", toy_cfg.min_psnr, "Quality constraint in dB")->capture_default_str();
  toy_cmd->add_option("--rule", toy_rule, "adjacent or ballR (e.g. ball1)")->capture_default_str();
  toy_cmd->add_flag("--exclude-center", toy_cfg.exclude_center, "Leave the clean image out of the candidates");
  toy_cmd->add_option("--out", toy_out, "JSON output path (stdout when omitted)");

  // corpus
  std::size_t corpus_count = 20;
  int corpus_size = 256;
  std::uint64_t corpus_seed = 1;
  auto* corpus_cmd = app.add_subcommand("corpus", "Write a synthetic PNG test corpus");
  corpus_cmd->add_option("--out", out_path, "Output directory")->required();
  corpus_cmd->add_option("--count", corpus_count, "Number of images")->capture_default_str();
  corpus_cmd->add_option("--size", corpus_size, "Side length in pixels")->capture_default_str();
  corpus_cmd->add_option("--seed", corpus_seed, "Seed")->capture_default_str();

  try {
    std::vector<std::string> argv(args.rbegin(), args.rend());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*embed_cmd) {
      const WatermarkerSpec spec = embed_method.spec();
      const Bits secret = from_hex(secret_hex, spec.capacity_bits);
      write_png(out_path, embed(spec, read_png(in_path), secret));
    } else if (*extract_cmd) {
      std::cout << to_hex(extract(extract_method.spec(), read_png(in_path))) << '\n';
    } else if (*ens_cmd) {
      const EnsembleSpec spec = ens.spec();
      const Bits message = from_hex(secret_hex, spec.effective_capacity());
      write_png(out_path, ensemble_embed(spec, read_png(in_path), message));
    } else if (*ens_x_cmd) {
      const EnsembleReadout r = ensemble_extract(ens_x.spec(), read_png(in_path));
      if (r.failed()) {
        std::cerr << "wmx: decode failure (raw " << to_hex(r.raw) << ")\n";
        return kExitRuntime;
      }
      std::cout << to_hex(*r.message) << '\n';
    } else if (*aug_cmd) {
      write_png(out_path, apply_suite(read_png(in_path), make_suite(suite_name), aug_seed));
    } else if (*res_cmd) {
      const ExportMode mode = parse_export_mode(export_mode);
      write_png(out_path, export_residual(residual(read_png(in_path), read_png(original_path)), mode, gain));
    } else if (*acc_cmd) {
      const Corpus corpus = load_corpus(acc_args.corpus, acc_args.max_side);
      std::vector<AccuracyReport> reports;
      for (const auto& wm : method_list(acc_methods, acc_base)) {
        reports.push_back(eval_accuracy(*wm, corpus, acc_args.config()));
      }
      emit(acc_args, accuracy_csv(reports, corpus), accuracy_json(reports, corpus, acc_args.meta("accuracy", corpus)));
    } else if (*rob_cmd) {
      const Corpus corpus = load_corpus(rob_args.corpus, rob_args.max_side);
      const auto suites = suite_list(rob_suites);
      std::vector<AccuracyReport> reports;
      for (const auto& wm : method_list(rob_methods, rob_base)) {
        for (const auto& s : suites) reports.push_back(eval_robustness(*wm, corpus, s, rob_args.config()));
      }
      emit(rob_args, accuracy_csv(reports, corpus), accuracy_json(reports, corpus, rob_args.meta("robust", corpus)));
    } else if (*co_cmd) {
      const Corpus corpus = load_corpus(co_args.corpus, co_args.max_side);
      const auto m = coexistence_matrix(method_list(co_methods, co_base), corpus, co_args.config());
      emit(co_args, coexistence_csv(m), coexistence_json(m, co_args.meta("coexist", corpus)));
    } else if (*tr_cmd) {
      const Corpus corpus = load_corpus(tr_args.corpus, tr_args.max_side);
      std::vector<double> strengths;
      for (const auto& s : split_list(tr_strengths)) strengths.push_back(std::stod(s));
      if (strengths.empty()) strengths = default_strengths();
      const auto r = tradeoff_sweep(tr_ens.spec(), strengths, corpus, suite_list(tr_suites), tr_args.config());
      ReportMeta meta = tr_args.meta("tradeoff", corpus);
      meta.parameters = {{"first", tr_ens.first.method}, {"second", tr_ens.second.method}, {"ecc", tr_ens.ecc}};
      emit(tr_args, tradeoff_csv(r), tradeoff_json(r, meta));
    } else if (*pd_cmd) {
      const Corpus corpus = load_corpus(pd_args.corpus, pd_args.max_side);
      const auto d = psnr_distribution(pd_ens.spec(), corpus, pd_args.config(), threshold);
      ReportMeta meta = pd_args.meta("psnr-dist", corpus);
      meta.parameters = {{"first", pd_ens.first.method}, {"second", pd_ens.second.method}};
      emit(pd_args, psnr_distribution_csv(d, corpus), psnr_distribution_json(d, corpus, meta));
    } else if (*toy_cmd) {
      if (std::sscanf(toy_size.c_str(), "%dx%d", &toy_cfg.height, &toy_cfg.width) != 2) {
        throw ConfigError("--size must look like HxW");
      }
      toy_cfg.rule = toy::parse_rule(toy_rule, toy_cfg.radius);
      write_text(toy_out, toy::toy_report_json(toy_cfg));
    } else if (*corpus_cmd) {
      write_synthetic_corpus(out_path, corpus_count, corpus_size, corpus_seed);
    }
  } catch (const ConfigError& e) {
    std::cerr << "wmx: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "wmx: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace wmx
