#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "wmx/harness.hpp"

namespace wmx {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// JSON has no infinity; infinite PSNR becomes the string "inf".
nlohmann::json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

nlohmann::json meta_json(const ReportMeta& meta) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : meta.parameters) params[k] = v;
  return {{"experiment", meta.experiment},
          {"corpus", meta.corpus_id},
          {"seed", meta.seed},
          {"trials", meta.trials},
          {"parameters", params}};
}

nlohmann::json jlist(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(jnum(x));
  return out;
}

}  // namespace

std::string accuracy_csv(const std::vector<AccuracyReport>& reports, const Corpus& corpus) {
  std::ostringstream out;
  out << "method,suite,image,trials,full_secret_accuracy,bit_accuracy\n";
  for (const auto& r : reports) {
    const std::string suite = r.suite.empty() ? "none" : r.suite;
    for (std::size_t i = 0; i < r.per_image.size(); ++i) {
      out << r.method << ',' << suite << ',' << corpus.names[i] << ',' << r.trials << ',' << num(r.per_image[i])
          << ',' << num(r.per_image_bits[i]) << '\n';
    }
    out << r.method << ',' << suite << ",ALL," << r.count << ',' << num(r.accuracy) << ','
        << num(r.bit_accuracy) << '\n';
  }
  return out.str();
}

std::string coexistence_csv(const CoexistenceMatrix& m) {
  std::ostringstream out;
  out << "first,second,first_alone,first_after_second,second_with_first,second_alone,count\n";
  for (const auto& c : m.cells) {
    out << c.first << ',' << c.second << ',' << num(c.first_alone) << ',' << num(c.first_after_second) << ','
        << num(c.second_with_first) << ',' << num(c.second_alone) << ',' << c.count << '\n';
  }
  return out.str();
}

std::string tradeoff_csv(const TradeoffReport& r) {
  std::ostringstream out;
  out << "mode,strength,capacity,accuracy,mean_psnr";
  for (const auto& s : r.suites) out << ",robustness_" << s;
  out << ",count\n";
  for (const auto& row : r.rows) {
    out << to_string(row.mode) << ',' << num(row.strength) << ',' << row.capacity << ',' << num(row.accuracy)
        << ',' << num(row.mean_psnr);
    for (double v : row.robustness) out << ',' << num(v);
    out << ',' << row.count << '\n';
  }
  return out.str();
}

std::string psnr_distribution_csv(const PsnrDistribution& d, const Corpus& corpus) {
  std::ostringstream out;
  out << "image,series_psnr,parallel_psnr\n";
  for (std::size_t i = 0; i < d.series.size(); ++i) {
    out << corpus.names[i] << ',' << num(d.series[i]) << ',' << num(d.parallel[i]) << '\n';
  }
  out << "MEAN," << num(d.mean_series) << ',' << num(d.mean_parallel) << '\n';
  out << "ABOVE_" << num(d.threshold) << ',' << num(d.above_series) << ',' << num(d.above_parallel) << '\n';
  return out.str();
}

std::string accuracy_json(const std::vector<AccuracyReport>& reports, const Corpus& corpus, const ReportMeta& meta) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    rows.push_back({{"method", r.method},
                    {"suite", r.suite.empty() ? "none" : r.suite},
                    {"trials", r.trials},
                    {"count", r.count},
                    {"full_secret_accuracy", r.accuracy},
                    {"bit_accuracy", r.bit_accuracy},
                    {"images", corpus.names},
                    {"per_image", jlist(r.per_image)},
                    {"per_image_bits", jlist(r.per_image_bits)}});
  }
  return nlohmann::json{{"meta", meta_json(meta)}, {"reports", rows}}.dump(2) + "\n";
}

std::string coexistence_json(const CoexistenceMatrix& m, const ReportMeta& meta) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : m.cells) {
    cells.push_back({{"first", c.first},
                     {"second", c.second},
                     {"first_alone", c.first_alone},
                     {"first_after_second", c.first_after_second},
                     {"second_with_first", c.second_with_first},
                     {"second_alone", c.second_alone},
                     {"count", c.count}});
  }
  return nlohmann::json{{"meta", meta_json(meta)}, {"methods", m.methods}, {"cells", cells}}.dump(2) + "\n";
}

std::string tradeoff_json(const TradeoffReport& r, const ReportMeta& meta) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json robust = nlohmann::json::object();
    for (std::size_t s = 0; s < r.suites.size(); ++s) robust[r.suites[s]] = row.robustness[s];
    rows.push_back({{"mode", std::string(to_string(row.mode))},
                    {"strength", row.strength},
                    {"capacity", row.capacity},
                    {"accuracy", row.accuracy},
                    {"mean_psnr", jnum(row.mean_psnr)},
                    {"robustness", robust},
                    {"count", row.count}});
  }
  return nlohmann::json{{"meta", meta_json(meta)}, {"suites", r.suites}, {"rows", rows}}.dump(2) + "\n";
}

std::string psnr_distribution_json(const PsnrDistribution& d, const Corpus& corpus, const ReportMeta& meta) {
  return nlohmann::json{{"meta", meta_json(meta)},
                        {"images", corpus.names},
                        {"series", jlist(d.series)},
                        {"parallel", jlist(d.parallel)},
                        {"threshold", d.threshold},
                        {"mean_series", jnum(d.mean_series)},
                        {"mean_parallel", jnum(d.mean_parallel)},
                        {"above_series", d.above_series},
                        {"above_parallel", d.above_parallel}}
             .dump(2) +
         "\n";
}

}  // namespace wmx
