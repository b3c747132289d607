#include "anthro/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "anthro/error.hpp"

namespace anthro {
namespace {

using Pair = std::pair<const MeasurementRow*, const MeasurementRow*>;

std::vector<Pair> align(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorCode::IdMismatch, std::to_string(predictions.size()) + " predictions for " +
                                           std::to_string(truth.size()) + " ground-truth rows");
  }
  std::map<std::uint64_t, const MeasurementRow*> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.id, &p).second) {
      throw Error(ErrorCode::IdMismatch, "duplicate prediction id " + std::to_string(p.id));
    }
  }
  std::vector<Pair> pairs;
  pairs.reserve(truth.size());
  for (const auto& t : truth) {
    const auto it = by_id.find(t.id);
    if (it == by_id.end()) throw Error(ErrorCode::IdMismatch, "no prediction for id " + std::to_string(t.id));
    pairs.emplace_back(it->second, &t);
  }
  return pairs;
}

void check_threshold(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be > 0");
}

double percent(std::size_t hits, std::size_t n) { return n == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / n; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double mean_of(const PerMeasurement& a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s / static_cast<double>(a.size());
}

std::string threshold_label(double t) { return fmt("%g", t); }

}  // namespace

PerMeasurement mae(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth) {
  const auto pairs = align(predictions, truth);
  PerMeasurement out{};
  for (const auto& [p, t] : pairs) {
    for (std::size_t i = 0; i < kMeasurementCount; ++i) out[i] += std::abs(p->values.mm[i] - t->values.mm[i]);
  }
  if (!pairs.empty()) {
    for (double& v : out) v /= static_cast<double>(pairs.size());
  }
  return out;
}

PerMeasurement ap_at(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth,
                     double threshold_mm) {
  check_threshold(threshold_mm);
  const auto pairs = align(predictions, truth);
  PerMeasurement out{};
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    std::size_t hits = 0;
    for (const auto& [p, t] : pairs) hits += std::abs(p->values.mm[i] - t->values.mm[i]) <= threshold_mm;
    out[i] = percent(hits, pairs.size());
  }
  return out;
}

double map_at(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth,
              double threshold_mm) {
  check_threshold(threshold_mm);
  const auto pairs = align(predictions, truth);
  std::size_t hits = 0;
  for (const auto& [p, t] : pairs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kMeasurementCount; ++i) sum += std::abs(p->values.mm[i] - t->values.mm[i]);
    hits += sum / static_cast<double>(kMeasurementCount) <= threshold_mm;
  }
  return percent(hits, pairs.size());
}

double EvalReport::mean_mae() const { return mean_of(mae); }

EvalReport evaluate(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth,
                    std::span<const double> thresholds_mm) {
  EvalReport r;
  r.sample_count = truth.size();
  r.mae = mae(predictions, truth);
  for (double t : thresholds_mm) r.scores.push_back({t, ap_at(predictions, truth, t), map_at(predictions, truth, t)});
  return r;
}

FoldEvaluation evaluate_folds(const FoldSplit& split, std::span<const MeasurementRow> truth,
                              std::span<const std::vector<MeasurementRow>> predictions,
                              std::span<const double> thresholds_mm) {
  if (split.k() == 0) throw Error(ErrorCode::InvalidArgument, "split has no folds");
  std::map<std::uint64_t, const MeasurementRow*> by_id;
  for (const auto& t : truth) by_id.emplace(t.id, &t);

  FoldEvaluation out;
  for (std::size_t f = 0; f < split.k(); ++f) {
    if (f >= predictions.size() || predictions[f].empty()) {
      throw Error(ErrorCode::MissingFold, "no predictions for fold " + std::to_string(f));
    }
    std::vector<MeasurementRow> fold_truth;
    for (auto id : split.folds[f]) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw Error(ErrorCode::IdMismatch, "fold id " + std::to_string(id) + " has no ground truth");
      fold_truth.push_back(*it->second);
    }
    EvalReport r = evaluate(predictions[f], fold_truth, thresholds_mm);
    r.fold = static_cast<int>(f);
    out.folds.push_back(std::move(r));
  }

  EvalReport& agg = out.aggregate;
  const double k = static_cast<double>(out.folds.size());
  agg.scores.resize(thresholds_mm.size());
  for (std::size_t t = 0; t < thresholds_mm.size(); ++t) agg.scores[t].threshold_mm = thresholds_mm[t];
  for (const auto& r : out.folds) {
    agg.sample_count += r.sample_count;
    for (std::size_t i = 0; i < kMeasurementCount; ++i) agg.mae[i] += r.mae[i] / k;
    for (std::size_t t = 0; t < r.scores.size(); ++t) {
      for (std::size_t i = 0; i < kMeasurementCount; ++i) agg.scores[t].ap[i] += r.scores[t].ap[i] / k;
      agg.scores[t].map += r.scores[t].map / k;
    }
  }
  return out;
}

std::string format_report_text(const EvalReport& report, bool include_published) {
  std::string out;
  out += report.fold < 0 ? "Evaluation" : "Fold " + std::to_string(report.fold);
  out += " (" + std::to_string(report.sample_count) + " samples)\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %10s", "Measurement", "MAE [mm]");
  out += line;
  for (const auto& s : report.scores) {
    std::snprintf(line, sizeof line, " %10s", ("AP@" + threshold_label(s.threshold_mm)).c_str());
    out += line;
  }
  out += "\n";
  auto row = [&](std::string_view label, double mae_v, auto ap_of) {
    std::snprintf(line, sizeof line, "%-24.*s %10.2f", static_cast<int>(label.size()), label.data(), mae_v);
    out += line;
    for (std::size_t t = 0; t < report.scores.size(); ++t) {
      std::snprintf(line, sizeof line, " %10.2f", ap_of(t));
      out += line;
    }
    out += "\n";
  };
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    row(measurement_label(static_cast<Measurement>(i)), report.mae[i],
        [&](std::size_t t) { return report.scores[t].ap[i]; });
  }
  row("Mean", report.mean_mae(), [&](std::size_t t) { return mean_of(report.scores[t].ap); });
  for (const auto& s : report.scores) {
    std::snprintf(line, sizeof line, "%-24s %10.2f\n", ("mAP@" + threshold_label(s.threshold_mm)).c_str(), s.map);
    out += line;
  }
  if (include_published) {
    out += "\nPublished reference values, full-scale training (not reproducible at desk scale):\n";
    out += "  gray-scale image estimator mean MAE  " + fmt("%.2f", kPublishedGrayscaleMaeMm) + " mm\n";
    out += "  point-cloud estimator mean MAE       " + fmt("%.2f", kPublishedPointCloudMaeMm) + " mm\n";
  }
  return out;
}

std::string format_report_csv(const EvalReport& report) {
  std::string out = "measurement,mae_mm";
  for (const auto& s : report.scores) out += ",ap_at_" + threshold_label(s.threshold_mm);
  out += "\n";
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    out += std::string(measurement_name(static_cast<Measurement>(i))) + "," + fmt("%.3f", report.mae[i]);
    for (const auto& s : report.scores) out += "," + fmt("%.3f", s.ap[i]);
    out += "\n";
  }
  out += "mean," + fmt("%.3f", report.mean_mae());
  for (const auto& s : report.scores) out += "," + fmt("%.3f", mean_of(s.ap));
  out += "\n";
  for (const auto& s : report.scores) {
    out += "map_at_" + threshold_label(s.threshold_mm) + ",";
    for (std::size_t t = 0; t < report.scores.size(); ++t) {
      out += "," + (report.scores[t].threshold_mm == s.threshold_mm ? fmt("%.3f", s.map) : std::string());
    }
    out += "\n";
  }
  return out;
}

}  // namespace anthro
