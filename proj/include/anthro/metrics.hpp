#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "anthro/dataset.hpp"

namespace anthro {

using PerMeasurement = std::array<double, kMeasurementCount>;

// Rows are matched by id; IdMismatch unless both sides hold the same ids.
PerMeasurement mae(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth);
// Percent of samples with |pred - gt| <= threshold_mm, per measurement.
PerMeasurement ap_at(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth,
                     double threshold_mm);
// Percent of samples whose mean error over the 16 measurements is
// <= threshold_mm.
double map_at(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth,
              double threshold_mm);

struct ThresholdScores {
  double threshold_mm = 0.0;
  PerMeasurement ap{};
  double map = 0.0;
};

struct EvalReport {
  int fold = -1;  // -1 for the cross-fold aggregate or a single evaluation
  std::size_t sample_count = 0;
  PerMeasurement mae{};
  std::vector<ThresholdScores> scores;

  double mean_mae() const;
};

EvalReport evaluate(std::span<const MeasurementRow> predictions, std::span<const MeasurementRow> truth,
                    std::span<const double> thresholds_mm);

struct FoldEvaluation {
  std::vector<EvalReport> folds;
  EvalReport aggregate;  // element-wise mean of the fold reports
};

// predictions[i] covers the test ids of split fold i. MissingFold when a
// fold has no predictions.
FoldEvaluation evaluate_folds(const FoldSplit& split, std::span<const MeasurementRow> truth,
                              std::span<const std::vector<MeasurementRow>> predictions,
                              std::span<const double> thresholds_mm);

// Mean MAE values reported for the two reference estimators trained on the
// full-scale dataset. Printed for context only.
inline constexpr double kPublishedGrayscaleMaeMm = 4.64;
inline constexpr double kPublishedPointCloudMaeMm = 4.95;

// Aligned table: one row per measurement plus a mean row, then mAP rows.
std::string format_report_text(const EvalReport& report, bool include_published = true);
std::string format_report_csv(const EvalReport& report);

}  // namespace anthro
