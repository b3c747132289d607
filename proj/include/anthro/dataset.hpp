#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anthro/bodygen.hpp"
#include "anthro/measure.hpp"
#include "anthro/sampling.hpp"
#include "anthro/scanner.hpp"

namespace anthro {

inline constexpr int kManifestFormatVersion = 1;
inline constexpr int kMeasurementCsvFormatVersion = 1;
inline constexpr int kScanFormatVersion = 1;
inline constexpr int kSplitFormatVersion = 1;

// One row of a measurement table. Gender is empty when the file has no
// gender column (prediction files).
struct MeasurementRow {
  std::uint64_t id = 0;
  std::string gender;
  MeasurementSet values;
};

// "id[,gender],head_circumference,...": millimeters at 3 decimals.
std::string measurement_csv_header(bool with_gender);
std::string format_measurement_row(const MeasurementRow& row, bool with_gender);
void write_measurement_csv(const std::filesystem::path& path, std::span<const MeasurementRow> rows,
                           bool with_gender = true);
// Columns are matched by name, so extra columns are ignored.
std::vector<MeasurementRow> read_measurement_csv(const std::filesystem::path& path);

struct DatasetConfig {
  std::size_t count = 100;
  std::uint64_t seed = 1;
  double female_fraction = 0.5;
  int segments = 64;
  AnnotationConfig annotation;
  ScannerConfig scanner;
  std::size_t cloud_points = 2048;    // FPS subsample size
  bool corpus_normalization = false;  // one cloud transform for the whole set
  int jobs = 0;                       // worker threads, 0 = runtime default

  void validate() const;
};

// Paths relative to the dataset root.
struct SampleFiles {
  std::string mesh;
  std::string skeleton;
  std::vector<std::string> scans;
  std::string cloud;          // merged noisy scans
  std::string sampled_cloud;  // FPS subset, meters
  std::string silhouette;
  std::string grayscale;
  std::string measurements;
};

struct SampleRecord {
  std::uint64_t id = 0;
  Gender gender = Gender::Female;
  bool partial = false;
  SampleFiles files;
  CloudTransform cloud_transform;  // maps the sampled cloud into [-1, 1]^3
};

struct DatasetManifest {
  int format_version = kManifestFormatVersion;
  DatasetConfig config;
  ImageStats grayscale_stats;
  ImageStats silhouette_stats;
  std::optional<CloudTransform> corpus_transform;
  std::vector<SampleRecord> samples;
  std::vector<std::uint64_t> skipped;
};

// Generates, annotates, scans and renders `config.count` bodies under `root`.
// Completed samples found on disk are reused, and the aggregate files are
// only rewritten when their content changes. Failed samples are logged and
// skipped; BuildFailed if more than 1% are skipped.
DatasetManifest build_dataset(const DatasetConfig& config, const std::filesystem::path& root);

void save_manifest(const std::filesystem::path& root, const DatasetManifest& manifest);
// SchemaVersion on an unknown format version, IoError when a referenced file
// is missing.
DatasetManifest load_manifest(const std::filesystem::path& root);

std::string sample_stem(std::uint64_t id);  // zero-padded to 6 digits

// Noise seed of scan view `view` of sample `id`.
std::uint64_t view_noise_seed(std::uint64_t seed, std::uint64_t id, std::size_t view);

struct SplitItem {
  std::uint64_t id = 0;
  std::string stratum;  // usually the gender
};

struct FoldSplit {
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint64_t>> folds;  // test ids per fold, ascending

  std::size_t k() const { return folds.size(); }
  std::vector<std::uint64_t> train(std::size_t fold) const;
};

// Seeded shuffle within each stratum, then a contiguous partition of each
// stratum into k folds. Remainders rotate across strata so every fold holds
// floor(n/k) or ceil(n/k) items.
FoldSplit kfold_split(std::span<const SplitItem> items, std::size_t k = 5, std::uint64_t seed = 1);
FoldSplit kfold_split(std::span<const std::uint64_t> ids, std::size_t k = 5, std::uint64_t seed = 1);

void write_split_json(const std::filesystem::path& path, const FoldSplit& split);
FoldSplit read_split_json(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, unless the
// file already holds exactly `content`. Returns true when written.
bool write_if_changed(const std::filesystem::path& path, const std::string& content);

}  // namespace anthro
