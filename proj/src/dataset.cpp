#include "anthro/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>
#include <omp.h>

#include "anthro/error.hpp"
#include "anthro/mesh_io.hpp"

namespace anthro {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t z = a * 0x9E3779B97F4A7C15ull ^ (b + 0x7F4A7C159E3779B9ull) * 0xBF58476D1CE4E5B9ull;
  z += c * 0x94D049BB133111EBull + 0x2545F4914F6CDD1Dull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_mm(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 json_vec(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

json transform_json(const CloudTransform& t) {
  return {{"translation", vec_json(t.translation)}, {"scale", t.scale}};
}

CloudTransform json_transform(const json& j) {
  return {json_vec(j.at("translation")), j.at("scale").get<double>()};
}

json stats_json(const ImageStats& s) { return {{"mean", s.mean}, {"std", s.std}}; }

ImageStats json_stats(const json& j) { return {j.at("mean").get<double>(), j.at("std").get<double>()}; }

json annotation_json(const AnnotationConfig& c) {
  return {{"scan_step", c.scan_step},
          {"head_tilt_degrees", c.head_tilt_degrees},
          {"waist_half_height", c.waist_half_height},
          {"hull_circumference", c.hull_circumference},
          {"side", c.side == Side::Left ? "left" : "right"}};
}

AnnotationConfig json_annotation(const json& j) {
  AnnotationConfig c;
  c.scan_step = j.at("scan_step").get<double>();
  c.head_tilt_degrees = j.at("head_tilt_degrees").get<double>();
  c.waist_half_height = j.at("waist_half_height").get<double>();
  c.hull_circumference = j.at("hull_circumference").get<bool>();
  c.side = j.at("side").get<std::string>() == "right" ? Side::Right : Side::Left;
  return c;
}

json scanner_json(const ScannerConfig& c) {
  return {{"scan_width", c.scan_width},       {"scan_height", c.scan_height},
          {"fov_degrees", c.fov_degrees},     {"distance", c.distance},
          {"azimuths", c.azimuths},           {"noise_sigma", c.noise_sigma},
          {"image_size", c.image_size},       {"image_extent", c.image_extent},
          {"image_center_y", c.image_center_y}};
}

ScannerConfig json_scanner(const json& j) {
  ScannerConfig c;
  c.scan_width = j.at("scan_width").get<int>();
  c.scan_height = j.at("scan_height").get<int>();
  c.fov_degrees = j.at("fov_degrees").get<double>();
  c.distance = j.at("distance").get<double>();
  c.azimuths = j.at("azimuths").get<std::vector<double>>();
  c.noise_sigma = j.at("noise_sigma").get<double>();
  c.image_size = j.at("image_size").get<int>();
  c.image_extent = j.at("image_extent").get<double>();
  c.image_center_y = j.at("image_center_y").get<double>();
  return c;
}

// Everything that determines sample content; count and jobs do not.
json content_config_json(const DatasetConfig& c) {
  return {{"seed", c.seed},
          {"female_fraction", c.female_fraction},
          {"segments", c.segments},
          {"cloud_points", c.cloud_points},
          {"corpus_normalization", c.corpus_normalization},
          {"annotation", annotation_json(c.annotation)},
          {"scanner", scanner_json(c.scanner)}};
}

json config_json(const DatasetConfig& c) {
  json j = {{"count", c.count}};
  const json content = content_config_json(c);
  for (const auto& [key, value] : content.items()) j[key] = value;
  return j;
}

DatasetConfig json_config(const json& j) {
  DatasetConfig c;
  c.count = j.at("count").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.female_fraction = j.at("female_fraction").get<double>();
  c.segments = j.at("segments").get<int>();
  c.cloud_points = j.at("cloud_points").get<std::size_t>();
  c.corpus_normalization = j.at("corpus_normalization").get<bool>();
  c.annotation = json_annotation(j.at("annotation"));
  c.scanner = json_scanner(j.at("scanner"));
  return c;
}

SampleFiles files_for(std::uint64_t id, Gender gender, std::size_t views) {
  const std::string g(gender_name(gender));
  const std::string stem = sample_stem(id);
  SampleFiles f;
  f.mesh = "meshes/" + g + "/" + stem + ".obj";
  f.skeleton = "skeletons/" + g + "/" + stem + ".json";
  for (std::size_t v = 0; v < views; ++v) f.scans.push_back("scans/" + g + "/" + stem + "_v" + std::to_string(v) + ".scan");
  f.cloud = "clouds/" + g + "/" + stem + ".ply";
  f.sampled_cloud = "sampled/" + g + "/" + stem + ".ply";
  f.silhouette = "silhouettes/" + g + "/" + stem + ".pbm";
  f.grayscale = "grayscale/" + g + "/" + stem + ".pgm";
  f.measurements = "measurements/" + g + "/" + stem + ".csv";
  return f;
}

std::vector<std::string> all_paths(const SampleFiles& f) {
  std::vector<std::string> out{f.mesh, f.skeleton};
  out.insert(out.end(), f.scans.begin(), f.scans.end());
  out.insert(out.end(), {f.cloud, f.sampled_cloud, f.silhouette, f.grayscale, f.measurements});
  return out;
}

struct PixelMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  double count = 0.0;

  void add(const ImageBuffer& im) {
    for (float v : im.pixels) {
      sum += v;
      sum_sq += static_cast<double>(v) * v;
    }
    count += static_cast<double>(im.pixels.size());
  }
  void add(const PixelMoments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  ImageStats stats() const {
    const double mean = sum / count;
    const double var = std::max(0.0, sum_sq / count - mean * mean);
    if (!(var > 0.0)) throw Error(ErrorCode::ZeroVariance, "dataset images have zero pixel variance");
    return {mean, std::sqrt(var)};
  }
};

struct SampleResult {
  bool ok = false;
  std::string error;
  SampleRecord record;
  MeasurementRow row;
  PointCloud sampled;
  PixelMoments gray;
  PixelMoments silhouette;
};

ImageBuffer quantized(ImageBuffer im) {
  for (float& v : im.pixels) v = static_cast<float>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f)) / 255.0f;
  return im;
}

void load_completed(const fs::path& root, SampleResult& r) {
  const auto rows = read_measurement_csv(root / r.record.files.measurements);
  if (rows.size() != 1 || rows[0].id != r.record.id) {
    throw Error(ErrorCode::ParseError, "unexpected content in " + r.record.files.measurements);
  }
  r.row = rows[0];
  r.sampled.points = read_ply_points(root / r.record.files.sampled_cloud);
  r.gray.add(read_pgm(root / r.record.files.grayscale));
  r.silhouette.add(read_pbm(root / r.record.files.silhouette));
}

void build_sample(const DatasetConfig& cfg, const BodyParams& params, const fs::path& root, SampleResult& r) {
  const auto& f = r.record.files;
  const BodySample body = generate_body(params);
  MeasurementSet values = measure_all(body, cfg.annotation);
  if (auto bad = values.sanity_violation(); !bad.empty()) {
    throw Error(ErrorCode::BuildFailed, "measurement sanity check failed: " + std::string(bad));
  }

  std::vector<StructuredScan> scans;
  const auto cams = scan_cameras(body.mesh, cfg.scanner);
  for (std::size_t v = 0; v < cams.size(); ++v) {
    scans.push_back(add_noise(depth_scan(body.mesh, cams[v], 1), cfg.scanner.noise_sigma, view_noise_seed(cfg.seed, r.record.id, v)));
    write_structured_scan(root / f.scans[v], scans.back());
  }
  const PointCloud cloud = merge_scans(scans);
  if (cloud.points.empty()) throw Error(ErrorCode::TooFewPoints, "scans produced no points");
  write_ply_points(root / f.cloud, cloud.points);

  const auto picks = farthest_point_sample(cloud, cfg.cloud_points, cfg.seed, 1);
  r.sampled = subset(cloud, picks);
  for (auto& p : r.sampled.points) {
    for (int a = 0; a < 3; ++a) p[a] = static_cast<float>(p[a]);
  }
  write_ply_points(root / f.sampled_cloud, r.sampled.points);

  const Camera cam = image_camera(body.mesh, cfg.scanner);
  const ImageBuffer sil = render_silhouette(body.mesh, cam, 1);
  const ImageBuffer gray = quantized(render_grayscale(body.mesh, cam, 1));
  write_pbm(root / f.silhouette, sil);
  write_pgm(root / f.grayscale, gray);
  r.gray.add(gray);
  r.silhouette.add(sil);

  write_obj(root / f.mesh, body.mesh);
  write_skeleton_json(root / f.skeleton, body.skeleton);

  r.row.id = r.record.id;
  r.row.gender = std::string(gender_name(params.gender));
  for (auto& v : values.mm) v = std::stod(format_mm(v));
  r.row.values = values;
  // Written last: its presence marks the sample complete.
  write_if_changed(root / f.measurements, measurement_csv_header(true) + "\n" + format_measurement_row(r.row, true) + "\n");
}

json manifest_json(const DatasetManifest& m) {
  json samples = json::array();
  for (const auto& s : m.samples) {
    samples.push_back({{"id", s.id},
                       {"gender", gender_name(s.gender)},
                       {"partial", s.partial},
                       {"files",
                        {{"mesh", s.files.mesh},
                         {"skeleton", s.files.skeleton},
                         {"scans", s.files.scans},
                         {"cloud", s.files.cloud},
                         {"sampled_cloud", s.files.sampled_cloud},
                         {"silhouette", s.files.silhouette},
                         {"grayscale", s.files.grayscale},
                         {"measurements", s.files.measurements}}},
                       {"cloud_transform", transform_json(s.cloud_transform)}});
  }
  json norm = {{"cloud_mode", m.corpus_transform ? "corpus" : "per_cloud"},
               {"grayscale", stats_json(m.grayscale_stats)},
               {"silhouette", stats_json(m.silhouette_stats)}};
  if (m.corpus_transform) norm["corpus_transform"] = transform_json(*m.corpus_transform);
  return {{"format_version", m.format_version},
          {"measurement_csv_version", kMeasurementCsvFormatVersion},
          {"scan_format_version", kScanFormatVersion},
          {"config", config_json(m.config)},
          {"normalization", norm},
          {"measurements", "measurements.csv"},
          {"skipped", m.skipped},
          {"samples", samples}};
}

}  // namespace

std::uint64_t view_noise_seed(std::uint64_t seed, std::uint64_t id, std::size_t view) {
  return mix3(seed, id, view);
}

std::string sample_stem(std::uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(id));
  return buf;
}

std::string measurement_csv_header(bool with_gender) {
  std::string h = with_gender ? "id,gender" : "id";
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    h += ",";
    h += measurement_name(static_cast<Measurement>(i));
  }
  return h;
}

std::string format_measurement_row(const MeasurementRow& row, bool with_gender) {
  std::string s = std::to_string(row.id);
  if (with_gender) s += "," + row.gender;
  for (double v : row.values.mm) s += "," + format_mm(v);
  return s;
}

void write_measurement_csv(const fs::path& path, std::span<const MeasurementRow> rows, bool with_gender) {
  std::string text = measurement_csv_header(with_gender) + "\n";
  for (const auto& r : rows) text += format_measurement_row(r, with_gender) + "\n";
  write_if_changed(path, text);
}

std::vector<MeasurementRow> read_measurement_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty measurement file " + path.string());
  const auto header = split_csv_line(line);
  auto column = [&](std::string_view name) -> int {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int id_col = column("id");
  const int gender_col = column("gender");
  if (id_col < 0) throw Error(ErrorCode::ParseError, "no id column in " + path.string());
  std::array<int, kMeasurementCount> cols{};
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    cols[i] = column(measurement_name(static_cast<Measurement>(i)));
    if (cols[i] < 0) {
      throw Error(ErrorCode::ParseError, "missing column " + std::string(measurement_name(static_cast<Measurement>(i))) +
                                             " in " + path.string());
    }
  }
  std::vector<MeasurementRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": wrong column count");
    }
    MeasurementRow r;
    try {
      std::size_t used = 0;
      r.id = std::stoull(cells[id_col], &used);
      if (used != cells[id_col].size()) throw std::invalid_argument("id");
      if (gender_col >= 0) r.gender = cells[gender_col];
      for (std::size_t i = 0; i < kMeasurementCount; ++i) {
        r.values.mm[i] = std::stod(cells[cols[i]], &used);
        if (used != cells[cols[i]].size()) throw std::invalid_argument("value");
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": bad number");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void DatasetConfig::validate() const {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  if (!(female_fraction >= 0.0 && female_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "female fraction must lie in [0, 1]");
  }
  if (cloud_points == 0) throw Error(ErrorCode::InvalidArgument, "cloud point count must be >= 1");
  if (jobs < 0) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 0");
  annotation.validate();
  scanner.validate();
}

bool write_if_changed(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (fs::exists(path, ec)) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (ss.str() == content) return false;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot write " + path.string() + ": " + ec.message());
  return true;
}

DatasetManifest build_dataset(const DatasetConfig& config, const fs::path& root) {
  config.validate();
  fs::create_directories(root);
  if (fs::exists(root / "manifest.json")) {
    json old;
    try {
      old = json::parse(read_text(root / "manifest.json"));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("manifest.json: ") + e.what());
    }
    DatasetConfig prior;
    try {
      prior = json_config(old.at("config"));
    } catch (const json::exception&) {
      throw Error(ErrorCode::SchemaVersion, "existing manifest.json has an unknown layout");
    }
    if (content_config_json(prior) != content_config_json(config)) {
      throw Error(ErrorCode::InvalidArgument, "dataset root " + root.string() + " was built with a different configuration");
    }
  }

  PopulationConfig pop;
  pop.count = config.count;
  pop.female_fraction = config.female_fraction;
  pop.seed = config.seed;
  pop.segments = config.segments;
  const auto params = sample_population(pop);

  std::vector<SampleResult> results(params.size());
  const int threads = config.jobs > 0 ? config.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t i = 0; i < params.size(); ++i) {
    SampleResult& r = results[i];
    r.record.id = i;
    r.record.gender = params[i].gender;
    r.record.files = files_for(i, params[i].gender, config.scanner.azimuths.size());
    try {
      const auto paths = all_paths(r.record.files);
      const bool done = std::all_of(paths.begin(), paths.end(), [&](const std::string& p) { return fs::exists(root / p); });
      if (done) {
        load_completed(root, r);
      } else {
        build_sample(config, params[i], root, r);
      }
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  }

  DatasetManifest m;
  m.config = config;
  PixelMoments gray, sil;
  std::vector<MeasurementRow> rows;
  std::vector<PointCloud> clouds;
  for (auto& r : results) {
    if (!r.ok) {
      std::cerr << "{\"event\":\"sample_skipped\",\"id\":" << r.record.id << ",\"reason\":" << json(r.error).dump() << "}\n";
      m.skipped.push_back(r.record.id);
      continue;
    }
    r.record.cloud_transform = normalize_cloud(r.sampled).transform;
    gray.add(r.gray);
    sil.add(r.silhouette);
    rows.push_back(r.row);
    m.samples.push_back(r.record);
    if (config.corpus_normalization) clouds.push_back(std::move(r.sampled));
  }
  if (m.samples.empty()) throw Error(ErrorCode::BuildFailed, "no sample could be built");
  m.grayscale_stats = gray.stats();
  m.silhouette_stats = sil.stats();
  if (config.corpus_normalization) {
    const auto t = fit_cloud_transform(clouds);
    m.corpus_transform = t;
    for (auto& s : m.samples) s.cloud_transform = t;
  }
  write_measurement_csv(root / "measurements.csv", rows, true);
  save_manifest(root, m);
  if (static_cast<double>(m.skipped.size()) > 0.01 * static_cast<double>(config.count)) {
    throw Error(ErrorCode::BuildFailed, std::to_string(m.skipped.size()) + " of " + std::to_string(config.count) +
                                            " samples failed");
  }
  return m;
}

void save_manifest(const fs::path& root, const DatasetManifest& manifest) {
  write_if_changed(root / "manifest.json", manifest_json(manifest).dump(2) + "\n");
}

DatasetManifest load_manifest(const fs::path& root) {
  json j;
  try {
    j = json::parse(read_text(root / "manifest.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest.json: ") + e.what());
  }
  if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != kManifestFormatVersion) {
    throw Error(ErrorCode::SchemaVersion, "unsupported manifest format version " +
                                              (j.contains("format_version") ? j["format_version"].dump() : "(none)"));
  }
  DatasetManifest m;
  try {
    m.config = json_config(j.at("config"));
    const auto& norm = j.at("normalization");
    m.grayscale_stats = json_stats(norm.at("grayscale"));
    m.silhouette_stats = json_stats(norm.at("silhouette"));
    if (norm.contains("corpus_transform")) m.corpus_transform = json_transform(norm["corpus_transform"]);
    m.skipped = j.at("skipped").get<std::vector<std::uint64_t>>();
    for (const auto& s : j.at("samples")) {
      SampleRecord r;
      r.id = s.at("id").get<std::uint64_t>();
      r.gender = gender_from_name(s.at("gender").get<std::string>());
      r.partial = s.at("partial").get<bool>();
      const auto& f = s.at("files");
      r.files.mesh = f.at("mesh").get<std::string>();
      r.files.skeleton = f.at("skeleton").get<std::string>();
      r.files.scans = f.at("scans").get<std::vector<std::string>>();
      r.files.cloud = f.at("cloud").get<std::string>();
      r.files.sampled_cloud = f.at("sampled_cloud").get<std::string>();
      r.files.silhouette = f.at("silhouette").get<std::string>();
      r.files.grayscale = f.at("grayscale").get<std::string>();
      r.files.measurements = f.at("measurements").get<std::string>();
      r.cloud_transform = json_transform(s.at("cloud_transform"));
      m.samples.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest.json: ") + e.what());
  }
  std::vector<std::uint64_t> ids;
  for (const auto& s : m.samples) {
    ids.push_back(s.id);
    if (s.partial) continue;
    for (const auto& p : all_paths(s.files)) {
      if (!fs::exists(root / p)) throw Error(ErrorCode::IoError, "manifest references missing file " + p);
    }
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::ParseError, "manifest contains duplicate sample ids");
  }
  return m;
}

std::vector<std::uint64_t> FoldSplit::train(std::size_t fold) const {
  std::vector<std::uint64_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != fold) out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FoldSplit kfold_split(std::span<const SplitItem> items, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be >= 2");
  if (items.size() < k) {
    throw Error(ErrorCode::TooFewSamples, std::to_string(items.size()) + " samples cannot fill " + std::to_string(k) + " folds");
  }
  std::map<std::string, std::vector<std::uint64_t>> strata;
  for (const auto& it : items) strata[it.stratum].push_back(it.id);

  FoldSplit split;
  split.seed = seed;
  split.folds.assign(k, {});
  std::size_t offset = 0;
  std::uint64_t stratum_index = 0;
  for (auto& [name, ids] : strata) {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw Error(ErrorCode::InvalidArgument, "duplicate id in split input");
    }
    std::mt19937_64 rng(mix3(seed, stratum_index++, 0x5EED));
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t base = ids.size() / k;
    const std::size_t extra = ids.size() % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const bool gets_extra = (f + k - offset) % k < extra;
      const std::size_t take = base + (gets_extra ? 1 : 0);
      split.folds[f].insert(split.folds[f].end(), ids.begin() + static_cast<std::ptrdiff_t>(pos),
                            ids.begin() + static_cast<std::ptrdiff_t>(pos + take));
      pos += take;
    }
    offset = (offset + extra) % k;
  }
  for (auto& f : split.folds) std::sort(f.begin(), f.end());
  return split;
}

FoldSplit kfold_split(std::span<const std::uint64_t> ids, std::size_t k, std::uint64_t seed) {
  std::vector<SplitItem> items;
  items.reserve(ids.size());
  for (auto id : ids) items.push_back({id, ""});
  return kfold_split(items, k, seed);
}

void write_split_json(const fs::path& path, const FoldSplit& split) {
  json j = {{"format_version", kSplitFormatVersion}, {"seed", split.seed}, {"k", split.k()}, {"folds", split.folds}};
  write_if_changed(path, j.dump(2) + "\n");
}

FoldSplit read_split_json(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  if (!j.contains("format_version") || j["format_version"] != kSplitFormatVersion) {
    throw Error(ErrorCode::SchemaVersion, "unsupported split format version in " + path.string());
  }
  FoldSplit s;
  try {
    s.seed = j.at("seed").get<std::uint64_t>();
    s.folds = j.at("folds").get<std::vector<std::vector<std::uint64_t>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return s;
}

}  // namespace anthro
