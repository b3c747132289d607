#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anthro/bodygen.hpp"
#include "anthro/dataset.hpp"
#include "anthro/error.hpp"
#include "anthro/measure.hpp"
#include "anthro/mesh_io.hpp"
#include "anthro/metrics.hpp"
#include "anthro/sampling.hpp"
#include "anthro/scanner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitLibrary = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::string version_text() {
  std::ostringstream s;
  s << "anthro " << ANTHRO_VERSION << "\n"
    << "manifest format " << anthro::kManifestFormatVersion << "\n"
    << "measurement csv format " << anthro::kMeasurementCsvFormatVersion << "\n"
    << "scan format " << anthro::kScanFormatVersion << "\n"
    << "split format " << anthro::kSplitFormatVersion;
  return s.str();
}

void print_error(std::string_view code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << std::endl;
}

// Accepts TOML/INI files and JSON documents. JSON objects nest as
// subcommand sections: {"jobs": 4, "generate": {"count": 200}}.
class JsonOrTomlConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const std::string text((std::istreambuf_iterator<char>(input)), {});
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream again(text);
      return CLI::ConfigTOML::from_config(again);
    }
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw CLI::ConversionError("config", std::string("invalid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        flatten(value, next, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }
};

struct GlobalOptions {
  int jobs = 0;
  std::uint64_t seed = 1;
  std::string root;
};

fs::path require_root(const GlobalOptions& g) {
  if (g.root.empty()) {
    throw anthro::Error(anthro::ErrorCode::InvalidArgument,
                        "dataset root not set: pass --root or set ANTHRO_DATASET_ROOT");
  }
  return g.root;
}

void emit(const json& j) { std::cout << j.dump() << std::endl; }

void emit_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << json{{"event", "warning"}, {"message", w}}.dump() << std::endl;
}

json transform_json(const anthro::CloudTransform& t) {
  return {{"translation", {t.translation.x, t.translation.y, t.translation.z}}, {"scale", t.scale}};
}

json report_json(const anthro::EvalReport& r) {
  json mae = json::object();
  for (std::size_t m = 0; m < anthro::kMeasurementCount; ++m) {
    mae[std::string(anthro::measurement_name(static_cast<anthro::Measurement>(m)))] = r.mae[m];
  }
  json scores = json::array();
  for (const auto& s : r.scores) {
    json ap = json::object();
    for (std::size_t m = 0; m < anthro::kMeasurementCount; ++m) {
      ap[std::string(anthro::measurement_name(static_cast<anthro::Measurement>(m)))] = s.ap[m];
    }
    scores.push_back({{"threshold_mm", s.threshold_mm}, {"ap", ap}, {"map", s.map}});
  }
  json j{{"samples", r.sample_count}, {"mae_mm", mae}, {"mean_mae_mm", r.mean_mae()}, {"scores", scores}};
  if (r.fold >= 0) j["fold"] = r.fold;
  return j;
}

void write_or_print(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  anthro::write_if_changed(out, content);
}

void add_annotation_options(CLI::App* cmd, anthro::AnnotationConfig& cfg, std::string& side) {
  cmd->add_option("--scan-step", cfg.scan_step, "Slice spacing for extrema searches (m)");
  cmd->add_option("--head-tilt", cfg.head_tilt_degrees, "Head and neck plane tilt about X (degrees)");
  cmd->add_option("--waist-half-height", cfg.waist_half_height, "Waist search half-window (fraction of stature)");
  cmd->add_flag("!--raw-loop", cfg.hull_circumference, "Use raw loop length instead of the convex hull");
  cmd->add_option("--side", side, "Limb used for bilateral measurements")
      ->check(CLI::IsMember({"left", "right"}));
}

void add_scanner_options(CLI::App* cmd, anthro::ScannerConfig& cfg) {
  cmd->add_option("--scan-width", cfg.scan_width, "Depth scan width (px)");
  cmd->add_option("--scan-height", cfg.scan_height, "Depth scan height (px)");
  cmd->add_option("--fov", cfg.fov_degrees, "Vertical field of view (degrees)");
  cmd->add_option("--distance", cfg.distance, "Camera distance from the body center (m)");
  cmd->add_option("--azimuths", cfg.azimuths, "Scan viewpoints about Y (degrees)")->delimiter(',');
  cmd->add_option("--noise-sigma", cfg.noise_sigma, "Depth noise standard deviation (m)");
  cmd->add_option("--image-size", cfg.image_size, "Rendered image size (px)");
  cmd->add_option("--image-extent", cfg.image_extent, "Orthographic image extent (m)");
  cmd->add_option("--image-center-y", cfg.image_center_y, "Orthographic image center height (m)");
}

std::vector<anthro::MeasurementRow> restrict_to(const std::vector<anthro::MeasurementRow>& rows,
                                                const std::vector<std::uint64_t>& ids) {
  std::map<std::uint64_t, const anthro::MeasurementRow*> by_id;
  for (const auto& r : rows) by_id[r.id] = &r;
  std::vector<anthro::MeasurementRow> out;
  for (auto id : ids) {
    const auto it = by_id.find(id);
    if (it != by_id.end()) out.push_back(*it->second);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic body generation, annotation, scanning and evaluation"};
  app.set_version_flag("--version", version_text());
  app.config_formatter(std::make_shared<JsonOrTomlConfig>());
  app.set_config("--config", "", "TOML or JSON file with option defaults; flags override it");
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("-j,--jobs", g.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--root", g.root, "Dataset root directory")->envname("ANTHRO_DATASET_ROOT");

  // generate
  anthro::DatasetConfig gen;
  std::string gen_side = "left";
  auto* generate = app.add_subcommand("generate", "Build a synthetic dataset under the root");
  generate->add_option("-n,--count", gen.count, "Number of bodies")->check(CLI::PositiveNumber);
  generate->add_option("--female-fraction", gen.female_fraction, "Fraction of female bodies")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--segments", gen.segments, "Circumferential mesh resolution");
  generate->add_option("--cloud-points", gen.cloud_points, "Farthest-point subsample size");
  generate->add_flag("--corpus-normalization", gen.corpus_normalization,
                     "Record one cloud transform for the whole corpus");
  add_annotation_options(generate, gen.annotation, gen_side);
  add_scanner_options(generate, gen.scanner);

  // annotate
  std::string ann_mesh, ann_skeleton, ann_out, ann_gender;
  std::uint64_t ann_id = 0;
  anthro::AnnotationConfig ann_cfg;
  std::string ann_side = "left";
  auto* annotate = app.add_subcommand("annotate", "Measure one body mesh with its skeleton");
  annotate->add_option("--mesh", ann_mesh, "OBJ or PLY mesh")->required()->check(CLI::ExistingFile);
  annotate->add_option("--skeleton", ann_skeleton, "Skeleton JSON")->required()->check(CLI::ExistingFile);
  annotate->add_option("--id", ann_id, "Sample id written in the row");
  annotate->add_option("--gender", ann_gender, "Gender written in the row")->check(CLI::IsMember({"male", "female"}));
  annotate->add_option("-o,--out", ann_out, "CSV output (stdout when omitted)");
  add_annotation_options(annotate, ann_cfg, ann_side);

  // scan
  std::string scan_mesh, scan_out;
  anthro::ScannerConfig scan_cfg;
  auto* scan = app.add_subcommand("scan", "Depth-scan a mesh from each viewpoint and merge the clouds");
  scan->add_option("--mesh", scan_mesh, "OBJ or PLY mesh")->required()->check(CLI::ExistingFile);
  scan->add_option("-o,--out", scan_out, "Output directory")->required();
  add_scanner_options(scan, scan_cfg);

  // render
  std::string render_mesh, render_out, render_mode = "grayscale";
  anthro::ScannerConfig render_cfg;
  auto* render = app.add_subcommand("render", "Render an orthographic frontal image");
  render->add_option("--mesh", render_mesh, "OBJ or PLY mesh")->required()->check(CLI::ExistingFile);
  render->add_option("-o,--out", render_out, "Output PGM (grayscale) or PBM (silhouette)")->required();
  render->add_option("--mode", render_mode, "Image kind")->check(CLI::IsMember({"grayscale", "silhouette"}));
  render->add_option("--image-size", render_cfg.image_size, "Image size (px)");
  render->add_option("--image-extent", render_cfg.image_extent, "Orthographic extent (m)");
  render->add_option("--image-center-y", render_cfg.image_center_y, "Image center height (m)");

  // sample
  std::string sample_in, sample_out;
  std::size_t sample_n = 2048;
  bool sample_normalize = false;
  auto* sample = app.add_subcommand("sample", "Farthest-point subsample a PLY point cloud");
  sample->add_option("-i,--in", sample_in, "Input PLY points")->required()->check(CLI::ExistingFile);
  sample->add_option("-o,--out", sample_out, "Output PLY points")->required();
  sample->add_option("-n,--points", sample_n, "Number of points to keep")->check(CLI::PositiveNumber);
  sample->add_flag("--normalize", sample_normalize, "Write the subset mapped into [-1, 1]^3");

  // split
  std::size_t split_k = 5;
  std::string split_out, split_csv;
  auto* split = app.add_subcommand("split", "Stratified k-fold split of a dataset or measurement table");
  split->add_option("-k,--folds", split_k, "Number of folds");
  split->add_option("--csv", split_csv, "Measurement CSV to split instead of the root manifest")
      ->check(CLI::ExistingFile);
  split->add_option("-o,--out", split_out, "Split JSON output (default <root>/split.json)");

  // evaluate
  std::vector<std::string> eval_preds;
  std::string eval_truth, eval_split, eval_out, eval_format = "text";
  std::vector<double> eval_thresholds{10.0, 20.0};
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground-truth measurements");
  evaluate->add_option("--preds", eval_preds, "Prediction CSV; one per fold with --split, or one for all")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--truth", eval_truth, "Ground-truth CSV (default <root>/measurements.csv)")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--split", eval_split, "Split JSON for per-fold evaluation")->check(CLI::ExistingFile);
  evaluate->add_option("--thresholds", eval_thresholds, "AP thresholds in mm")->delimiter(',');
  evaluate->add_option("--format", eval_format, "Report format")->check(CLI::IsMember({"text", "csv", "json"}));
  evaluate->add_option("-o,--out", eval_out, "Report output (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("UsageError", e.what());
    return kExitUsage;
  }

  const auto side_of = [](const std::string& s) { return s == "right" ? anthro::Side::Right : anthro::Side::Left; };

  try {
    if (generate->parsed()) {
      gen.seed = g.seed;
      gen.jobs = g.jobs;
      gen.annotation.side = side_of(gen_side);
      const auto root = require_root(g);
      const auto manifest = anthro::build_dataset(gen, root);
      emit({{"command", "generate"},
            {"root", root.string()},
            {"samples", manifest.samples.size()},
            {"skipped", manifest.skipped}});
    } else if (annotate->parsed()) {
      ann_cfg.side = side_of(ann_side);
      const auto body = anthro::import_body(ann_mesh, ann_skeleton);
      emit_warnings(body.warnings);
      anthro::MeasurementRow row;
      row.id = ann_id;
      row.gender = ann_gender;
      row.values = anthro::measure_all(body.mesh, body.skeleton, ann_cfg);
      const bool with_gender = !ann_gender.empty();
      const std::string csv =
          anthro::measurement_csv_header(with_gender) + "\n" + anthro::format_measurement_row(row, with_gender) + "\n";
      write_or_print(ann_out, csv);
    } else if (scan->parsed()) {
      scan_cfg.validate();
      const auto mesh = anthro::read_mesh(scan_mesh);
      const auto cameras = anthro::scan_cameras(mesh, scan_cfg);
      std::vector<anthro::StructuredScan> scans;
      json files = json::array();
      for (std::size_t v = 0; v < cameras.size(); ++v) {
        auto s = anthro::depth_scan(mesh, cameras[v], g.jobs);
        s = anthro::add_noise(s, scan_cfg.noise_sigma, anthro::view_noise_seed(g.seed, 0, v));
        const auto name = "view_" + std::to_string(v) + ".scan";
        anthro::write_structured_scan(fs::path(scan_out) / name, s);
        files.push_back(name);
        scans.push_back(std::move(s));
      }
      const auto cloud = anthro::merge_scans(scans);
      anthro::write_ply_points(fs::path(scan_out) / "cloud.ply", cloud.points);
      emit({{"command", "scan"}, {"scans", files}, {"cloud", "cloud.ply"}, {"points", cloud.points.size()}});
    } else if (render->parsed()) {
      render_cfg.validate();
      const auto mesh = anthro::read_mesh(render_mesh);
      const auto cam = anthro::image_camera(mesh, render_cfg);
      if (render_mode == "silhouette") {
        anthro::write_pbm(render_out, anthro::render_silhouette(mesh, cam, g.jobs));
      } else {
        anthro::write_pgm(render_out, anthro::render_grayscale(mesh, cam, g.jobs));
      }
      emit({{"command", "render"}, {"mode", render_mode}, {"out", render_out}});
    } else if (sample->parsed()) {
      anthro::PointCloud cloud{anthro::read_ply_points(sample_in)};
      const auto idx = anthro::farthest_point_sample(cloud, sample_n, g.seed, g.jobs);
      auto out = anthro::subset(cloud, idx);
      json result{{"command", "sample"}, {"points", out.points.size()}};
      if (sample_normalize) {
        auto n = anthro::normalize_cloud(out);
        out = std::move(n.cloud);
        result["transform"] = transform_json(n.transform);
      }
      anthro::write_ply_points(sample_out, out.points);
      emit(result);
    } else if (split->parsed()) {
      std::vector<anthro::SplitItem> items;
      fs::path out = split_out;
      if (!split_csv.empty()) {
        for (const auto& r : anthro::read_measurement_csv(split_csv)) items.push_back({r.id, r.gender});
      } else {
        const auto root = require_root(g);
        for (const auto& s : anthro::load_manifest(root).samples) {
          items.push_back({s.id, std::string(anthro::gender_name(s.gender))});
        }
        if (out.empty()) out = root / "split.json";
      }
      if (out.empty()) throw anthro::Error(anthro::ErrorCode::InvalidArgument, "split: --out is required with --csv");
      const auto folds = anthro::kfold_split(items, split_k, g.seed);
      anthro::write_split_json(out, folds);
      json sizes = json::array();
      for (const auto& f : folds.folds) sizes.push_back(f.size());
      emit({{"command", "split"}, {"out", out.string()}, {"k", folds.k()}, {"fold_sizes", sizes}});
    } else if (evaluate->parsed()) {
      fs::path truth_path = eval_truth;
      if (truth_path.empty()) truth_path = require_root(g) / "measurements.csv";
      const auto truth = anthro::read_measurement_csv(truth_path);
      anthro::EvalReport report;
      std::vector<anthro::EvalReport> fold_reports;
      if (eval_split.empty()) {
        if (eval_preds.size() != 1) {
          throw anthro::Error(anthro::ErrorCode::InvalidArgument, "evaluate: pass exactly one --preds without --split");
        }
        report = anthro::evaluate(anthro::read_measurement_csv(eval_preds[0]), truth, eval_thresholds);
      } else {
        const auto folds = anthro::read_split_json(eval_split);
        std::vector<std::vector<anthro::MeasurementRow>> preds;
        if (eval_preds.size() == 1) {
          const auto all = anthro::read_measurement_csv(eval_preds[0]);
          for (const auto& f : folds.folds) preds.push_back(restrict_to(all, f));
        } else {
          for (const auto& p : eval_preds) preds.push_back(anthro::read_measurement_csv(p));
        }
        const auto ev = anthro::evaluate_folds(folds, truth, preds, eval_thresholds);
        report = ev.aggregate;
        fold_reports = ev.folds;
      }
      std::string content;
      if (eval_format == "csv") {
        content = anthro::format_report_csv(report);
      } else if (eval_format == "json") {
        json j = report_json(report);
        if (!fold_reports.empty()) {
          j["folds"] = json::array();
          for (const auto& f : fold_reports) j["folds"].push_back(report_json(f));
        }
        j["published_reference_mae_mm"] = {{"grayscale", anthro::kPublishedGrayscaleMaeMm},
                                           {"point_cloud", anthro::kPublishedPointCloudMaeMm},
                                           {"note", "full-scale training; not reproducible at desk scale"}};
        content = j.dump(2);
      } else {
        for (const auto& f : fold_reports) {
          char line[96];
          std::snprintf(line, sizeof line, "Fold %d: %zu samples, mean MAE %.3f mm\n", f.fold, f.sample_count,
                        f.mean_mae());
          content += line;
        }
        if (!fold_reports.empty()) content += "\n";
        content += anthro::format_report_text(report);
      }
      write_or_print(eval_out, content);
    }
  } catch (const anthro::Error& e) {
    print_error(anthro::to_string(e.code()), e.what());
    return kExitLibrary;
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
    return kExitInternal;
  }
  return 0;
}
