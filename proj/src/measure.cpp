#include "anthro/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "anthro/error.hpp"
#include "anthro/hull.hpp"

namespace anthro {
namespace {

constexpr std::array<std::string_view, kMeasurementCount> kNames = {
    "head_circumference", "neck_circumference",  "shoulder_to_shoulder", "arm_span",
    "shoulder_to_wrist",  "torso_length",        "bicep_circumference",  "wrist_circumference",
    "chest_circumference", "waist_circumference", "pelvis_circumference", "leg_length",
    "inner_leg_length",   "thigh_circumference", "knee_circumference",   "calf_length"};

constexpr std::array<std::string_view, kMeasurementCount> kLabels = {
    "Head circumference",  "Neck circumference",  "Shoulder-to-shoulder", "Arm span",
    "Shoulder-to-wrist",   "Torso length",        "Bicep circumference",  "Wrist circumference",
    "Chest circumference", "Waist circumference", "Pelvis circumference", "Leg length",
    "Inner leg length",    "Thigh circumference", "Knee circumference",   "Calf length"};

constexpr double kSelectionTolerance = 0.001;  // meters
constexpr double kRefineTolerance = 1e-10;     // meters
constexpr double kMaxAxillaDrop = 0.3;         // fraction of stature

constexpr Vec3 kUp{0.0, 1.0, 0.0};
constexpr Vec3 kRight{1.0, 0.0, 0.0};

struct Limb {
  Joint shoulder, elbow, wrist, hip, knee, ankle;
};

Limb limb(Side side) {
  if (side == Side::Left) {
    return {Joint::LeftShoulder, Joint::LeftElbow, Joint::LeftWrist,
            Joint::LeftHip,      Joint::LeftKnee,  Joint::LeftAnkle};
  }
  return {Joint::RightShoulder, Joint::RightElbow, Joint::RightWrist,
          Joint::RightHip,      Joint::RightKnee,  Joint::RightAnkle};
}

double point_line_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len = norm(d);
  if (len == 0.0) return distance(p, a);
  return norm(cross(p - a, d)) / len;
}

const CrossSection& select_by(const std::vector<CrossSection>& loops,
                              const std::function<double(const Vec3&)>& dist) {
  if (loops.empty()) throw Error(ErrorCode::NoSection, "plane does not intersect the mesh");
  std::vector<std::pair<double, std::size_t>> scored;
  std::vector<Vec3> centroids;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    centroids.push_back(loops[i].centroid());
    scored.emplace_back(dist(centroids.back()), i);
  }
  const double best = std::min_element(scored.begin(), scored.end())->first;
  std::vector<std::size_t> near;
  for (const auto& [d, i] : scored) {
    if (d <= best + kSelectionTolerance) near.push_back(i);
  }
  std::sort(near.begin(), near.end(), [&](std::size_t l, std::size_t r) {
    if (centroids[l].y != centroids[r].y) return centroids[l].y < centroids[r].y;
    return centroids[l].x < centroids[r].x;
  });
  if (near.size() > 1) {
    const Vec3& a = centroids[near[0]];
    const Vec3& b = centroids[near[1]];
    if (std::abs(a.y - b.y) <= kSelectionTolerance && std::abs(a.x - b.x) <= kSelectionTolerance) {
      throw Error(ErrorCode::AmbiguousSection,
                  "two loops are equally close to the anchor and cannot be told apart");
    }
  }
  return loops[near.front()];
}

double circumference(const CrossSection& cs, const AnnotationConfig& cfg) {
  return cfg.hull_circumference ? convex_hull_perimeter(cs) : loop_perimeter(cs);
}

Plane level_plane(double y) { return Plane::make(kUp, y); }

Vec3 tilted_normal(const AnnotationConfig& cfg) {
  const double t = cfg.head_tilt_degrees * std::numbers::pi / 180.0;
  return {0.0, std::cos(t), std::sin(t)};
}

std::vector<double> scan_levels(double lo, double hi, double step) {
  std::vector<double> levels;
  for (std::size_t k = 0;; ++k) {
    const double y = lo + static_cast<double>(k) * step;
    if (y >= hi - 1e-12) break;
    levels.push_back(y);
  }
  levels.push_back(hi);
  return levels;
}

// Perimeter of the torso loop at height y, if the level cuts the mesh.
std::optional<double> torso_perimeter(const BodyFrame& body, const AnnotationConfig& cfg, double y) {
  const auto loops = body.slicer().slice(level_plane(y));
  if (loops.empty()) return std::nullopt;
  const auto& sk = body.skeleton();
  return circumference(select_loop(loops, sk[Joint::Pelvis], sk[Joint::Neck]), cfg);
}

// Extremum of the torso signature over [lo, hi]: coarse scan at cfg step,
// then golden-section refinement around the best level.
double torso_extremum(const BodyFrame& body, const AnnotationConfig& cfg, double lo, double hi,
                      bool maximize) {
  const double sign = maximize ? 1.0 : -1.0;
  std::optional<double> best_y;
  double best = -std::numeric_limits<double>::infinity();
  for (double y : scan_levels(lo, hi, cfg.scan_step)) {
    if (auto p = torso_perimeter(body, cfg, y); p && sign * *p > best) {
      best = sign * *p;
      best_y = y;
    }
  }
  if (!best_y) throw Error(ErrorCode::EmptyRegion, "no level of the region intersects the torso");

  auto score = [&](double y) {
    auto p = torso_perimeter(body, cfg, y);
    return p ? sign * *p : -std::numeric_limits<double>::infinity();
  };
  double a = std::max(lo, *best_y - cfg.scan_step);
  double b = std::min(hi, *best_y + cfg.scan_step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = score(c);
  double fd = score(d);
  while (b - a > kRefineTolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = score(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = score(d);
    }
  }
  const double refined = score(0.5 * (a + b));
  return sign * std::max(best, refined);
}

std::size_t loops_at(const BodyFrame& body, double y) {
  return body.slicer().count_loops(level_plane(y));
}

// Narrows [inside, outside] to the boundary where `holds` switches, keeping
// `inside` on the side where it is true.
double bisect(double inside, double outside, const std::function<bool(double)>& holds) {
  while (std::abs(outside - inside) > kRefineTolerance) {
    const double mid = 0.5 * (inside + outside);
    (holds(mid) ? inside : outside) = mid;
  }
  return inside;
}

}  // namespace

std::string_view measurement_name(Measurement m) { return kNames[static_cast<std::size_t>(m)]; }
std::string_view measurement_label(Measurement m) { return kLabels[static_cast<std::size_t>(m)]; }

std::string_view MeasurementSet::sanity_violation() const {
  for (double v : mm) {
    if (!(v > 0.0)) return "all measurements must be positive";
  }
  if ((*this)[Measurement::ArmSpan] < (*this)[Measurement::ShoulderToShoulder]) {
    return "arm span shorter than shoulder-to-shoulder";
  }
  if ((*this)[Measurement::LegLength] < (*this)[Measurement::CalfLength]) {
    return "leg length shorter than calf length";
  }
  if ((*this)[Measurement::ChestCircumference] < (*this)[Measurement::WristCircumference]) {
    return "chest circumference smaller than wrist circumference";
  }
  return {};
}

void AnnotationConfig::validate() const {
  if (!(scan_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "scan_step must be positive");
  if (!(head_tilt_degrees >= 0.0 && head_tilt_degrees <= 45.0)) {
    throw Error(ErrorCode::InvalidArgument, "head_tilt_degrees must be in [0, 45]");
  }
  if (!(waist_half_height > 0.0 && waist_half_height <= 0.15)) {
    throw Error(ErrorCode::InvalidArgument, "waist_half_height must be in (0, 0.15]");
  }
}

namespace {

std::pair<double, Vec3> canonical_pose(const Skeleton& sk) {
  const Vec3 across = sk[Joint::LeftShoulder] - sk[Joint::RightShoulder];
  const double yaw = std::atan2(across.z, across.x);
  const Vec3 pelvis = transform_point(sk[Joint::Pelvis], 1.0, yaw, Vec3{});
  return {yaw, Vec3{-pelvis.x, 0.0, -pelvis.z}};
}

}  // namespace

BodyFrame::BodyFrame(const TriangleMesh& mesh, const Skeleton& skeleton)
    : mesh_([&] {
        auto [yaw, shift] = canonical_pose(skeleton);
        return transformed(mesh, 1.0, yaw, shift);
      }()),
      skeleton_([&] {
        auto [yaw, shift] = canonical_pose(skeleton);
        return transformed(skeleton, 1.0, yaw, shift);
      }()),
      slicer_(mesh_) {
  std::tie(min_y_, max_y_) = axis_extent(mesh_, Axis::Y);
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + d * t);
}

const CrossSection& select_loop(const std::vector<CrossSection>& loops, const Vec3& a, const Vec3& b) {
  return select_by(loops, [&](const Vec3& c) { return point_segment_distance(c, a, b); });
}

double joint_distance_mm(const Skeleton& skeleton, Joint a, Joint b) {
  return 1000.0 * distance(skeleton[a], skeleton[b]);
}

double arm_span_mm(const TriangleMesh& mesh) {
  const auto [lo, hi] = axis_extent(mesh, Axis::X);
  return 1000.0 * (hi - lo);
}

double head_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const auto& sk = body.skeleton();
  const Vec3 head = sk[Joint::Head];
  const Vec3 center{head.x, 0.5 * (head.y + body.top()), head.z};
  const auto loops = body.slicer().slice(Plane::through(center, tilted_normal(cfg)));
  const auto& loop = select_by(loops, [&](const Vec3& c) {
    return point_line_distance(c, sk[Joint::Neck], sk[Joint::Head]);
  });
  return 1000.0 * circumference(loop, cfg);
}

double neck_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const auto& sk = body.skeleton();
  const Vec3 center = sk[Joint::Neck] + (sk[Joint::Head] - sk[Joint::Neck]) / 3.0;
  const auto loops = body.slicer().slice(Plane::through(center, tilted_normal(cfg)));
  const auto& loop = select_by(loops, [&](const Vec3& c) {
    return point_line_distance(c, sk[Joint::Neck], sk[Joint::Head]);
  });
  return 1000.0 * circumference(loop, cfg);
}

double bicep_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const auto& sk = body.skeleton();
  const Limb l = limb(cfg.side);
  const double x = 0.5 * (sk[l.shoulder].x + sk[l.elbow].x);
  const auto loops = body.slicer().slice(Plane::make(kRight, x));
  return 1000.0 * circumference(select_loop(loops, sk[l.shoulder], sk[l.elbow]), cfg);
}

double wrist_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const auto& sk = body.skeleton();
  const Limb l = limb(cfg.side);
  const auto loops = body.slicer().slice(Plane::make(kRight, sk[l.wrist].x));
  return 1000.0 * circumference(select_loop(loops, sk[l.elbow], sk[l.wrist]), cfg);
}

double thigh_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const auto& sk = body.skeleton();
  const Limb l = limb(cfg.side);
  const double y = 0.5 * (sk[l.hip].y + sk[l.knee].y);
  const auto loops = body.slicer().slice(level_plane(y));
  return 1000.0 * circumference(select_loop(loops, sk[l.hip], sk[l.knee]), cfg);
}

double knee_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const auto& sk = body.skeleton();
  const Limb l = limb(cfg.side);
  const auto loops = body.slicer().slice(level_plane(sk[l.knee].y));
  return 1000.0 * circumference(select_loop(loops, sk[l.hip], sk[l.knee]), cfg);
}

double detect_axilla(const BodyFrame& body, const AnnotationConfig& cfg) {
  const double top = body.skeleton()[limb(cfg.side).shoulder].y;
  const double floor = top - kMaxAxillaDrop * body.stature();
  double previous = top;
  for (std::size_t k = 0;; ++k) {
    const double y = top - static_cast<double>(k) * cfg.scan_step;
    if (y < floor) break;
    if (loops_at(body, y) == 1) {
      if (k == 0) return y;
      return bisect(y, previous, [&](double level) { return loops_at(body, level) == 1; });
    }
    previous = y;
  }
  throw Error(ErrorCode::AxillaNotFound,
              "no single-loop level within 0.3 x stature below the shoulder joint");
}

double detect_crotch(const BodyFrame& body, const AnnotationConfig& cfg) {
  const auto& sk = body.skeleton();
  const double start = sk[limb(cfg.side).ankle].y;
  const double stop = sk[Joint::Pelvis].y;
  std::size_t previous_count = 0;
  double previous = start;
  for (std::size_t k = 0;; ++k) {
    const double y = start + static_cast<double>(k) * cfg.scan_step;
    if (y > stop) break;
    const auto count = loops_at(body, y);
    if (count == 1 && previous_count == 2) {
      return bisect(y, previous, [&](double level) { return loops_at(body, level) == 1; });
    }
    previous_count = count;
    previous = y;
  }
  throw Error(ErrorCode::CrotchNotFound, "legs never merge into a single loop below the pelvis");
}

double inner_leg_length_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  return 1000.0 * (detect_crotch(body, cfg) - body.skeleton()[limb(cfg.side).ankle].y);
}

double chest_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const double axilla = detect_axilla(body, cfg);
  const double chest = body.skeleton()[Joint::Chest].y;
  return 1000.0 * torso_extremum(body, cfg, std::min(axilla, chest), std::max(axilla, chest), true);
}

double waist_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const double mid = body.skeleton()[Joint::MidSpine].y;
  const double half = cfg.waist_half_height * body.stature();
  return 1000.0 * torso_extremum(body, cfg, mid - half, mid + half, false);
}

double pelvis_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg) {
  const double pelvis = body.skeleton()[Joint::Pelvis].y;
  const double hip = body.skeleton()[limb(cfg.side).hip].y;
  return 1000.0 * torso_extremum(body, cfg, std::min(pelvis, hip), std::max(pelvis, hip), true);
}

MeasurementSet measure_all(const TriangleMesh& mesh, const Skeleton& skeleton,
                           const AnnotationConfig& cfg) {
  cfg.validate();
  const BodyFrame body(mesh, skeleton);
  const auto& sk = body.skeleton();
  const Limb l = limb(cfg.side);
  MeasurementSet out;
  auto run = [&](Measurement m, const std::function<double()>& fn) {
    try {
      out[m] = fn();
    } catch (const Error& e) {
      throw Error(e.code(), std::string(measurement_name(m)) + ": " + e.what());
    }
  };
  run(Measurement::HeadCircumference, [&] { return head_circumference_mm(body, cfg); });
  run(Measurement::NeckCircumference, [&] { return neck_circumference_mm(body, cfg); });
  run(Measurement::ShoulderToShoulder,
      [&] { return joint_distance_mm(sk, Joint::LeftShoulder, Joint::RightShoulder); });
  run(Measurement::ArmSpan, [&] { return arm_span_mm(body.mesh()); });
  run(Measurement::ShoulderToWrist, [&] { return joint_distance_mm(sk, l.shoulder, l.wrist); });
  run(Measurement::TorsoLength, [&] { return joint_distance_mm(sk, Joint::Neck, Joint::Pelvis); });
  run(Measurement::BicepCircumference, [&] { return bicep_circumference_mm(body, cfg); });
  run(Measurement::WristCircumference, [&] { return wrist_circumference_mm(body, cfg); });
  run(Measurement::ChestCircumference, [&] { return chest_circumference_mm(body, cfg); });
  run(Measurement::WaistCircumference, [&] { return waist_circumference_mm(body, cfg); });
  run(Measurement::PelvisCircumference, [&] { return pelvis_circumference_mm(body, cfg); });
  run(Measurement::LegLength, [&] { return joint_distance_mm(sk, Joint::Pelvis, l.ankle); });
  run(Measurement::InnerLegLength, [&] { return inner_leg_length_mm(body, cfg); });
  run(Measurement::ThighCircumference, [&] { return thigh_circumference_mm(body, cfg); });
  run(Measurement::KneeCircumference, [&] { return knee_circumference_mm(body, cfg); });
  run(Measurement::CalfLength, [&] { return joint_distance_mm(sk, l.knee, l.ankle); });
  return out;
}

MeasurementSet measure_all(const BodySample& body, const AnnotationConfig& cfg) {
  return measure_all(body.mesh, body.skeleton, cfg);
}

}  // namespace anthro
