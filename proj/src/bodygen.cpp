#include "anthro/bodygen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "anthro/error.hpp"
#include "anthro/mesh_io.hpp"

namespace anthro {
namespace {

constexpr double kPi = std::numbers::pi;

// Proportions as fractions of stature.
constexpr double kAnkleY = 0.045;
constexpr double kKneeY = 0.285;
constexpr double kCrotchY = 0.47;
constexpr double kHipAboveCrotch = 0.035;
constexpr double kPelvisAboveCrotch = 0.07;
constexpr double kPelvisMaxAboveCrotch = 0.05;
constexpr double kShoulderY = 0.815;
constexpr double kNeckY = 0.83;
constexpr double kTorsoTopAboveShoulder = 0.03;
constexpr double kNeckBaseAboveShoulder = 0.005;
constexpr double kHeadHalfHeight = 0.0575;
constexpr double kShoulderX = 0.095;
constexpr double kUpperArm = 0.165;
constexpr double kForearm = 0.145;
constexpr double kHand = 0.095;
constexpr double kRingSpacing = 0.01;
constexpr double kTorsoExponent = 2.4;

struct TorsoShape {
  double chest_a, chest_b;
  double waist_a, waist_b;
  double pelvis_a, pelvis_b;
  double shoulder_a, shoulder_b;
};

constexpr TorsoShape kMaleTorso{0.108, 0.074, 0.090, 0.066, 0.108, 0.074, 0.115, 0.055};
constexpr TorsoShape kFemaleTorso{0.100, 0.080, 0.080, 0.060, 0.115, 0.078, 0.102, 0.052};

double ease(double t) { return 0.5 * (1.0 - std::cos(kPi * std::clamp(t, 0.0, 1.0))); }

// Sorted, de-duplicated positions: a uniform grid over [lo, hi] plus stations.
std::vector<double> ring_positions(double lo, double hi, double spacing,
                                   const std::vector<double>& stations) {
  std::vector<double> pos = stations;
  const int n = static_cast<int>(std::ceil((hi - lo) / spacing));
  for (int i = 0; i <= n; ++i) pos.push_back(std::min(hi, lo + i * spacing));
  std::sort(pos.begin(), pos.end());
  std::vector<double> out;
  for (double p : pos) {
    if (p < lo - 1e-12 || p > hi + 1e-12) continue;
    if (!out.empty() && p - out.back() < 0.1 * spacing) {
      // keep exact stations, drop the grid point next to them
      if (std::find(stations.begin(), stations.end(), p) != stations.end()) out.back() = p;
      continue;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Vec3> superellipse_ring(const Vec3& center, Axis axis, double a, double b,
                                    double exponent, int segments) {
  std::vector<Vec3> ring;
  ring.reserve(segments);
  for (int k = 0; k < segments; ++k) {
    const double theta = 2.0 * kPi * k / segments;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double u = a * std::copysign(std::pow(std::abs(c), 2.0 / exponent), c);
    const double v = b * std::copysign(std::pow(std::abs(s), 2.0 / exponent), s);
    switch (axis) {
      case Axis::Y: ring.push_back(center + Vec3{u, 0.0, v}); break;  // a along X, b along Z
      case Axis::X: ring.push_back(center + Vec3{0.0, u, v}); break;  // a along Y, b along Z
      case Axis::Z: ring.push_back(center + Vec3{u, v, 0.0}); break;
    }
  }
  return ring;
}

double truncated_normal(std::mt19937_64& rng, double mean, double sd, double lo, double hi) {
  std::normal_distribution<double> dist(mean, sd);
  for (;;) {
    const double v = dist(rng);
    if (v >= lo && v <= hi) return v;
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + index + 0x632BE59BD9B4E019ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::string_view gender_name(Gender g) { return g == Gender::Male ? "male" : "female"; }

Gender gender_from_name(std::string_view name) {
  if (name == "male") return Gender::Male;
  if (name == "female") return Gender::Female;
  throw Error(ErrorCode::InvalidParams, "unknown gender '" + std::string(name) + "'");
}

BodyParams BodyParams::preset(Gender g) {
  BodyParams p;
  p.gender = g;
  p.stature = g == Gender::Male ? 1.78 : 1.65;
  return p;
}

void BodyParams::validate() const {
  auto fail = [](const std::string& field, double value) {
    throw Error(ErrorCode::InvalidParams, field + " out of range: " + std::to_string(value));
  };
  if (!(stature >= 1.2 && stature <= 2.2)) fail("stature", stature);
  const std::pair<const char*, double> factors[] = {
      {"head_girth", head_girth},   {"neck_girth", neck_girth},   {"chest_girth", chest_girth},
      {"waist_girth", waist_girth}, {"pelvis_girth", pelvis_girth}, {"arm_girth", arm_girth},
      {"leg_girth", leg_girth},     {"arm_length", arm_length},   {"leg_length", leg_length}};
  for (const auto& [name, value] : factors) {
    if (!(value >= 0.6 && value <= 1.6)) fail(name, value);
  }
  if (segments < 8 || segments % 4 != 0) fail("segments", segments);
}

double Profile::at(double pos) const {
  if (pos <= stations.front().first) return stations.front().second;
  if (pos >= stations.back().first) return stations.back().second;
  auto it = std::upper_bound(stations.begin(), stations.end(), pos,
                             [](double p, const auto& s) { return p < s.first; });
  const auto& [p1, v1] = *it;
  const auto& [p0, v0] = *(it - 1);
  return v0 + (v1 - v0) * ease((pos - p0) / (p1 - p0));
}

double Profile::lipschitz() const {
  double bound = 0.0;
  for (std::size_t i = 1; i < stations.size(); ++i) {
    const double dp = stations[i].first - stations[i - 1].first;
    bound = std::max(bound, 0.5 * kPi * std::abs(stations[i].second - stations[i - 1].second) / dp);
  }
  return bound;
}

BodySample generate_body(const BodyParams& params) {
  params.validate();
  const double S = params.stature;
  const int n = params.segments;
  const double leg_scale = 1.0 + 0.1 * (params.leg_length - 1.0);
  const double arm_scale = 1.0 + 0.25 * (params.arm_length - 1.0);
  const TorsoShape& shape = params.gender == Gender::Male ? kMaleTorso : kFemaleTorso;

  // Vertical layout.
  const double y_ankle = kAnkleY * S;
  const double y_knee = kKneeY * leg_scale * S;
  const double y_crotch = kCrotchY * leg_scale * S;
  const double y_hip = y_crotch + kHipAboveCrotch * S;
  const double y_pelvis = y_crotch + kPelvisAboveCrotch * S;
  const double y_pelvis_max = y_crotch + kPelvisMaxAboveCrotch * S;
  const double y_shoulder = kShoulderY * S;
  const double y_mid = y_pelvis + 0.25 * (y_shoulder - y_pelvis);
  const double y_chest = y_pelvis + 0.65 * (y_shoulder - y_pelvis);
  const double y_chest_max = y_chest + 0.1 * (y_shoulder - y_chest);
  const double y_neck = kNeckY * S;
  const double head_b = kHeadHalfHeight * S;
  const double y_head = S - head_b;

  // Horizontal layout.
  const double x_shoulder = kShoulderX * S;
  const double x_elbow = x_shoulder + kUpperArm * arm_scale * S;
  const double x_wrist = x_elbow + kForearm * arm_scale * S;
  const double x_tip = x_wrist + kHand * S;
  const double x_bicep = 0.5 * (x_shoulder + x_elbow);

  // Limb radii.
  const double r_bicep = 0.027 * params.arm_girth * S;
  const double r_elbow = 0.82 * r_bicep;
  const double r_wrist = 0.0155 * params.arm_girth * S;
  const double hand_half_width = 0.0265 * params.arm_girth * S;
  const double r_thigh = 0.0515 * params.leg_girth * S;
  const double r_leg_top = 1.04 * r_thigh;
  const double r_knee = 0.0356 * params.leg_girth * S;
  const double r_calf = 0.034 * params.leg_girth * S;
  const double r_ankle = 0.0215 * params.leg_girth * S;
  const double r_foot = 1.25 * r_ankle;
  const double r_neck = 0.0355 * params.neck_girth * S;
  const double x_leg = std::max(0.06 * S, r_leg_top + 0.006 * S);
  const double y_thigh = 0.5 * (y_hip + y_knee);
  const double zone = 0.01 * S;  // half-height of constant-radius measuring zones

  BodySample body;
  body.params = params;
  TriangleMesh& mesh = body.mesh;

  // Torso: superellipse sections lofted along Y.
  const double pelvis_a = shape.pelvis_a * params.pelvis_girth * S;
  const double pelvis_b = shape.pelvis_b * params.pelvis_girth * S;
  const double chest_a = shape.chest_a * params.chest_girth * S;
  const double chest_b = shape.chest_b * params.chest_girth * S;
  const double waist_a =
      std::min(shape.waist_a * params.waist_girth * S, 0.95 * std::min(pelvis_a, chest_a));
  const double waist_b =
      std::min(shape.waist_b * params.waist_girth * S, 0.95 * std::min(pelvis_b, chest_b));
  const double shoulder_a = shape.shoulder_a * params.chest_girth * S;
  const double shoulder_b = shape.shoulder_b * params.chest_girth * S;
  const double y_torso_top = y_shoulder + kTorsoTopAboveShoulder * S;

  std::vector<TorsoStation> stations = {
      {y_crotch, 0.92 * pelvis_a, 0.9 * pelvis_b},
      {y_pelvis_max, pelvis_a, pelvis_b},
      {y_mid, waist_a, waist_b},
      {y_chest_max, chest_a, chest_b},
      {y_shoulder, shoulder_a, shoulder_b},
      {y_shoulder + 0.012 * S, 0.8 * shoulder_a, 0.85 * shoulder_b},
      {y_shoulder + 0.022 * S, 0.5 * shoulder_a, 0.75 * shoulder_b},
  };
  Profile torso_a, torso_b;
  std::vector<double> torso_station_y;
  for (const auto& st : stations) {
    torso_a.stations.emplace_back(st.y, st.half_width);
    torso_b.stations.emplace_back(st.y, st.half_depth);
    torso_station_y.push_back(st.y);
  }
  {
    std::vector<std::vector<Vec3>> rings;
    for (double y : ring_positions(y_crotch, stations.back().y, kRingSpacing * S, torso_station_y)) {
      rings.push_back(superellipse_ring({0.0, y, 0.0}, Axis::Y, torso_a.at(y), torso_b.at(y),
                                        kTorsoExponent, n));
    }
    append_mesh(mesh, loft_rings(rings, {0.0, y_crotch, 0.0}, {0.0, y_torso_top, 0.0}));
  }

  // Legs: vertical round tubes from the sole (y = 0) to the crotch.
  Profile leg_r;
  leg_r.stations = {{0.0, r_foot},
                    {y_ankle, r_ankle},
                    {y_ankle + 0.55 * (y_knee - y_ankle), r_calf},
                    {y_knee - zone, r_knee},
                    {y_knee + zone, r_knee},
                    {y_thigh - zone, r_thigh},
                    {y_thigh + zone, r_thigh},
                    {y_crotch, r_leg_top}};
  std::vector<double> leg_station_y;
  for (const auto& s : leg_r.stations) leg_station_y.push_back(s.first);
  leg_station_y.push_back(y_knee);
  leg_station_y.push_back(y_thigh);
  const auto leg_levels = ring_positions(0.0, y_crotch, kRingSpacing * S, leg_station_y);
  for (double side : {1.0, -1.0}) {
    std::vector<std::vector<Vec3>> rings;
    const Vec3 axis{side * x_leg, 0.0, 0.0};
    for (double y : leg_levels) {
      const double r = leg_r.at(y);
      rings.push_back(superellipse_ring(axis + Vec3{0.0, y, 0.0}, Axis::Y, r, r, 2.0, n));
    }
    append_mesh(mesh, loft_rings(rings, axis, axis + Vec3{0.0, y_crotch, 0.0}));
  }

  // Arms: horizontal tubes along X at shoulder height, hand tapering to a tip.
  const double x_arm_start = x_shoulder - 0.03 * S;
  const double x_hand = x_wrist + zone;
  Profile arm_r;
  arm_r.stations = {{x_arm_start, r_bicep},
                    {x_bicep + 0.03 * S, r_bicep},
                    {x_elbow, r_elbow},
                    {x_wrist - zone, r_wrist},
                    {x_hand, r_wrist}};
  std::vector<double> arm_station_x;
  for (const auto& s : arm_r.stations) arm_station_x.push_back(s.first);
  arm_station_x.push_back(x_bicep);
  arm_station_x.push_back(x_wrist);
  auto arm_levels = ring_positions(x_arm_start, x_hand, kRingSpacing * S, arm_station_x);
  const int hand_rings = 12;
  for (int i = 1; i <= hand_rings; ++i) {
    arm_levels.push_back(x_hand + (x_tip - x_hand) * (i / (hand_rings + 1.0)));
  }
  for (double side : {1.0, -1.0}) {
    std::vector<std::vector<Vec3>> rings;
    for (double x : arm_levels) {
      double ry = 0.0, rz = 0.0;
      if (x <= x_hand) {
        ry = rz = arm_r.at(x);
      } else {
        const double u = (x - x_hand) / (x_tip - x_hand);
        const double taper = std::sqrt(1.0 - std::pow(u, 4.0));
        const double e = ease(u / 0.3);
        ry = r_wrist * (1.0 - 0.3 * e) * taper;
        rz = (r_wrist + (hand_half_width - r_wrist) * e) * taper;
      }
      rings.push_back(superellipse_ring({side * x, y_shoulder, 0.0}, Axis::X, ry, rz, 2.0, n));
    }
    append_mesh(mesh, loft_rings(rings, {side * x_arm_start, y_shoulder, 0.0},
                                 {side * x_tip, y_shoulder, 0.0}));
  }

  // Neck cylinder from just above the shoulder line to the head center.
  {
    const double y0 = y_shoulder + kNeckBaseAboveShoulder * S;
    std::vector<std::vector<Vec3>> rings = {
        superellipse_ring({0.0, y0, 0.0}, Axis::Y, r_neck, r_neck, 2.0, n),
        superellipse_ring({0.0, y_head, 0.0}, Axis::Y, r_neck, r_neck, 2.0, n)};
    append_mesh(mesh, loft_rings(rings, {0.0, y0, 0.0}, {0.0, y_head, 0.0}));
  }

  // Head ellipsoid; its top pole sets the stature.
  const Vec3 head_center{0.0, y_head, 0.0};
  const Vec3 head_axes{0.054 * params.head_girth * S, head_b, 0.066 * params.head_girth * S};
  append_mesh(mesh, make_ellipsoid(head_center, head_axes, n, 32));

  Skeleton& sk = body.skeleton;
  sk[Joint::Head] = head_center;
  sk[Joint::Neck] = {0.0, y_neck, 0.0};
  sk[Joint::LeftShoulder] = {x_shoulder, y_shoulder, 0.0};
  sk[Joint::RightShoulder] = {-x_shoulder, y_shoulder, 0.0};
  sk[Joint::LeftElbow] = {x_elbow, y_shoulder, 0.0};
  sk[Joint::RightElbow] = {-x_elbow, y_shoulder, 0.0};
  sk[Joint::LeftWrist] = {x_wrist, y_shoulder, 0.0};
  sk[Joint::RightWrist] = {-x_wrist, y_shoulder, 0.0};
  sk[Joint::Chest] = {0.0, y_chest, 0.0};
  sk[Joint::MidSpine] = {0.0, y_mid, 0.0};
  sk[Joint::Pelvis] = {0.0, y_pelvis, 0.0};
  sk[Joint::LeftHip] = {x_leg, y_hip, 0.0};
  sk[Joint::RightHip] = {-x_leg, y_hip, 0.0};
  sk[Joint::LeftKnee] = {x_leg, y_knee, 0.0};
  sk[Joint::RightKnee] = {-x_leg, y_knee, 0.0};
  sk[Joint::LeftAnkle] = {x_leg, y_ankle, 0.0};
  sk[Joint::RightAnkle] = {-x_leg, y_ankle, 0.0};

  AnalyticReference ref;
  ref.bicep_radius = r_bicep;
  ref.wrist_radius = r_wrist;
  ref.thigh_radius = r_thigh;
  ref.knee_radius = r_knee;
  ref.neck_radius = r_neck;
  ref.head_center = head_center;
  ref.head_semi_axes = head_axes;
  ref.axilla_y = y_shoulder - r_bicep;
  ref.crotch_y = y_crotch;
  ref.arm_span = 2.0 * x_tip;
  ref.torso_exponent = kTorsoExponent;
  ref.torso_stations = stations;
  ref.torso_lipschitz = std::max(torso_a.lipschitz(), torso_b.lipschitz());
  ref.segments = n;
  body.reference = ref;
  return body;
}

BodyParams sample_params(Gender gender, std::uint64_t master_seed, std::size_t index, int segments) {
  std::mt19937_64 rng(mix_seed(master_seed, index));
  BodyParams p = BodyParams::preset(gender);
  p.seed = mix_seed(master_seed, index);
  p.segments = segments;
  p.stature = gender == Gender::Male ? truncated_normal(rng, 1.78, 0.07, 1.2, 2.2)
                                     : truncated_normal(rng, 1.65, 0.065, 1.2, 2.2);
  for (double* girth : {&p.head_girth, &p.neck_girth, &p.chest_girth, &p.waist_girth,
                        &p.pelvis_girth, &p.arm_girth, &p.leg_girth}) {
    *girth = truncated_normal(rng, 1.0, 0.08, 0.6, 1.6);
  }
  p.arm_length = truncated_normal(rng, 1.0, 0.05, 0.6, 1.6);
  p.leg_length = truncated_normal(rng, 1.0, 0.05, 0.6, 1.6);
  return p;
}

std::vector<BodyParams> sample_population(const PopulationConfig& cfg) {
  if (cfg.count < 1) throw Error(ErrorCode::InvalidParams, "population count must be >= 1");
  if (!(cfg.female_fraction >= 0.0 && cfg.female_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "female_fraction must be in [0, 1]");
  }
  const auto females = static_cast<std::size_t>(std::llround(cfg.female_fraction * cfg.count));
  std::vector<BodyParams> out;
  out.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const bool female = ((i + 1) * females) / cfg.count != (i * females) / cfg.count;
    out.push_back(sample_params(female ? Gender::Female : Gender::Male, cfg.seed, i, cfg.segments));
  }
  return out;
}

BodySample import_body(const std::filesystem::path& mesh_file,
                       const std::filesystem::path& skeleton_file) {
  BodySample body;
  body.mesh = read_mesh(mesh_file);
  try {
    validate_mesh(body.mesh);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, mesh_file.string() + ": " + e.what());
  }
  body.skeleton = read_skeleton_json(skeleton_file);
  if (!is_watertight(body.mesh)) {
    body.warnings.push_back("NotWatertight: " + mesh_file.string() +
                            " has edges not shared by exactly two triangles");
  }
  for (Joint j : joints_off_surface(body.mesh, body.skeleton)) {
    body.warnings.push_back("joint " + std::string(joint_name(j)) + " is more than 5 cm outside the mesh");
  }
  return body;
}

}  // namespace anthro
