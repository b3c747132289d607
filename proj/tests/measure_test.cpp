#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "anthro/bodygen.hpp"
#include "anthro/error.hpp"
#include "anthro/measure.hpp"

using namespace anthro;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense polygon approximation of |x/a|^p + |y/b|^p = 1.
double superellipse_perimeter(double a, double b, double p, int n = 200000) {
  double len = 0.0;
  Vec2 prev{a, 0.0};
  for (int i = 1; i <= n; ++i) {
    const double t = 2.0 * kPi * i / n;
    const double c = std::cos(t), s = std::sin(t);
    const Vec2 cur{a * std::copysign(std::pow(std::abs(c), 2.0 / p), c), b * std::copysign(std::pow(std::abs(s), 2.0 / p), s)};
    len += std::hypot(cur.x - prev.x, cur.y - prev.y);
    prev = cur;
  }
  return len;
}

double ellipse_perimeter(double a, double b) { return superellipse_perimeter(a, b, 2.0); }

// 2*pi*r minus the inscribed n-gon perimeter.
double polygon_bound(double r, int n) { return 2.0 * kPi * r - 2.0 * n * r * std::sin(kPi / n); }

void expect_within_bound(double measured_mm, double r, int n, const char* what) {
  const double exact = 2.0 * kPi * r * 1000.0;
  EXPECT_LE(std::abs(measured_mm - exact), 1000.0 * polygon_bound(r, n) + 0.005 * exact) << what;
}

BodySample default_body(Gender g = Gender::Male) { return generate_body(BodyParams::preset(g)); }

Skeleton simple_skeleton() {
  Skeleton sk;
  for (auto& j : sk.joints) j = {0.0, 1.0, 0.0};
  return sk;
}

CrossSection square_at(const Vec3& c, double half) {
  CrossSection cs;
  cs.plane = Plane::make({0, 1, 0}, c.y);
  cs.points = {c + Vec3{-half, 0, -half}, c + Vec3{half, 0, -half}, c + Vec3{half, 0, half}, c + Vec3{-half, 0, half}};
  return cs;
}

}  // namespace

TEST(JointDistance, ShoulderToWrist) {
  auto sk = simple_skeleton();
  sk[Joint::LeftShoulder] = {-0.2, 1.4, 0};
  sk[Joint::LeftWrist] = {-0.8, 1.4, 0};
  EXPECT_NEAR(joint_distance_mm(sk, Joint::LeftShoulder, Joint::LeftWrist), 600.0, 1e-9);
}

TEST(JointDistance, CalfAndCoincident) {
  auto sk = simple_skeleton();
  sk[Joint::LeftKnee] = {0.1, 0.5, 0};
  sk[Joint::LeftAnkle] = {0.1, 0.1, 0};
  EXPECT_NEAR(joint_distance_mm(sk, Joint::LeftKnee, Joint::LeftAnkle), 400.0, 1e-9);
  EXPECT_EQ(joint_distance_mm(sk, Joint::Head, Joint::Neck), 0.0);
  MeasurementSet m;
  m.mm.fill(100.0);
  m[Measurement::CalfLength] = 0.0;
  EXPECT_FALSE(m.sanity_violation().empty());
}

TEST(ArmSpan, CubeAndRotation) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  EXPECT_NEAR(arm_span_mm(box), 1000.0, 1e-9);
  const auto body = default_body();
  const double span = arm_span_mm(body.mesh);
  EXPECT_NEAR(span, body.reference->arm_span * 1000.0, 1e-6);
  EXPECT_NEAR(arm_span_mm(transformed(body.mesh, 1.0, kPi, {})), span, 1e-6);
}

TEST(SelectLoop, NearestCentroidWins) {
  std::vector<CrossSection> loops{square_at({-0.1, 0.5, 0}, 0.05), square_at({0.1, 0.5, 0}, 0.05)};
  const auto& chosen = select_loop(loops, {0.1, 0.9, 0}, {0.1, 0.2, 0});
  EXPECT_NEAR(chosen.centroid().x, 0.1, 1e-12);
}

TEST(SelectLoop, TieBreaksBySmallerYThenX) {
  std::vector<CrossSection> loops{square_at({0.1, 0.5, 0}, 0.05), square_at({-0.1, 0.5, 0}, 0.05)};
  // Equidistant from the segment on the Y axis: smaller X wins.
  EXPECT_NEAR(select_loop(loops, {0, 0, 0}, {0, 1, 0}).centroid().x, -0.1, 1e-12);
  std::vector<CrossSection> stacked{square_at({0.1, 0.6, 0}, 0.05), square_at({-0.1, 0.4, 0}, 0.05)};
  EXPECT_NEAR(select_loop(stacked, {0, 0, 0}, {0, 1, 0}).centroid().y, 0.4, 1e-12);
}

TEST(SelectLoop, CoincidentCandidatesAreAmbiguous) {
  std::vector<CrossSection> loops{square_at({0.1, 0.5, 0}, 0.05), square_at({0.1, 0.5, 0.0005}, 0.02)};
  try {
    select_loop(loops, {0, 0, 0}, {0, 1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AmbiguousSection);
  }
  EXPECT_THROW(select_loop({}, {0, 0, 0}, {0, 1, 0}), Error);
}

TEST(Limbs, MatchAnalyticRadii) {
  for (Gender g : {Gender::Male, Gender::Female}) {
    const auto body = default_body(g);
    const auto& ref = *body.reference;
    const BodyFrame frame(body.mesh, body.skeleton);
    const AnnotationConfig cfg;
    expect_within_bound(bicep_circumference_mm(frame, cfg), ref.bicep_radius, ref.segments, "bicep");
    expect_within_bound(wrist_circumference_mm(frame, cfg), ref.wrist_radius, ref.segments, "wrist");
    expect_within_bound(thigh_circumference_mm(frame, cfg), ref.thigh_radius, ref.segments, "thigh");
    expect_within_bound(knee_circumference_mm(frame, cfg), ref.knee_radius, ref.segments, "knee");
  }
}

TEST(Limbs, RightSideMatchesLeftOnSymmetricBody) {
  const auto body = default_body();
  const BodyFrame frame(body.mesh, body.skeleton);
  AnnotationConfig left, right;
  right.side = Side::Right;
  EXPECT_NEAR(thigh_circumference_mm(frame, left), thigh_circumference_mm(frame, right), 1e-6);
  EXPECT_NEAR(bicep_circumference_mm(frame, left), bicep_circumference_mm(frame, right), 1e-6);
}

TEST(HeadNeck, UntiltedHeadMatchesEllipseSlice) {
  const auto body = default_body(Gender::Female);
  const auto& ref = *body.reference;
  const BodyFrame frame(body.mesh, body.skeleton);
  AnnotationConfig cfg;
  cfg.head_tilt_degrees = 0.0;
  const auto axes = ref.head_semi_axes;
  const double top = ref.head_center.y + axes.y;
  const double h = 0.5 * (ref.head_center.y + top) - ref.head_center.y;
  const double f = std::sqrt(1.0 - (h / axes.y) * (h / axes.y));
  const double exact = 1000.0 * ellipse_perimeter(axes.x * f, axes.z * f);
  EXPECT_NEAR(head_circumference_mm(frame, cfg), exact, 0.01 * exact);
}

TEST(HeadNeck, TiltChangesResultDeterministically) {
  const auto body = default_body();
  const BodyFrame frame(body.mesh, body.skeleton);
  AnnotationConfig flat, tilted;
  flat.head_tilt_degrees = 0.0;
  const double a = head_circumference_mm(frame, flat);
  const double b = head_circumference_mm(frame, tilted);
  EXPECT_NE(a, b);
  EXPECT_EQ(b, head_circumference_mm(frame, tilted));
}

TEST(HeadNeck, TiltedNeckIsEllipseOfCylinder) {
  const auto body = default_body();
  const auto& ref = *body.reference;
  const BodyFrame frame(body.mesh, body.skeleton);
  const AnnotationConfig cfg;
  const double r = ref.neck_radius;
  const double exact = 1000.0 * ellipse_perimeter(r, r / std::cos(cfg.head_tilt_degrees * kPi / 180.0));
  EXPECT_NEAR(neck_circumference_mm(frame, cfg), exact, 1000.0 * polygon_bound(r / std::cos(15 * kPi / 180), ref.segments) + 0.005 * exact);
}

TEST(Axilla, WithinStepOfArmUnderside) {
  for (const auto& p : sample_population({.count = 10, .seed = 5})) {
    const auto body = generate_body(p);
    const BodyFrame frame(body.mesh, body.skeleton);
    const AnnotationConfig cfg;
    EXPECT_NEAR(detect_axilla(frame, cfg), body.reference->axilla_y, cfg.scan_step);
  }
}

TEST(Axilla, HalvingStepMovesLessThanStep) {
  const auto body = default_body();
  const BodyFrame frame(body.mesh, body.skeleton);
  AnnotationConfig a, b;
  b.scan_step = 0.5 * a.scan_step;
  EXPECT_LT(std::abs(detect_axilla(frame, a) - detect_axilla(frame, b)), a.scan_step);
}

TEST(Axilla, ArmlessBodyQualifiesAtFirstLevel) {
  const auto body = default_body();
  TriangleMesh torso = make_cylinder({0, 0, 0}, 0.15, body.skeleton[Joint::LeftShoulder].y + 0.05, 32);
  const BodyFrame frame(torso, body.skeleton);
  EXPECT_DOUBLE_EQ(detect_axilla(frame, AnnotationConfig{}), body.skeleton[Joint::LeftShoulder].y);
}

TEST(Crotch, WithinStepOfJunction) {
  for (const auto& p : sample_population({.count = 10, .seed = 6})) {
    const auto body = generate_body(p);
    const BodyFrame frame(body.mesh, body.skeleton);
    const AnnotationConfig cfg;
    EXPECT_NEAR(detect_crotch(frame, cfg), body.reference->crotch_y, cfg.scan_step);
    EXPECT_NEAR(inner_leg_length_mm(frame, cfg),
                1000.0 * (body.reference->crotch_y - body.skeleton[Joint::LeftAnkle].y), 1000.0 * cfg.scan_step);
  }
}

TEST(Crotch, TouchingLegsNeverSeparate) {
  const auto body = default_body();
  const auto& sk = body.skeleton;
  // One merged column: the legs never show up as two loops.
  const TriangleMesh column = make_cylinder({0, 0, 0}, 0.2, sk[Joint::Head].y, 32);
  const BodyFrame frame(column, sk);
  try {
    detect_crotch(frame, AnnotationConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CrotchNotFound);
  }
}

TEST(Torso, WaistMatchesSuperellipseAtMidSpine) {
  for (Gender g : {Gender::Male, Gender::Female}) {
    const auto body = default_body(g);
    const auto& ref = *body.reference;
    const BodyFrame frame(body.mesh, body.skeleton);
    const AnnotationConfig cfg;
    const auto& waist = ref.torso_stations[2];
    ASSERT_NEAR(waist.y, body.skeleton[Joint::MidSpine].y, 1e-12);
    const double exact = 1000.0 * superellipse_perimeter(waist.half_width, waist.half_depth, ref.torso_exponent);
    const double r = std::max(waist.half_width, waist.half_depth);
    EXPECT_NEAR(waist_circumference_mm(frame, cfg), exact, 1000.0 * polygon_bound(r, ref.segments) + 0.005 * exact);
  }
}

TEST(Torso, ChestAndPelvisMatchProfileMaximum) {
  for (Gender g : {Gender::Male, Gender::Female}) {
    const auto body = default_body(g);
    const auto& ref = *body.reference;
    const auto& sk = body.skeleton;
    const BodyFrame frame(body.mesh, sk);
    const AnnotationConfig cfg;
    Profile pa, pb;
    for (const auto& st : ref.torso_stations) {
      pa.stations.emplace_back(st.y, st.half_width);
      pb.stations.emplace_back(st.y, st.half_depth);
    }
    auto profile_max = [&](double lo, double hi) {
      double best = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double y = lo + (hi - lo) * i / 400.0;
        best = std::max(best, superellipse_perimeter(pa.at(y), pb.at(y), ref.torso_exponent, 20000));
      }
      return best;
    };
    const double chest = 1000.0 * profile_max(sk[Joint::Chest].y, ref.axilla_y);
    const double pelvis = 1000.0 * profile_max(sk[Joint::LeftHip].y, sk[Joint::Pelvis].y);
    const double r = std::max(ref.torso_stations[3].half_width, ref.torso_stations[1].half_width);
    EXPECT_NEAR(chest_circumference_mm(frame, cfg), chest, 1000.0 * polygon_bound(r, ref.segments) + 0.005 * chest);
    EXPECT_NEAR(pelvis_circumference_mm(frame, cfg), pelvis, 1000.0 * polygon_bound(r, ref.segments) + 0.005 * pelvis);
  }
}

TEST(Torso, HalvingStepWithinLipschitzBound) {
  const auto body = default_body();
  const auto& ref = *body.reference;
  const BodyFrame frame(body.mesh, body.skeleton);
  AnnotationConfig a, b;
  b.scan_step = 0.5 * a.scan_step;
  // Perimeter of a superellipse is at most 4 (a + b), so |dP/dy| <= 8 L.
  const double bound_mm = 1000.0 * 8.0 * ref.torso_lipschitz * a.scan_step;
  EXPECT_LE(std::abs(chest_circumference_mm(frame, a) - chest_circumference_mm(frame, b)), bound_mm);
  EXPECT_LE(std::abs(waist_circumference_mm(frame, a) - waist_circumference_mm(frame, b)), bound_mm);
  EXPECT_LE(std::abs(pelvis_circumference_mm(frame, a) - pelvis_circumference_mm(frame, b)), bound_mm);
}

TEST(MeasureAll, WaistBelowChestAndPelvis) {
  for (const auto& p : sample_population({.count = 10, .seed = 8})) {
    const auto m = measure_all(generate_body(p));
    EXPECT_LE(m[Measurement::WaistCircumference], m[Measurement::ChestCircumference]);
    EXPECT_LE(m[Measurement::WaistCircumference], m[Measurement::PelvisCircumference]);
    EXPECT_TRUE(m.sanity_violation().empty()) << m.sanity_violation();
  }
}

TEST(MeasureAll, RawLoopLengthAtLeastHull) {
  const auto body = default_body();
  AnnotationConfig raw;
  raw.hull_circumference = false;
  const auto hull = measure_all(body);
  const auto loop = measure_all(body, raw);
  for (std::size_t i = 0; i < kMeasurementCount; ++i) EXPECT_GE(loop.mm[i] + 1e-9, hull.mm[i]) << i;
}

TEST(MeasureAll, TranslationAndYawInvariant) {
  const auto body = default_body(Gender::Female);
  const auto base = measure_all(body);
  const Vec3 t{0.37, -0.21, 1.9};
  for (double yaw : {0.0, 0.9, -2.4}) {
    const auto moved = measure_all(transformed(body.mesh, 1.0, yaw, t), transformed(body.skeleton, 1.0, yaw, t));
    for (std::size_t i = 0; i < kMeasurementCount; ++i) EXPECT_NEAR(moved.mm[i], base.mm[i], 1e-6) << i;
  }
}

TEST(MeasureAll, ScaleEquivariant) {
  const auto body = default_body();
  const auto base = measure_all(body);
  const auto scaled = measure_all(transformed(body.mesh, 1.1, 0.0, {}), transformed(body.skeleton, 1.1, 0.0, {}));
  for (std::size_t i = 0; i < kMeasurementCount; ++i) EXPECT_NEAR(scaled.mm[i], 1.1 * base.mm[i], 1e-6 * 1.1 * base.mm[i]) << i;
}

TEST(MeasureAll, ErrorsCarryMeasurementName) {
  const auto body = default_body();
  auto sk = body.skeleton;
  sk[Joint::Head] = sk[Joint::Head] + Vec3{0, 5.0, 0};
  try {
    measure_all(body.mesh, sk);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSection);
    EXPECT_EQ(std::string(e.what()).rfind("head_circumference", 0), 0u);
  }
}

TEST(AnnotationConfig, Validates) {
  AnnotationConfig c;
  c.scan_step = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.head_tilt_degrees = 50.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.waist_half_height = 0.2;
  EXPECT_THROW(c.validate(), Error);
}
