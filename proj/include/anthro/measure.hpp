#pragma once

#include <array>
#include <string_view>

#include "anthro/bodygen.hpp"
#include "anthro/mesh.hpp"
#include "anthro/skeleton.hpp"
#include "anthro/slice.hpp"

namespace anthro {

enum class Measurement {
  HeadCircumference,
  NeckCircumference,
  ShoulderToShoulder,
  ArmSpan,
  ShoulderToWrist,
  TorsoLength,
  BicepCircumference,
  WristCircumference,
  ChestCircumference,
  WaistCircumference,
  PelvisCircumference,
  LegLength,
  InnerLegLength,
  ThighCircumference,
  KneeCircumference,
  CalfLength,
};

inline constexpr std::size_t kMeasurementCount = 16;

// snake_case column name, e.g. "head_circumference"
std::string_view measurement_name(Measurement m);
std::string_view measurement_label(Measurement m);  // "Head circumference"

// Sixteen lengths in millimeters, in the fixed order of Measurement.
struct MeasurementSet {
  std::array<double, kMeasurementCount> mm{};

  double operator[](Measurement m) const { return mm[static_cast<std::size_t>(m)]; }
  double& operator[](Measurement m) { return mm[static_cast<std::size_t>(m)]; }

  // Positivity and the anatomical ordering checks; returns the first
  // violated rule, or an empty view when the set is sane.
  std::string_view sanity_violation() const;
};

enum class Side { Left, Right };

struct AnnotationConfig {
  double scan_step = 0.001;             // meters
  double head_tilt_degrees = 15.0;      // rotation of the head/neck plane about X
  double waist_half_height = 0.05;      // fraction of stature
  bool hull_circumference = true;       // false: raw loop length
  Side side = Side::Left;               // limb used for bilateral measurements

  void validate() const;  // throws InvalidArgument
};

// A body re-expressed in its canonical frame: shoulders along +X (body-left),
// Y up, pelvis on the Y axis. All annotation runs on this view.
class BodyFrame {
public:
  BodyFrame(const TriangleMesh& mesh, const Skeleton& skeleton);
  BodyFrame(const BodyFrame&) = delete;
  BodyFrame& operator=(const BodyFrame&) = delete;

  const TriangleMesh& mesh() const { return mesh_; }
  const Skeleton& skeleton() const { return skeleton_; }
  const Slicer& slicer() const { return slicer_; }
  double stature() const { return max_y_ - min_y_; }
  double top() const { return max_y_; }

private:
  TriangleMesh mesh_;
  Skeleton skeleton_;
  double min_y_ = 0.0;
  double max_y_ = 0.0;
  Slicer slicer_;
};

double joint_distance_mm(const Skeleton& skeleton, Joint a, Joint b);
double arm_span_mm(const TriangleMesh& mesh);

double head_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);
double neck_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);
double bicep_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);
double wrist_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);
double thigh_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);
double knee_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);
double chest_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);
double waist_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);
double pelvis_circumference_mm(const BodyFrame& body, const AnnotationConfig& cfg);

// Y (meters, canonical frame) of the first level below the shoulder joint
// whose section is a single loop, refined to the loop-count transition.
double detect_axilla(const BodyFrame& body, const AnnotationConfig& cfg);
// Y of the first level above the ankle where two loops merge into one.
double detect_crotch(const BodyFrame& body, const AnnotationConfig& cfg);
double inner_leg_length_mm(const BodyFrame& body, const AnnotationConfig& cfg);

MeasurementSet measure_all(const TriangleMesh& mesh, const Skeleton& skeleton,
                           const AnnotationConfig& cfg = {});
MeasurementSet measure_all(const BodySample& body, const AnnotationConfig& cfg = {});

// Picks the loop whose centroid is closest to segment [a, b]. Loops within
// 1 mm of the best distance are tie-broken by smaller centroid Y, then X;
// AmbiguousSection if two candidates still coincide within 1 mm.
const CrossSection& select_loop(const std::vector<CrossSection>& loops, const Vec3& a, const Vec3& b);

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

}  // namespace anthro
