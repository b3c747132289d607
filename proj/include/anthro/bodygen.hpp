#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anthro/mesh.hpp"
#include "anthro/skeleton.hpp"

namespace anthro {

enum class Gender { Male, Female };

std::string_view gender_name(Gender g);
Gender gender_from_name(std::string_view name);  // throws InvalidParams

// Shape controls for the procedural body. Girth factors scale cross-section
// radii directly; length factors are damped (leg: 10%, arm: 25% per unit) so
// every in-range combination still yields a plausible layout.
struct BodyParams {
  Gender gender = Gender::Female;
  double stature = 1.65;  // meters, [1.2, 2.2]
  double head_girth = 1.0;
  double neck_girth = 1.0;
  double chest_girth = 1.0;
  double waist_girth = 1.0;
  double pelvis_girth = 1.0;
  double arm_girth = 1.0;
  double leg_girth = 1.0;
  double arm_length = 1.0;
  double leg_length = 1.0;
  std::uint64_t seed = 0;
  int segments = 64;  // radial segments per ring, multiple of 4

  static BodyParams preset(Gender g);

  // Throws InvalidParams naming the first out-of-range field.
  void validate() const;
};

// Cosine-eased interpolation through (position, value) stations: monotone
// between stations, flat at each station.
struct Profile {
  std::vector<std::pair<double, double>> stations;

  double at(double pos) const;
  // max |d value / d pos| of the eased curve
  double lipschitz() const;
};

struct TorsoStation {
  double y = 0.0;
  double half_width = 0.0;  // along X
  double half_depth = 0.0;  // along Z
};

// Closed-form values fixed by the construction. Circumferences are 2*pi*r of
// the smooth limb, in meters.
struct AnalyticReference {
  double bicep_radius = 0.0;
  double wrist_radius = 0.0;
  double thigh_radius = 0.0;
  double knee_radius = 0.0;
  double neck_radius = 0.0;
  Vec3 head_center;
  Vec3 head_semi_axes;
  double axilla_y = 0.0;  // lowest point of the horizontal arm tubes
  double crotch_y = 0.0;  // torso bottom / leg top junction
  double arm_span = 0.0;
  double torso_exponent = 2.0;  // superellipse exponent of torso sections
  std::vector<TorsoStation> torso_stations;
  double torso_lipschitz = 0.0;  // bound on |d half-axis / dy|
  int segments = 0;
};

struct BodySample {
  TriangleMesh mesh;
  Skeleton skeleton;
  BodyParams params;
  std::optional<AnalyticReference> reference;
  std::vector<std::string> warnings;
};

BodySample generate_body(const BodyParams& params);

struct PopulationConfig {
  std::size_t count = 100;
  double female_fraction = 0.5;
  std::uint64_t seed = 1;
  int segments = 64;
};

// Deterministic parameter stream. Gender counts follow female_fraction
// exactly (rounded); per-sample draws depend only on (seed, index).
std::vector<BodyParams> sample_population(const PopulationConfig& cfg);
BodyParams sample_params(Gender gender, std::uint64_t master_seed, std::size_t index, int segments = 64);

// Loads a third-party body. Non-watertight meshes and joints far from the
// surface produce warnings, not errors.
BodySample import_body(const std::filesystem::path& mesh_file, const std::filesystem::path& skeleton_file);

}  // namespace anthro
