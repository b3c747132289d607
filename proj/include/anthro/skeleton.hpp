#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anthro/mesh.hpp"

namespace anthro {

enum class Joint {
  Head,
  Neck,
  LeftShoulder,
  RightShoulder,
  LeftElbow,
  RightElbow,
  LeftWrist,
  RightWrist,
  Chest,  // upper spine
  MidSpine,
  Pelvis,
  LeftHip,
  RightHip,
  LeftKnee,
  RightKnee,
  LeftAnkle,
  RightAnkle,
};

inline constexpr std::size_t kJointCount = 17;

std::string_view joint_name(Joint joint);
std::optional<Joint> joint_from_name(std::string_view name);

// Body-left is +X in the canonical T-pose (the subject faces +Z).
struct Skeleton {
  std::array<Vec3, kJointCount> joints{};

  const Vec3& operator[](Joint j) const { return joints[static_cast<std::size_t>(j)]; }
  Vec3& operator[](Joint j) { return joints[static_cast<std::size_t>(j)]; }

  // Throws MissingJoint(name) for the first required joint absent from `named`.
  static Skeleton from_map(const std::map<std::string, Vec3>& named);
  std::map<std::string, Vec3> to_map() const;
};

Skeleton transformed(const Skeleton& skeleton, double scale, double yaw_radians,
                     const Vec3& translation);

// Joints that are neither inside the mesh (generalized winding number >= 0.5)
// nor within `tolerance` meters of its surface.
std::vector<Joint> joints_off_surface(const TriangleMesh& mesh, const Skeleton& skeleton,
                                      double tolerance = 0.05);

double winding_number(const TriangleMesh& mesh, const Vec3& p);
double distance_to_surface(const TriangleMesh& mesh, const Vec3& p);

}  // namespace anthro
