#include "anthro/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "anthro/error.hpp"

namespace anthro {
namespace {

constexpr std::array<std::string_view, kJointCount> kNames = {
    "head",      "neck",      "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist", "right_wrist", "chest",      "mid_spine",      "pelvis",     "left_hip",
    "right_hip", "left_knee", "right_knee",    "left_ankle",     "right_ankle"};

// Ericson, Real-Time Collision Detection, 5.1.5.
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace

std::string_view joint_name(Joint joint) { return kNames[static_cast<std::size_t>(joint)]; }

std::optional<Joint> joint_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Joint>(i);
  }
  return std::nullopt;
}

Skeleton Skeleton::from_map(const std::map<std::string, Vec3>& named) {
  Skeleton s;
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    auto it = named.find(std::string(kNames[i]));
    if (it == named.end()) {
      throw Error(ErrorCode::MissingJoint, "missing joint \"" + std::string(kNames[i]) + "\"");
    }
    s.joints[i] = it->second;
  }
  return s;
}

std::map<std::string, Vec3> Skeleton::to_map() const {
  std::map<std::string, Vec3> out;
  for (std::size_t i = 0; i < kNames.size(); ++i) out.emplace(kNames[i], joints[i]);
  return out;
}

Skeleton transformed(const Skeleton& skeleton, double scale, double yaw_radians,
                     const Vec3& translation) {
  Skeleton out;
  for (std::size_t i = 0; i < kJointCount; ++i) {
    out.joints[i] = transform_point(skeleton.joints[i], scale, yaw_radians, translation);
  }
  return out;
}

double winding_number(const TriangleMesh& mesh, const Vec3& p) {
  // Sum of signed solid angles (Van Oosterom & Strackee).
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[t[0]] - p;
    const Vec3 b = mesh.vertices[t[1]] - p;
    const Vec3 c = mesh.vertices[t[2]] - p;
    const double la = norm(a), lb = norm(b), lc = norm(c);
    const double num = dot(a, cross(b, c));
    const double den = la * lb * lc + dot(a, b) * lc + dot(b, c) * la + dot(c, a) * lb;
    total += 2.0 * std::atan2(num, den);
  }
  return total / (4.0 * std::numbers::pi);
}

double distance_to_surface(const TriangleMesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : mesh.triangles) {
    const Vec3 q = closest_on_triangle(p, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                       mesh.vertices[t[2]]);
    best = std::min(best, distance(p, q));
  }
  return best;
}

std::vector<Joint> joints_off_surface(const TriangleMesh& mesh, const Skeleton& skeleton,
                                      double tolerance) {
  std::vector<Joint> off;
  for (std::size_t i = 0; i < kJointCount; ++i) {
    const Vec3& p = skeleton.joints[i];
    if (winding_number(mesh, p) >= 0.5) continue;
    if (distance_to_surface(mesh, p) <= tolerance) continue;
    off.push_back(static_cast<Joint>(i));
  }
  return off;
}

}  // namespace anthro
