#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "anthro/mesh.hpp"

namespace anthro {

struct RayHit {
  Vec3 point;
  double distance = 0.0;
  std::uint32_t triangle = 0;
};

// Nearest hit along the ray (t > 0), ties broken by the smaller triangle id.
// Brute force over every triangle; kept as the reference for RayCaster.
std::optional<RayHit> raycast(const TriangleMesh& mesh, const Vec3& origin, const Vec3& direction);

// Bounding-volume hierarchy over a mesh; same answers as raycast().
// Holds a reference to the mesh, which must outlive it.
class RayCaster {
public:
  explicit RayCaster(const TriangleMesh& mesh);

  std::optional<RayHit> cast(const Vec3& origin, const Vec3& direction) const;

  const TriangleMesh& mesh() const { return mesh_; }

private:
  struct Box {
    Vec3 lo;
    Vec3 hi;
  };
  struct Node {
    Box box;
    std::uint32_t first = 0;  // leaf: first index into order_; inner: left child
    std::uint32_t count = 0;  // leaf: triangle count; inner: 0
    std::uint32_t right = 0;
  };

  std::uint32_t build(std::uint32_t first, std::uint32_t count, std::vector<Vec3>& centroids);
  static bool hit_box(const Box& box, const Vec3& origin, const Vec3& inv_dir, const Vec3& dir,
                      double t_max, double& t_enter);

  const TriangleMesh& mesh_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

// Möller-Trumbore; returns t of the hit or nothing. Edges count as inside.
std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction, const Vec3& a,
                                         const Vec3& b, const Vec3& c);

}  // namespace anthro
