#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "anthro/vec3.hpp"

namespace anthro {

enum class Axis { X = 0, Y = 1, Z = 2 };

using Triangle = std::array<std::uint32_t, 3>;

// Indexed triangle surface, meters. Triangles are wound counter-clockwise
// when seen from outside.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::vector<Vec3> normals;  // optional, per vertex

  bool empty() const { return vertices.empty() || triangles.empty(); }
  Vec3 face_normal(std::size_t tri) const;  // unit, zero for degenerate faces
  double face_area(std::size_t tri) const;
};

// Throws InvalidArgument if an index is out of range or a face has zero area.
void validate_mesh(const TriangleMesh& mesh);

std::pair<double, double> axis_extent(const TriangleMesh& mesh, Axis axis);

// Appends `part` to `mesh`, offsetting indices.
void append_mesh(TriangleMesh& mesh, const TriangleMesh& part);

// Undirected edge adjacency. Each edge lists the triangles that use it.
struct EdgeTopology {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;    // (lo, hi) vertex ids
  std::vector<std::vector<std::uint32_t>> edge_triangles;        // per edge
  std::vector<std::array<std::uint32_t, 3>> triangle_edges;      // edge ids of (v0v1, v1v2, v2v0)

  static EdgeTopology build(const TriangleMesh& mesh);

  // First edge not shared by exactly two triangles, if any.
  std::optional<std::uint32_t> first_non_manifold_edge() const;
};

// Every edge shared by exactly two triangles.
bool is_watertight(const TriangleMesh& mesh);

struct Plane {
  Vec3 normal{0.0, 1.0, 0.0};
  double offset = 0.0;  // plane is { p : dot(normal, p) == offset }

  // Throws InvalidArgument unless |normal| is 1 within 1e-9.
  static Plane make(const Vec3& unit_normal, double offset);
  static Plane through(const Vec3& point, const Vec3& unit_normal);
  double signed_distance(const Vec3& p) const { return dot(normal, p) - offset; }
};

struct CrossSection {
  std::vector<Vec3> points;  // closed: points.front() follows points.back()
  Plane plane;

  Vec3 centroid() const;
};

// Rigid/similarity helpers, applied to vertices and normals.
TriangleMesh transformed(const TriangleMesh& mesh, double scale, double yaw_radians,
                         const Vec3& translation);
Vec3 transform_point(const Vec3& p, double scale, double yaw_radians, const Vec3& translation);

// Closes a sequence of equal-sized rings into a watertight tube, fanning the
// first ring to `start_cap` and the last to `end_cap`. Output is wound
// outward regardless of ring direction.
TriangleMesh loft_rings(const std::vector<std::vector<Vec3>>& rings, const Vec3& start_cap,
                        const Vec3& end_cap);

double signed_volume(const TriangleMesh& mesh);

// Watertight axis-aligned box centered at `center`.
TriangleMesh make_box(const Vec3& center, const Vec3& size);
// Closed cylinder with `segments` sides, axis along +Y, flat caps.
TriangleMesh make_cylinder(const Vec3& base_center, double radius, double height, int segments);
// UV sphere/ellipsoid with poles on the Y axis.
TriangleMesh make_ellipsoid(const Vec3& center, const Vec3& semi_axes, int segments, int rings);

}  // namespace anthro
