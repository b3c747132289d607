#pragma once

#include <vector>

#include "anthro/mesh.hpp"

namespace anthro {

// Slices a mesh repeatedly. Edge adjacency is built once; planes whose normal
// is a coordinate axis only visit triangles from the matching axis buckets.
class Slicer {
public:
  explicit Slicer(const TriangleMesh& mesh, double bucket_size = 0.01);

  // Closed loops in which `plane` cuts the mesh, sorted by centroid (x, y, z).
  // Vertices lying exactly on the plane are treated as displaced by +1e-9 m
  // along the normal. Throws NonManifoldEdge when a crossed edge is not shared
  // by exactly two triangles.
  std::vector<CrossSection> slice(const Plane& plane) const;

  // Number of loops only; same rules as slice().
  std::size_t count_loops(const Plane& plane) const { return slice(plane).size(); }

  const TriangleMesh& mesh() const { return mesh_; }

private:
  struct AxisIndex {
    double origin = 0.0;
    double bucket = 0.01;
    std::vector<std::vector<std::uint32_t>> buckets;
  };

  std::vector<std::uint32_t> candidates(const Plane& plane) const;

  const TriangleMesh& mesh_;
  EdgeTopology topo_;
  std::array<AxisIndex, 3> index_;
};

std::vector<CrossSection> slice_mesh(const TriangleMesh& mesh, const Plane& plane);

double loop_perimeter(const CrossSection& cs);

}  // namespace anthro
