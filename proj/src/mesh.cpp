#include "anthro/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "anthro/error.hpp"

namespace anthro {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::DegenerateSection: return "DegenerateSection";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingJoint: return "MissingJoint";
    case ErrorCode::NotWatertight: return "NotWatertight";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NoSection: return "NoSection";
    case ErrorCode::AmbiguousSection: return "AmbiguousSection";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::AxillaNotFound: return "AxillaNotFound";
    case ErrorCode::CrotchNotFound: return "CrotchNotFound";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::MissingFold: return "MissingFold";
    case ErrorCode::SchemaVersion: return "SchemaVersion";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BuildFailed: return "BuildFailed";
  }
  return "Unknown";
}

Vec3 TriangleMesh::face_normal(std::size_t tri) const {
  const auto& t = triangles[tri];
  const Vec3 n = cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
  const double len = norm(n);
  return len > 0.0 ? n / len : Vec3{};
}

double TriangleMesh::face_area(std::size_t tri) const {
  const auto& t = triangles[tri];
  return 0.5 * norm(cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]));
}

void validate_mesh(const TriangleMesh& mesh) {
  const auto n = mesh.vertices.size();
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    for (auto idx : mesh.triangles[i]) {
      if (idx >= n) {
        throw Error(ErrorCode::InvalidArgument,
                    "triangle " + std::to_string(i) + " references vertex " + std::to_string(idx) +
                        " of " + std::to_string(n));
      }
    }
    if (!(mesh.face_area(i) > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "triangle " + std::to_string(i) + " is degenerate");
    }
  }
  if (!mesh.normals.empty() && mesh.normals.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "normal count does not match vertex count");
  }
}

std::pair<double, double> axis_extent(const TriangleMesh& mesh, Axis axis) {
  if (mesh.vertices.empty()) throw Error(ErrorCode::InvalidArgument, "axis_extent of empty mesh");
  const int a = static_cast<int>(axis);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& v : mesh.vertices) {
    lo = std::min(lo, v[a]);
    hi = std::max(hi, v[a]);
  }
  return {lo, hi};
}

void append_mesh(TriangleMesh& mesh, const TriangleMesh& part) {
  const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.insert(mesh.vertices.end(), part.vertices.begin(), part.vertices.end());
  for (auto t : part.triangles) mesh.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  if (!part.normals.empty()) {
    mesh.normals.resize(base, Vec3{});
    mesh.normals.insert(mesh.normals.end(), part.normals.begin(), part.normals.end());
  }
}

EdgeTopology EdgeTopology::build(const TriangleMesh& mesh) {
  struct Use {
    std::uint64_t key;
    std::uint32_t tri;
    std::uint32_t slot;
  };
  std::vector<Use> uses;
  uses.reserve(mesh.triangles.size() * 3);
  for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (std::uint32_t k = 0; k < 3; ++k) {
      std::uint64_t a = tri[k];
      std::uint64_t b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      uses.push_back({(a << 32) | b, t, k});
    }
  }
  std::sort(uses.begin(), uses.end(), [](const Use& l, const Use& r) {
    return std::tie(l.key, l.tri, l.slot) < std::tie(r.key, r.tri, r.slot);
  });

  EdgeTopology topo;
  topo.triangle_edges.resize(mesh.triangles.size());
  for (std::size_t i = 0; i < uses.size();) {
    const auto id = static_cast<std::uint32_t>(topo.edges.size());
    topo.edges.emplace_back(static_cast<std::uint32_t>(uses[i].key >> 32),
                            static_cast<std::uint32_t>(uses[i].key & 0xffffffffu));
    auto& tris = topo.edge_triangles.emplace_back();
    std::size_t j = i;
    for (; j < uses.size() && uses[j].key == uses[i].key; ++j) {
      tris.push_back(uses[j].tri);
      topo.triangle_edges[uses[j].tri][uses[j].slot] = id;
    }
    i = j;
  }
  return topo;
}

std::optional<std::uint32_t> EdgeTopology::first_non_manifold_edge() const {
  for (std::uint32_t e = 0; e < edge_triangles.size(); ++e) {
    if (edge_triangles[e].size() != 2) return e;
  }
  return std::nullopt;
}

bool is_watertight(const TriangleMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  return !EdgeTopology::build(mesh).first_non_manifold_edge().has_value();
}

Plane Plane::make(const Vec3& unit_normal, double offset) {
  if (std::abs(norm(unit_normal) - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "plane normal is not unit length");
  }
  return Plane{unit_normal, offset};
}

Plane Plane::through(const Vec3& point, const Vec3& unit_normal) {
  return make(unit_normal, dot(unit_normal, point));
}

Vec3 CrossSection::centroid() const {
  Vec3 c;
  for (const auto& p : points) c += p;
  return points.empty() ? c : c / static_cast<double>(points.size());
}

Vec3 transform_point(const Vec3& p, double scale, double yaw_radians, const Vec3& translation) {
  const double c = std::cos(yaw_radians);
  const double s = std::sin(yaw_radians);
  const Vec3 q = p * scale;
  return Vec3{c * q.x + s * q.z, q.y, -s * q.x + c * q.z} + translation;
}

TriangleMesh transformed(const TriangleMesh& mesh, double scale, double yaw_radians,
                         const Vec3& translation) {
  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v = transform_point(v, scale, yaw_radians, translation);
  for (auto& n : out.normals) n = transform_point(n, 1.0, yaw_radians, Vec3{});
  return out;
}

double signed_volume(const TriangleMesh& mesh) {
  double vol = 0.0;
  for (const auto& t : mesh.triangles) {
    vol += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
  }
  return vol / 6.0;
}

TriangleMesh loft_rings(const std::vector<std::vector<Vec3>>& rings, const Vec3& start_cap,
                        const Vec3& end_cap) {
  if (rings.empty() || rings.front().size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "loft needs at least one ring of 3 points");
  }
  const auto n = static_cast<std::uint32_t>(rings.front().size());
  TriangleMesh mesh;
  for (const auto& ring : rings) {
    if (ring.size() != n) throw Error(ErrorCode::InvalidArgument, "loft rings differ in size");
    mesh.vertices.insert(mesh.vertices.end(), ring.begin(), ring.end());
  }
  const auto ring_count = static_cast<std::uint32_t>(rings.size());
  for (std::uint32_t r = 0; r + 1 < ring_count; ++r) {
    const std::uint32_t a = r * n;
    const std::uint32_t b = (r + 1) * n;
    for (std::uint32_t k = 0; k < n; ++k) {
      const std::uint32_t k1 = (k + 1) % n;
      mesh.triangles.push_back({a + k, b + k, b + k1});
      mesh.triangles.push_back({a + k, b + k1, a + k1});
    }
  }
  const auto start = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.push_back(start_cap);
  const auto end = start + 1;
  mesh.vertices.push_back(end_cap);
  const std::uint32_t last = (ring_count - 1) * n;
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::uint32_t k1 = (k + 1) % n;
    mesh.triangles.push_back({start, k, k1});
    mesh.triangles.push_back({end, last + k1, last + k});
  }
  if (signed_volume(mesh) < 0.0) {
    for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
  }
  return mesh;
}

TriangleMesh make_box(const Vec3& center, const Vec3& size) {
  const Vec3 h = size * 0.5;
  TriangleMesh mesh;
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.push_back(center + Vec3{(i & 1) ? h.x : -h.x, (i & 2) ? h.y : -h.y,
                                          (i & 4) ? h.z : -h.z});
  }
  // Outward counter-clockwise faces: -x, +x, -y, +y, -z, +z.
  mesh.triangles = {{0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}, {0, 1, 5}, {0, 5, 4},
                    {2, 6, 7}, {2, 7, 3}, {0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6}};
  return mesh;
}

TriangleMesh make_cylinder(const Vec3& base_center, double radius, double height, int segments) {
  std::vector<std::vector<Vec3>> rings(2);
  for (int r = 0; r < 2; ++r) {
    for (int k = 0; k < segments; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / segments;
      rings[r].push_back(base_center + Vec3{radius * std::cos(theta), r * height,
                                            radius * std::sin(theta)});
    }
  }
  return loft_rings(rings, base_center, base_center + Vec3{0.0, height, 0.0});
}

TriangleMesh make_ellipsoid(const Vec3& center, const Vec3& semi_axes, int segments, int rings) {
  std::vector<std::vector<Vec3>> loops;
  for (int i = 1; i < rings; ++i) {
    const double phi = -std::numbers::pi / 2 + std::numbers::pi * i / rings;
    auto& loop = loops.emplace_back();
    for (int k = 0; k < segments; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / segments;
      loop.push_back(center + Vec3{semi_axes.x * std::cos(phi) * std::cos(theta),
                                   semi_axes.y * std::sin(phi),
                                   semi_axes.z * std::cos(phi) * std::sin(theta)});
    }
  }
  return loft_rings(loops, center - Vec3{0.0, semi_axes.y, 0.0},
                    center + Vec3{0.0, semi_axes.y, 0.0});
}

}  // namespace anthro
