#include "anthro/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anthro/error.hpp"

namespace anthro {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kLeafSize = 4;

bool better(double t, std::uint32_t tri, const std::optional<RayHit>& best) {
  return !best || t < best->distance || (t == best->distance && tri < best->triangle);
}

void check_direction(const Vec3& d) {
  if (std::abs(norm(d) - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "ray direction is not unit length");
  }
}

}  // namespace

std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction, const Vec3& a,
                                         const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = cross(direction, e2);
  const double det = dot(e1, p);
  if (det == 0.0) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = origin - a;
  const double u = dot(s, p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = cross(s, e1);
  const double v = dot(direction, q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = dot(e2, q) * inv;
  if (!(t > 0.0)) return std::nullopt;
  return t;
}

std::optional<RayHit> raycast(const TriangleMesh& mesh, const Vec3& origin, const Vec3& direction) {
  check_direction(direction);
  std::optional<RayHit> best;
  for (std::uint32_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    auto hit = intersect_triangle(origin, direction, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                  mesh.vertices[t[2]]);
    if (hit && better(*hit, i, best)) best = RayHit{origin + direction * *hit, *hit, i};
  }
  return best;
}

RayCaster::RayCaster(const TriangleMesh& mesh) : mesh_(mesh) {
  const auto n = static_cast<std::uint32_t>(mesh.triangles.size());
  order_.resize(n);
  std::vector<Vec3> centroids(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    order_[i] = i;
    const auto& t = mesh.triangles[i];
    centroids[i] = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
  }
  if (n > 0) {
    nodes_.reserve(2 * n / kLeafSize + 1);
    build(0, n, centroids);
  }
}

std::uint32_t RayCaster::build(std::uint32_t first, std::uint32_t count,
                               std::vector<Vec3>& centroids) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Box box{{kInf, kInf, kInf}, {-kInf, -kInf, -kInf}};
  Box cbox = box;
  for (std::uint32_t i = first; i < first + count; ++i) {
    const auto& t = mesh_.triangles[order_[i]];
    for (auto v : t) {
      for (int a = 0; a < 3; ++a) {
        box.lo[a] = std::min(box.lo[a], mesh_.vertices[v][a]);
        box.hi[a] = std::max(box.hi[a], mesh_.vertices[v][a]);
      }
    }
    for (int a = 0; a < 3; ++a) {
      cbox.lo[a] = std::min(cbox.lo[a], centroids[order_[i]][a]);
      cbox.hi[a] = std::max(cbox.hi[a], centroids[order_[i]][a]);
    }
  }
  nodes_[id].box = box;
  if (count <= kLeafSize) {
    nodes_[id].first = first;
    nodes_[id].count = count;
    return id;
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (cbox.hi[a] - cbox.lo[a] > cbox.hi[axis] - cbox.lo[axis]) axis = a;
  }
  const std::uint32_t half = count / 2;
  auto begin = order_.begin() + first;
  std::nth_element(begin, begin + half, begin + count, [&](std::uint32_t l, std::uint32_t r) {
    return centroids[l][axis] < centroids[r][axis] ||
           (centroids[l][axis] == centroids[r][axis] && l < r);
  });
  const auto left = build(first, half, centroids);
  const auto right = build(first + half, count - half, centroids);
  nodes_[id].first = left;
  nodes_[id].right = right;
  return id;
}

bool RayCaster::hit_box(const Box& box, const Vec3& origin, const Vec3& inv_dir, const Vec3& dir,
                        double t_max, double& t_enter) {
  double t0 = 0.0;
  double t1 = t_max;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < box.lo[a] || origin[a] > box.hi[a]) return false;
      continue;
    }
    double near = (box.lo[a] - origin[a]) * inv_dir[a];
    double far = (box.hi[a] - origin[a]) * inv_dir[a];
    if (near > far) std::swap(near, far);
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
    if (t0 > t1) return false;
  }
  t_enter = t0;
  return true;
}

std::optional<RayHit> RayCaster::cast(const Vec3& origin, const Vec3& direction) const {
  check_direction(direction);
  if (nodes_.empty()) return std::nullopt;
  const Vec3 inv{1.0 / direction.x, 1.0 / direction.y, 1.0 / direction.z};
  std::optional<RayHit> best;
  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    double t_enter = 0.0;
    // Boxes are slightly inflated so hits exactly on a face are not lost to rounding.
    Box box = node.box;
    for (int a = 0; a < 3; ++a) {
      const double pad = 1e-9 * (1.0 + std::abs(box.lo[a]) + std::abs(box.hi[a]));
      box.lo[a] -= pad;
      box.hi[a] += pad;
    }
    const double limit = best ? best->distance * (1.0 + 1e-12) + 1e-12 : kInf;
    if (!hit_box(box, origin, inv, direction, limit, t_enter)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const auto tri = order_[i];
        const auto& t = mesh_.triangles[tri];
        auto hit = intersect_triangle(origin, direction, mesh_.vertices[t[0]],
                                      mesh_.vertices[t[1]], mesh_.vertices[t[2]]);
        if (hit && better(*hit, tri, best)) best = RayHit{origin + direction * *hit, *hit, tri};
      }
    } else {
      stack[top++] = node.right;
      stack[top++] = node.first;
    }
  }
  return best;
}

}  // namespace anthro
