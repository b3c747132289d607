#include "anthro/slice.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <unordered_map>

#include "anthro/error.hpp"

namespace anthro {
namespace {

constexpr double kOnPlaneNudge = 1e-9;

int axis_of(const Vec3& n) {
  for (int a = 0; a < 3; ++a) {
    if (std::abs(n[a]) == 1.0 && n[(a + 1) % 3] == 0.0 && n[(a + 2) % 3] == 0.0) return a;
  }
  return -1;
}

}  // namespace

Slicer::Slicer(const TriangleMesh& mesh, double bucket_size)
    : mesh_(mesh), topo_(EdgeTopology::build(mesh)) {
  if (mesh.empty()) throw Error(ErrorCode::InvalidArgument, "cannot slice an empty mesh");
  for (int a = 0; a < 3; ++a) {
    auto [lo, hi] = axis_extent(mesh, static_cast<Axis>(a));
    auto& idx = index_[a];
    idx.origin = lo;
    idx.bucket = bucket_size;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / bucket_size)) + 1;
    idx.buckets.resize(count);
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      double tmin = mesh.vertices[tri[0]][a];
      double tmax = tmin;
      for (int k = 1; k < 3; ++k) {
        tmin = std::min(tmin, mesh.vertices[tri[k]][a]);
        tmax = std::max(tmax, mesh.vertices[tri[k]][a]);
      }
      const auto b0 = static_cast<std::size_t>(std::floor((tmin - lo) / bucket_size));
      const auto b1 = std::min(count - 1, static_cast<std::size_t>(std::floor((tmax - lo) / bucket_size)));
      for (auto b = b0; b <= b1; ++b) idx.buckets[b].push_back(t);
    }
  }
}

std::vector<std::uint32_t> Slicer::candidates(const Plane& plane) const {
  const int a = axis_of(plane.normal);
  if (a < 0) {
    std::vector<std::uint32_t> all(mesh_.triangles.size());
    for (std::uint32_t t = 0; t < all.size(); ++t) all[t] = t;
    return all;
  }
  const auto& idx = index_[a];
  const double level = plane.offset / plane.normal[a];
  const double rel = std::floor((level - idx.origin) / idx.bucket);
  if (rel < 0.0 || rel >= static_cast<double>(idx.buckets.size())) return {};
  return idx.buckets[static_cast<std::size_t>(rel)];
}

std::vector<CrossSection> Slicer::slice(const Plane& plane) const {
  if (std::abs(norm(plane.normal) - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "plane normal is not unit length");
  }
  auto dist = [&](std::uint32_t v) {
    const double d = plane.signed_distance(mesh_.vertices[v]);
    return d == 0.0 ? kOnPlaneNudge : d;
  };

  // crossed edge -> the triangles that cross it; triangle -> its two crossed edges
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> edge_tris;
  std::unordered_map<std::uint32_t, std::array<std::uint32_t, 2>> tri_edges;
  for (auto t : candidates(plane)) {
    const auto& tri = mesh_.triangles[t];
    const bool pos[3] = {dist(tri[0]) > 0.0, dist(tri[1]) > 0.0, dist(tri[2]) > 0.0};
    if (pos[0] == pos[1] && pos[1] == pos[2]) continue;
    std::array<std::uint32_t, 2> crossed{};
    int n = 0;
    for (int k = 0; k < 3; ++k) {
      if (pos[k] != pos[(k + 1) % 3]) crossed[n++] = topo_.triangle_edges[t][k];
    }
    tri_edges.emplace(t, crossed);
    for (auto e : crossed) edge_tris[e].push_back(t);
  }
  if (edge_tris.empty()) return {};

  std::vector<std::uint32_t> edge_order;
  edge_order.reserve(edge_tris.size());
  for (const auto& [e, tris] : edge_tris) {
    if (topo_.edge_triangles[e].size() != 2 || tris.size() != 2) {
      throw Error(ErrorCode::NonManifoldEdge,
                  "edge " + std::to_string(e) + " (" + std::to_string(topo_.edges[e].first) + "," +
                      std::to_string(topo_.edges[e].second) + ") is shared by " +
                      std::to_string(topo_.edge_triangles[e].size()) + " triangles");
    }
    edge_order.push_back(e);
  }
  std::sort(edge_order.begin(), edge_order.end());

  auto cut_point = [&](std::uint32_t e) {
    const auto [lo, hi] = topo_.edges[e];
    const double dlo = dist(lo);
    const double dhi = dist(hi);
    const Vec3& a = mesh_.vertices[lo];
    const Vec3& b = mesh_.vertices[hi];
    return a + (b - a) * (dlo / (dlo - dhi));
  };

  std::unordered_map<std::uint32_t, bool> visited;
  std::vector<CrossSection> loops;
  for (auto start : edge_order) {
    if (visited[start]) continue;
    CrossSection cs;
    cs.plane = plane;
    std::uint32_t edge = start;
    std::uint32_t tri = edge_tris[start][0];
    do {
      visited[edge] = true;
      cs.points.push_back(cut_point(edge));
      const auto& te = tri_edges[tri];
      edge = te[0] == edge ? te[1] : te[0];
      const auto& et = edge_tris[edge];
      tri = et[0] == tri ? et[1] : et[0];
    } while (edge != start);
    loops.push_back(std::move(cs));
  }

  std::vector<std::pair<Vec3, std::size_t>> keys;
  for (std::size_t i = 0; i < loops.size(); ++i) keys.emplace_back(loops[i].centroid(), i);
  std::sort(keys.begin(), keys.end(), [](const auto& l, const auto& r) {
    return std::tie(l.first.x, l.first.y, l.first.z, l.second) <
           std::tie(r.first.x, r.first.y, r.first.z, r.second);
  });
  std::vector<CrossSection> sorted;
  sorted.reserve(loops.size());
  for (const auto& k : keys) sorted.push_back(std::move(loops[k.second]));
  return sorted;
}

std::vector<CrossSection> slice_mesh(const TriangleMesh& mesh, const Plane& plane) {
  return Slicer(mesh).slice(plane);
}

double loop_perimeter(const CrossSection& cs) {
  double total = 0.0;
  const auto n = cs.points.size();
  for (std::size_t i = 0; i < n; ++i) total += distance(cs.points[i], cs.points[(i + 1) % n]);
  return total;
}

}  // namespace anthro
