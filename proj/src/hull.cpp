#include "anthro/hull.hpp"

#include <algorithm>
#include <cmath>

#include "anthro/error.hpp"

namespace anthro {
namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  int least = 0;
  for (int a = 1; a < 3; ++a) {
    if (std::abs(n[a]) < std::abs(n[least])) least = a;
  }
  Vec3 helper;
  helper[least] = 1.0;
  const Vec3 u = normalized(cross(n, helper));
  return {u, cross(n, u)};
}

std::vector<Vec2> convex_hull_2d(std::span<const Vec2> input) {
  std::vector<Vec2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(),
            [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_perimeter(std::span<const Vec2> polygon) {
  double total = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    total += std::hypot(b.x - a.x, b.y - a.y);
  }
  return total;
}

double convex_hull_perimeter(const CrossSection& cs) {
  const auto [u, v] = plane_basis(cs.plane.normal);
  std::vector<Vec2> projected;
  projected.reserve(cs.points.size());
  for (const auto& p : cs.points) projected.push_back({dot(p, u), dot(p, v)});
  const auto hull = convex_hull_2d(projected);

  double area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area += a.x * b.y - b.x * a.y;
  }
  const double perimeter = polygon_perimeter(hull);
  if (hull.size() < 3 || std::abs(0.5 * area) <= 1e-12 * perimeter * perimeter) {
    throw Error(ErrorCode::DegenerateSection, "cross-section projects to a line");
  }
  return perimeter;
}

}  // namespace anthro
