#pragma once

#include <span>
#include <utility>
#include <vector>

#include "anthro/mesh.hpp"

namespace anthro {

// Orthonormal (u, v) spanning the plane; fixed for a given normal.
std::pair<Vec3, Vec3> plane_basis(const Vec3& unit_normal);

// Counter-clockwise hull without collinear points (Andrew's monotone chain).
std::vector<Vec2> convex_hull_2d(std::span<const Vec2> points);

double polygon_perimeter(std::span<const Vec2> polygon);

// Perimeter of the 2D convex hull of the section projected onto its plane:
// what a tape measure wrapped around the section would read. Throws
// DegenerateSection if the projected points are collinear.
double convex_hull_perimeter(const CrossSection& cs);

}  // namespace anthro
