#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "anthro/error.hpp"
#include "anthro/hull.hpp"
#include "anthro/mesh.hpp"
#include "anthro/raycast.hpp"
#include "anthro/slice.hpp"

using namespace anthro;

namespace {

constexpr double kPi = std::numbers::pi;

double inscribed_perimeter(double r, int n) { return 2.0 * n * r * std::sin(kPi / n); }

CrossSection loop_of(std::initializer_list<Vec3> pts) {
  CrossSection cs;
  cs.points = pts;
  cs.plane = Plane::make({0.0, 0.0, 1.0}, 0.0);
  return cs;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Mesh, BoxIsWatertightWithPositiveVolume) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  EXPECT_TRUE(is_watertight(box));
  EXPECT_NEAR(signed_volume(box), 1.0, 1e-12);
  validate_mesh(box);
}

TEST(Mesh, BoxFaceNormalsPointOutward) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  for (std::size_t t = 0; t < box.triangles.size(); ++t) {
    Vec3 c;
    for (auto v : box.triangles[t]) c += box.vertices[v];
    EXPECT_GT(dot(box.face_normal(t), c / 3.0), 0.0) << "triangle " << t;
  }
}

TEST(Mesh, CylinderAndEllipsoidAreWatertight) {
  const auto cyl = make_cylinder({0, 0, 0}, 0.1, 1.0, 64);
  EXPECT_TRUE(is_watertight(cyl));
  EXPECT_NEAR(signed_volume(cyl), 0.5 * 64 * 0.01 * std::sin(2 * kPi / 64) * 1.0, 1e-12);
  const auto ell = make_ellipsoid({0, 1, 0}, {0.1, 0.2, 0.15}, 32, 16);
  EXPECT_TRUE(is_watertight(ell));
  EXPECT_GT(signed_volume(ell), 0.0);
}

TEST(Mesh, OpenMeshIsNotWatertight) {
  auto box = make_box({0, 0, 0}, {1, 1, 1});
  box.triangles.pop_back();
  EXPECT_FALSE(is_watertight(box));
  EXPECT_TRUE(EdgeTopology::build(box).first_non_manifold_edge().has_value());
}

TEST(Mesh, ValidateRejectsBadIndexAndDegenerateFace) {
  TriangleMesh m{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 3}}, {}};
  EXPECT_EQ(code_of([&] { validate_mesh(m); }), ErrorCode::InvalidArgument);
  m.triangles = {{0, 1, 1}};
  EXPECT_EQ(code_of([&] { validate_mesh(m); }), ErrorCode::InvalidArgument);
}

TEST(AxisExtent, UnitCube) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  const auto [lo, hi] = axis_extent(box, Axis::X);
  EXPECT_DOUBLE_EQ(lo, -0.5);
  EXPECT_DOUBLE_EQ(hi, 0.5);
}

TEST(AxisExtent, SingleTriangle) {
  TriangleMesh m{{{0, 0, 0}, {1, 2, 0}, {3, 1, 0}}, {{0, 1, 2}}, {}};
  const auto [lo, hi] = axis_extent(m, Axis::Y);
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(hi, 2.0);
}

TEST(AxisExtent, TranslationShiftsBothBounds) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  const auto moved = transformed(box, 1.0, 0.0, {0.75, 0, 0});
  const auto [lo, hi] = axis_extent(moved, Axis::X);
  EXPECT_DOUBLE_EQ(lo, 0.25);
  EXPECT_DOUBLE_EQ(hi, 1.25);
}

TEST(Plane, RejectsNonUnitNormal) {
  EXPECT_EQ(code_of([] { Plane::make({0, 2, 0}, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_NO_THROW(Plane::make({0, 1 + 5e-10, 0}, 0.0));
}

TEST(Slice, UnitCubeSquareSection) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  const auto loops = slice_mesh(box, Plane::make({0, 1, 0}, 0.0));
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_NEAR(loop_perimeter(loops[0]), 4.0, 1e-12);
}

TEST(Slice, PlaneAboveMeshIsEmpty) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  EXPECT_TRUE(slice_mesh(box, Plane::make({0, 1, 0}, 10.0)).empty());
}

TEST(Slice, CylinderMatchesInscribedPolygon) {
  const auto cyl = make_cylinder({0, 0, 0}, 0.1, 1.0, 64);
  const auto loops = slice_mesh(cyl, Plane::make({0, 1, 0}, 0.5));
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_NEAR(loop_perimeter(loops[0]), inscribed_perimeter(0.1, 64), 1e-9 * inscribed_perimeter(0.1, 64));
  EXPECT_NEAR(loop_perimeter(loops[0]), 0.62807, 1e-5);
  EXPECT_NEAR(loop_perimeter(loops[0]), 2 * kPi * 0.1, 0.005 * 2 * kPi * 0.1);
}

TEST(Slice, LoopsAreClosedAndPlanar) {
  const auto ell = make_ellipsoid({0, 1, 0}, {0.1, 0.2, 0.15}, 48, 24);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 n = normalized({u(rng), u(rng), u(rng)});
    const auto plane = Plane::through(Vec3{0, 1, 0} + Vec3{u(rng), u(rng), u(rng)} * 0.05, n);
    for (const auto& cs : slice_mesh(ell, plane)) {
      ASSERT_GE(cs.points.size(), 3u);
      for (const auto& p : cs.points) EXPECT_LT(std::abs(plane.signed_distance(p)), 1e-7);
    }
  }
}

TEST(Slice, TwoComponentsGiveTwoLoopsSortedByCentroid) {
  auto mesh = make_cylinder({0.3, 0, 0}, 0.05, 1.0, 32);
  append_mesh(mesh, make_cylinder({-0.3, 0, 0}, 0.05, 1.0, 32));
  const auto loops = slice_mesh(mesh, Plane::make({0, 1, 0}, 0.5));
  ASSERT_EQ(loops.size(), 2u);
  EXPECT_LT(loops[0].centroid().x, loops[1].centroid().x);
  EXPECT_NEAR(loops[0].centroid().x, -0.3, 1e-9);
}

TEST(Slice, PlaneThroughVerticesIsDeterministic) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  // Cuts exactly through the top face vertices.
  const auto a = slice_mesh(box, Plane::make({0, 1, 0}, 0.5));
  const auto b = slice_mesh(box, Plane::make({0, 1, 0}, 0.5));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].points, b[i].points);
  // Vertices on the plane count as lying 1e-9 above it: the cut at the top
  // sees the sides, the cut at the bottom sees nothing.
  ASSERT_EQ(a.size(), 1u);
  EXPECT_NEAR(loop_perimeter(a[0]), 4.0, 1e-6);
  EXPECT_TRUE(slice_mesh(box, Plane::make({0, 1, 0}, -0.5)).empty());
}

TEST(Slice, NonManifoldEdgeIsReported) {
  auto box = make_box({0, 0, 0}, {1, 1, 1});
  box.triangles.push_back(box.triangles[0]);
  const auto tri = box.triangles[0];
  double lo = 1e9, hi = -1e9;
  for (auto v : tri) {
    lo = std::min(lo, box.vertices[v].y);
    hi = std::max(hi, box.vertices[v].y);
  }
  if (hi - lo < 0.5) GTEST_SKIP() << "first face is horizontal";
  EXPECT_EQ(code_of([&] { slice_mesh(box, Plane::make({0, 1, 0}, 0.5 * (lo + hi) + 0.01)); }),
            ErrorCode::NonManifoldEdge);
}

TEST(Slice, OpenMeshRaisesNonManifold) {
  auto cyl = make_cylinder({0, 0, 0}, 0.1, 1.0, 16);
  // Drop one side triangle; the cut at mid-height crosses its edges.
  const auto plane = Plane::make({0, 1, 0}, 0.5);
  for (std::size_t t = 0; t < cyl.triangles.size(); ++t) {
    double lo = 1e9, hi = -1e9;
    for (auto v : cyl.triangles[t]) {
      lo = std::min(lo, cyl.vertices[v].y);
      hi = std::max(hi, cyl.vertices[v].y);
    }
    if (lo < 0.5 && hi > 0.5) {
      cyl.triangles.erase(cyl.triangles.begin() + static_cast<std::ptrdiff_t>(t));
      break;
    }
  }
  EXPECT_EQ(code_of([&] { slice_mesh(cyl, plane); }), ErrorCode::NonManifoldEdge);
}

TEST(Slice, RigidMotionPreservesPerimeter) {
  const auto ell = make_ellipsoid({0, 1, 0}, {0.1, 0.2, 0.15}, 48, 24);
  const Vec3 n = normalized({0.2, 1.0, 0.1});
  const Vec3 p{0.01, 1.05, -0.02};
  const double base = loop_perimeter(slice_mesh(ell, Plane::through(p, n))[0]);
  const double yaw = 0.7;
  const Vec3 t{0.3, -0.2, 1.1};
  const auto moved = transformed(ell, 1.0, yaw, t);
  const Vec3 n2 = transform_point(n, 1.0, yaw, {});
  const double after = loop_perimeter(slice_mesh(moved, Plane::through(transform_point(p, 1.0, yaw, t), normalized(n2)))[0]);
  EXPECT_NEAR(after, base, 1e-9 * base);
}

TEST(Slicer, AxisBucketsAgreeWithFullScan) {
  const auto ell = make_ellipsoid({0, 1, 0}, {0.1, 0.2, 0.15}, 48, 24);
  const Slicer slicer(ell);
  const Slicer coarse(ell, 1e3);  // one bucket holds every triangle
  for (double y = 0.81; y < 1.2; y += 0.0137) {
    const auto fast = slicer.slice(Plane::make({0, 1, 0}, y));
    const auto full = coarse.slice(Plane::make({0, 1, 0}, y));
    ASSERT_EQ(fast.size(), full.size());
    for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(loop_perimeter(fast[i]), loop_perimeter(full[i]), 1e-12);
  }
}

TEST(LoopPerimeter, UnitSquare) {
  EXPECT_DOUBLE_EQ(loop_perimeter(loop_of({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}})), 4.0);
}

TEST(LoopPerimeter, CollinearIsTwiceLongestSide) {
  EXPECT_DOUBLE_EQ(loop_perimeter(loop_of({{0, 0, 0}, {1, 0, 0}, {3, 0, 0}})), 6.0);
}

TEST(LoopPerimeter, RegularPolygon) {
  CrossSection cs = loop_of({});
  for (int i = 0; i < 64; ++i) cs.points.push_back({0.1 * std::cos(2 * kPi * i / 64), 0.1 * std::sin(2 * kPi * i / 64), 0});
  EXPECT_NEAR(loop_perimeter(cs), inscribed_perimeter(0.1, 64), 1e-12);
  EXPECT_NEAR(convex_hull_perimeter(cs), loop_perimeter(cs), 1e-12);
}

TEST(Hull, SquareIsItself) {
  EXPECT_NEAR(convex_hull_perimeter(loop_of({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}})), 4.0, 1e-12);
}

TEST(Hull, LShapeSpansConcavity) {
  const auto cs = loop_of({{0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 1, 0}, {1, 2, 0}, {0, 2, 0}});
  EXPECT_NEAR(convex_hull_perimeter(cs), 6.0 + std::sqrt(2.0), 1e-12);
  EXPECT_LT(convex_hull_perimeter(cs), loop_perimeter(cs));
}

TEST(Hull, CollinearIsDegenerate) {
  EXPECT_EQ(code_of([] { convex_hull_perimeter(loop_of({{0, 0, 0}, {1, 0, 0}, {3, 0, 0}})); }),
            ErrorCode::DegenerateSection);
}

TEST(Hull, DropsCollinearAndDuplicatePoints) {
  std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 0}, {1, 1}};
  const auto hull = convex_hull_2d(pts);
  EXPECT_EQ(hull.size(), 4u);
  EXPECT_DOUBLE_EQ(polygon_perimeter(hull), 8.0);
}

TEST(Hull, NeverShorterThanHullOfSubset) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec2> pts(20);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const double all = polygon_perimeter(convex_hull_2d(pts));
    std::vector<Vec2> half(pts.begin(), pts.begin() + 10);
    EXPECT_GE(all + 1e-12, polygon_perimeter(convex_hull_2d(half)));
  }
}

TEST(Hull, TiltedPlaneProjection) {
  // A square of side 1 lying in a tilted plane.
  const Vec3 n = normalized({0, 1, 1});
  const auto [u, v] = plane_basis(n);
  CrossSection cs;
  cs.plane = Plane::through({0, 0, 0}, n);
  for (auto [a, b] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}) cs.points.push_back(u * a + v * b);
  EXPECT_NEAR(convex_hull_perimeter(cs), 4.0, 1e-12);
}

TEST(Raycast, HitsCubeFace) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  const auto hit = raycast(box, {0, 0, 2}, {0, 0, -1});
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->point.z, 0.5, 1e-12);
  EXPECT_NEAR(hit->distance, 1.5, 1e-12);
}

TEST(Raycast, MissWhenPointingAway) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  EXPECT_FALSE(raycast(box, {0, 0, 2}, {0, 0, 1}));
  EXPECT_FALSE(RayCaster(box).cast({0, 0, 2}, {0, 0, 1}));
}

TEST(Raycast, SharedEdgeGivesOneDeterministicHit) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  // The front face diagonal passes through the origin's projection onto z = 0.5
  // for a box split into two triangles per face; aim at a face corner-to-corner line.
  for (const Vec3 target : {Vec3{0, 0, 0.5}, Vec3{0.5, 0.5, 0.5}, Vec3{0.25, 0.25, 0.5}}) {
    const Vec3 origin{target.x, target.y, 2.0};
    const auto a = raycast(box, origin, {0, 0, -1});
    const auto b = raycast(box, origin, {0, 0, -1});
    ASSERT_TRUE(a);
    ASSERT_TRUE(b);
    EXPECT_EQ(a->triangle, b->triangle);
    EXPECT_NEAR(a->distance, 1.5, 1e-12);
    const auto c = RayCaster(box).cast(origin, {0, 0, -1});
    ASSERT_TRUE(c);
    EXPECT_EQ(c->triangle, a->triangle);
  }
}

TEST(Raycast, RejectsNonUnitDirection) {
  const auto box = make_box({0, 0, 0}, {1, 1, 1});
  EXPECT_EQ(code_of([&] { raycast(box, {0, 0, 2}, {0, 0, -2}); }), ErrorCode::InvalidArgument);
}

TEST(Raycast, BvhMatchesBruteForce) {
  auto mesh = make_ellipsoid({0, 1, 0}, {0.3, 0.5, 0.2}, 48, 24);
  append_mesh(mesh, make_cylinder({0.2, 0.2, 0.1}, 0.1, 1.2, 32));
  append_mesh(mesh, make_box({-0.3, 0.9, 0}, {0.3, 0.2, 0.5}));
  const RayCaster bvh(mesh);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int hits = 0;
  for (int i = 0; i < 3000; ++i) {
    const Vec3 origin = Vec3{0, 1, 0} + Vec3{u(rng), u(rng), u(rng)} * 2.0;
    const Vec3 target = Vec3{0, 1, 0} + Vec3{u(rng), u(rng), u(rng)} * 0.4;
    const Vec3 dir = normalized(target - origin);
    const auto a = raycast(mesh, origin, dir);
    const auto b = bvh.cast(origin, dir);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      ++hits;
      EXPECT_EQ(a->triangle, b->triangle);
      EXPECT_EQ(a->distance, b->distance);
    }
  }
  EXPECT_GT(hits, 1000);
}

TEST(Raycast, IntersectTriangleEdgeInclusive) {
  const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
  EXPECT_TRUE(intersect_triangle({0.5, 0.5, 1}, {0, 0, -1}, a, b, c));
  EXPECT_TRUE(intersect_triangle({0, 0, 1}, {0, 0, -1}, a, b, c));
  EXPECT_FALSE(intersect_triangle({0.6, 0.6, 1}, {0, 0, -1}, a, b, c));
  EXPECT_FALSE(intersect_triangle({0.2, 0.2, -1}, {0, 0, -1}, a, b, c));
}
