#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "anthro/error.hpp"
#include "anthro/sampling.hpp"

using namespace anthro;

namespace {

PointCloud random_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({u(rng), u(rng), u(rng)});
  return c;
}

double min_pairwise(const PointCloud& c, const std::vector<std::size_t>& idx) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) best = std::min(best, distance(c.points[idx[i]], c.points[idx[j]]));
  }
  return best;
}

// Literal definition: each step takes the point farthest from the chosen set,
// lowest index on ties, starting from the point nearest the centroid.
std::vector<std::size_t> fps_by_definition(const PointCloud& c, std::size_t n) {
  Vec3 centroid;
  for (const auto& p : c.points) centroid += p;
  centroid = centroid / static_cast<double>(c.points.size());
  std::size_t first = 0;
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    if (distance(c.points[i], centroid) < distance(c.points[first], centroid)) first = i;
  }
  std::vector<std::size_t> chosen{first};
  while (chosen.size() < n) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t k : chosen) d = std::min(d, distance(c.points[i], c.points[k]));
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

}  // namespace

TEST(Fps, MatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = random_cloud(200, 50 + seed);
    const auto expected = fps_by_definition(c, 30);
    EXPECT_EQ(farthest_point_sample_reference(c, 30), expected);
    EXPECT_EQ(farthest_point_sample(c, 30, 0, 4), expected);
  }
}

TEST(Fps, CollinearPicksCentroidThenFarEnd) {
  PointCloud c;
  for (int x = 0; x < 10; ++x) c.points.push_back({static_cast<double>(x), 0, 0});
  const auto idx = farthest_point_sample(c, 2);
  EXPECT_EQ(idx, (std::vector<std::size_t>{4, 9}));
}

TEST(Fps, AllPointsAndSinglePoint) {
  const auto c = random_cloud(30, 1);
  auto all = farthest_point_sample(c, 30);
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(30);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(all, expected);
  const auto one = farthest_point_sample(c, 1);
  ASSERT_EQ(one.size(), 1u);
  Vec3 centroid;
  for (const auto& p : c.points) centroid += p;
  centroid = centroid / 30.0;
  for (const auto& p : c.points) EXPECT_LE(distance(c.points[one[0]], centroid), distance(p, centroid));
}

TEST(Fps, TooFewPoints) {
  const auto c = random_cloud(5, 1);
  try {
    farthest_point_sample(c, 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
  EXPECT_THROW(farthest_point_sample(c, 0), Error);
}

TEST(Fps, MatchesSerialReference) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = random_cloud(300, seed);
    EXPECT_EQ(farthest_point_sample(c, 40, seed, 3), farthest_point_sample_reference(c, 40));
  }
}

TEST(Fps, IndependentOfThreadCount) {
  const auto c = random_cloud(5000, 7);
  const auto one = farthest_point_sample(c, 256, 0, 1);
  for (int jobs = 2; jobs <= 8; ++jobs) EXPECT_EQ(farthest_point_sample(c, 256, 0, jobs), one);
}

TEST(Fps, BeatsUniformRandomSubset) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto c = random_cloud(100, 1000 + seed);
    const auto fps = farthest_point_sample(c, 20, seed);
    std::vector<std::size_t> perm(100);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    perm.resize(20);
    EXPECT_GE(min_pairwise(c, fps), min_pairwise(c, perm)) << seed;
  }
}

TEST(Fps, SeedDoesNotChangeResult) {
  const auto c = random_cloud(200, 3);
  EXPECT_EQ(farthest_point_sample(c, 50, 1), farthest_point_sample(c, 50, 99));
}

TEST(NormalizeCloud, TwoPoints) {
  PointCloud c{{{0, 0, 0}, {2, 0, 0}}};
  const auto n = normalize_cloud(c);
  EXPECT_EQ(n.cloud.points[0], (Vec3{-1, 0, 0}));
  EXPECT_EQ(n.cloud.points[1], (Vec3{1, 0, 0}));
  EXPECT_DOUBLE_EQ(n.transform.scale, 1.0);
}

TEST(NormalizeCloud, AlreadyNormalizedIsIdentity) {
  auto c = random_cloud(100, 2);
  c.points.push_back({-1, -1, -1});
  c.points.push_back({1, 1, 1});
  const auto n = normalize_cloud(c);
  EXPECT_NEAR(n.transform.scale, 1.0, 1e-12);
  EXPECT_NEAR(norm(n.transform.translation), 0.0, 1e-12);
}

TEST(NormalizeCloud, InverseRoundTripAndRange) {
  PointCloud c = random_cloud(500, 4);
  for (auto& p : c.points) p = p * 0.37 + Vec3{1.2, 0.8, -3.0};
  const auto n = normalize_cloud(c);
  for (const auto& p : n.cloud.points) {
    for (int a = 0; a < 3; ++a) {
      EXPECT_GE(p[a], -1.0 - 1e-12);
      EXPECT_LE(p[a], 1.0 + 1e-12);
    }
  }
  const auto back = invert_transform(n.cloud, n.transform);
  for (std::size_t i = 0; i < c.points.size(); ++i) EXPECT_LT(distance(back.points[i], c.points[i]), 1e-9);
}

TEST(NormalizeCloud, PreservesDistanceRatios) {
  const auto c = random_cloud(50, 5);
  const auto n = normalize_cloud(c);
  const double r0 = distance(c.points[0], c.points[1]) / distance(c.points[2], c.points[3]);
  const double r1 = distance(n.cloud.points[0], n.cloud.points[1]) / distance(n.cloud.points[2], n.cloud.points[3]);
  EXPECT_NEAR(r0, r1, 1e-9);
}

TEST(NormalizeCloud, DegenerateCloud) {
  PointCloud c{{{1, 2, 3}, {1, 2, 3}}};
  try {
    normalize_cloud(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateCloud);
  }
}

TEST(NormalizeCloud, CorpusTransformCoversAllClouds) {
  std::vector<PointCloud> clouds{random_cloud(20, 1), random_cloud(20, 2)};
  for (auto& p : clouds[1].points) p = p * 3.0;
  const auto t = fit_cloud_transform(clouds);
  for (const auto& c : clouds) {
    for (const auto& p : apply_transform(c, t).points) {
      for (int a = 0; a < 3; ++a) EXPECT_LE(std::abs(p[a]), 1.0 + 1e-12);
    }
  }
}

TEST(NormalizeImages, ZeroMeanUnitStd) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<ImageBuffer> images(3, ImageBuffer{20, 20, std::vector<float>(400)});
  for (auto& im : images) {
    for (auto& v : im.pixels) v = u(rng);
  }
  const auto n = normalize_images(images);
  double sum = 0.0, sum_sq = 0.0, count = 0.0;
  for (const auto& im : n.images) {
    for (float v : im.pixels) {
      sum += v;
      sum_sq += static_cast<double>(v) * v;
      count += 1.0;
    }
  }
  const double mean = sum / count;
  EXPECT_NEAR(mean, 0.0, 1e-6);
  EXPECT_NEAR(std::sqrt(sum_sq / count - mean * mean), 1.0, 1e-6);
}

TEST(NormalizeImages, ConstantImagesHaveZeroVariance) {
  std::vector<ImageBuffer> images(2, ImageBuffer{16, 16, std::vector<float>(256, 0.5f)});
  try {
    normalize_images(images);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVariance);
  }
}

TEST(NormalizeImages, TestSetUsesTrainStatistics) {
  std::vector<ImageBuffer> train{ImageBuffer{16, 16, std::vector<float>(256, 0.0f)}};
  std::fill(train[0].pixels.begin(), train[0].pixels.begin() + 128, 1.0f);
  const auto stats = normalize_images(train).stats;
  EXPECT_DOUBLE_EQ(stats.mean, 0.5);
  EXPECT_DOUBLE_EQ(stats.std, 0.5);
  std::vector<ImageBuffer> test{ImageBuffer{16, 16, std::vector<float>(256, 1.0f)}};
  const auto out = apply_image_stats(test, stats);
  EXPECT_FLOAT_EQ(out[0].pixels[0], 1.0f);
}
