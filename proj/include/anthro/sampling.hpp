#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "anthro/scanner.hpp"

namespace anthro {

// Greedy farthest point sampling. Starts at the point nearest the centroid,
// then repeatedly takes the point farthest from the chosen set. Ties go to
// the lower index, so the result is fully determined by the input and
// `seed` never changes it. Distance updates run on `jobs` OpenMP threads
// (0 = runtime default); the output does not depend on `jobs`.
std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud, std::size_t n,
                                               std::uint64_t seed = 0, int jobs = 0);
// Serial O(n * N) reference with the same selection rule.
std::vector<std::size_t> farthest_point_sample_reference(const PointCloud& cloud, std::size_t n);

PointCloud subset(const PointCloud& cloud, std::span<const std::size_t> indices);

// p' = (p - translation) * scale
struct CloudTransform {
  Vec3 translation;
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return (p - translation) * scale; }
  Vec3 invert(const Vec3& p) const { return p / scale + translation; }
};

// Bounding-box center and half of the largest box side over all given
// clouds. DegenerateCloud if that extent is zero.
CloudTransform fit_cloud_transform(std::span<const PointCloud> clouds);
PointCloud apply_transform(const PointCloud& cloud, const CloudTransform& t);
PointCloud invert_transform(const PointCloud& cloud, const CloudTransform& t);

struct NormalizedCloud {
  PointCloud cloud;
  CloudTransform transform;
};

// Per-cloud normalization into [-1, 1]^3 with one uniform scale.
NormalizedCloud normalize_cloud(const PointCloud& cloud);

struct ImageStats {
  double mean = 0.0;
  double std = 1.0;
};

// Scalar mean and population std over every pixel of every image.
// ZeroVariance when all pixels are equal.
ImageStats fit_image_stats(std::span<const ImageBuffer> images);
// Pixel values become (v - mean) / std.
std::vector<ImageBuffer> apply_image_stats(std::span<const ImageBuffer> images, const ImageStats& stats);

struct NormalizedImages {
  std::vector<ImageBuffer> images;
  ImageStats stats;
};

NormalizedImages normalize_images(std::span<const ImageBuffer> images);

}  // namespace anthro
