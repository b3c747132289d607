#include "anthro/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "anthro/error.hpp"

namespace anthro {
namespace {

double squared_distance(const Vec3& a, const Vec3& b) {
  const Vec3 d = a - b;
  return dot(d, d);
}

void check_sample_count(const PointCloud& cloud, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  if (n > cloud.points.size()) {
    throw Error(ErrorCode::TooFewPoints, "requested " + std::to_string(n) + " points from a cloud of " +
                                             std::to_string(cloud.points.size()));
  }
}

std::size_t centroid_nearest(const std::vector<Vec3>& pts) {
  Vec3 c;
  for (const auto& p : pts) c += p;
  c = c / static_cast<double>(pts.size());
  std::size_t best = 0;
  double best_d = squared_distance(pts[0], c);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = squared_distance(pts[i], c);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

struct Candidate {
  double distance = -1.0;
  std::size_t index = 0;

  bool better_than(const Candidate& o) const {
    return distance > o.distance || (distance == o.distance && index < o.index);
  }
};

}  // namespace

std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud, std::size_t n, std::uint64_t seed,
                                               int jobs) {
  (void)seed;
  check_sample_count(cloud, n);
  const auto& pts = cloud.points;
  const std::size_t count = pts.size();
  std::vector<double> nearest(count, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> chosen{centroid_nearest(pts)};
  chosen.reserve(n);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  std::vector<Candidate> local(static_cast<std::size_t>(threads));

  while (chosen.size() < n) {
    const Vec3 last = pts[chosen.back()];
    std::fill(local.begin(), local.end(), Candidate{});
#pragma omp parallel num_threads(threads)
    {
      Candidate best;
#pragma omp for schedule(static)
      for (std::size_t i = 0; i < count; ++i) {
        nearest[i] = std::min(nearest[i], squared_distance(pts[i], last));
        const Candidate c{nearest[i], i};
        if (c.better_than(best)) best = c;
      }
      local[static_cast<std::size_t>(omp_get_thread_num())] = best;
    }
    Candidate best;
    for (const auto& c : local) {
      if (c.better_than(best)) best = c;
    }
    chosen.push_back(best.index);
  }
  return chosen;
}

std::vector<std::size_t> farthest_point_sample_reference(const PointCloud& cloud, std::size_t n) {
  check_sample_count(cloud, n);
  const auto& pts = cloud.points;
  std::vector<std::size_t> chosen{centroid_nearest(pts)};
  std::vector<double> nearest(pts.size(), std::numeric_limits<double>::infinity());
  while (chosen.size() < n) {
    const Vec3& last = pts[chosen.back()];
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(pts[i], last));
      if (nearest[i] > best_d) {
        best_d = nearest[i];
        best = i;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

PointCloud subset(const PointCloud& cloud, std::span<const std::size_t> indices) {
  PointCloud out;
  out.points.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= cloud.points.size()) throw Error(ErrorCode::InvalidArgument, "subset index out of range");
    out.points.push_back(cloud.points[i]);
  }
  return out;
}

CloudTransform fit_cloud_transform(std::span<const PointCloud> clouds) {
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -lo;
  bool any = false;
  for (const auto& cloud : clouds) {
    for (const auto& p : cloud.points) {
      any = true;
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], p[a]);
        hi[a] = std::max(hi[a], p[a]);
      }
    }
  }
  if (!any) throw Error(ErrorCode::DegenerateCloud, "cannot normalize an empty cloud");
  double half = 0.0;
  for (int a = 0; a < 3; ++a) half = std::max(half, 0.5 * (hi[a] - lo[a]));
  if (!(half > 0.0) || !std::isfinite(half)) {
    throw Error(ErrorCode::DegenerateCloud, "cloud has zero extent");
  }
  return {(lo + hi) * 0.5, 1.0 / half};
}

PointCloud apply_transform(const PointCloud& cloud, const CloudTransform& t) {
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) out.points.push_back(t.apply(p));
  return out;
}

PointCloud invert_transform(const PointCloud& cloud, const CloudTransform& t) {
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) out.points.push_back(t.invert(p));
  return out;
}

NormalizedCloud normalize_cloud(const PointCloud& cloud) {
  const auto t = fit_cloud_transform(std::span<const PointCloud>(&cloud, 1));
  return {apply_transform(cloud, t), t};
}

ImageStats fit_image_stats(std::span<const ImageBuffer> images) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& im : images) {
    for (float v : im.pixels) sum += v;
    count += im.pixels.size();
  }
  if (count == 0) throw Error(ErrorCode::ZeroVariance, "no pixels to normalize");
  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (const auto& im : images) {
    for (float v : im.pixels) ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(count));
  if (!(sd > 0.0)) throw Error(ErrorCode::ZeroVariance, "images have zero pixel variance");
  return {mean, sd};
}

std::vector<ImageBuffer> apply_image_stats(std::span<const ImageBuffer> images, const ImageStats& stats) {
  std::vector<ImageBuffer> out(images.begin(), images.end());
  for (auto& im : out) {
    for (float& v : im.pixels) v = static_cast<float>((v - stats.mean) / stats.std);
  }
  return out;
}

NormalizedImages normalize_images(std::span<const ImageBuffer> images) {
  const auto stats = fit_image_stats(images);
  return {apply_image_stats(images, stats), stats};
}

}  // namespace anthro
