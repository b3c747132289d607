#include "anthro/scanner.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <omp.h>

#include "anthro/error.hpp"
#include "anthro/raycast.hpp"

namespace anthro {
namespace {

constexpr double kDegrees = std::numbers::pi / 180.0;

int thread_count(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

std::uint64_t pixel_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + index + 0xD1B54A32D192ED03ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

StructuredScan empty_scan(const Camera& camera) {
  camera.validate();
  StructuredScan scan;
  scan.width = camera.width;
  scan.height = camera.height;
  scan.camera = camera;
  scan.points.assign(static_cast<std::size_t>(camera.width) * camera.height, Vec3{});
  scan.valid.assign(scan.points.size(), 0);
  return scan;
}

ImageBuffer blank(const Camera& camera) {
  camera.validate();
  return ImageBuffer{camera.width, camera.height,
                     std::vector<float>(static_cast<std::size_t>(camera.width) * camera.height, 0.0f)};
}

}  // namespace

void Camera::validate() const {
  if (width < 16 || height < 16) throw Error(ErrorCode::InvalidArgument, "camera resolution below 16x16");
  if (projection == Projection::Perspective) {
    for (double fov : {hfov_degrees, vfov_degrees}) {
      if (!(fov > 0.0 && fov < 120.0)) throw Error(ErrorCode::InvalidArgument, "field of view outside (0, 120)");
    }
  } else if (!(ortho_width > 0.0 && ortho_height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "orthographic extent must be positive");
  }
  if (norm(cross(look_at - position, up)) == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "camera up is parallel to the view direction");
  }
}

Ray Camera::pixel_ray(int col, int row) const {
  const Vec3 forward = normalized(look_at - position);
  const Vec3 right = normalized(cross(forward, up));
  const Vec3 true_up = cross(right, forward);
  const double sx = 2.0 * (col + 0.5) / width - 1.0;
  const double sy = 1.0 - 2.0 * (row + 0.5) / height;
  if (projection == Projection::Orthographic) {
    return {position + right * (0.5 * ortho_width * sx) + true_up * (0.5 * ortho_height * sy), forward};
  }
  const Vec3 d = forward + right * (sx * std::tan(0.5 * hfov_degrees * kDegrees)) +
                 true_up * (sy * std::tan(0.5 * vfov_degrees * kDegrees));
  return {position, normalized(d)};
}

std::size_t StructuredScan::valid_count() const {
  std::size_t n = 0;
  for (auto v : valid) n += v;
  return n;
}

double ImageBuffer::sum() const {
  double total = 0.0;
  for (float p : pixels) total += p;
  return total;
}

StructuredScan depth_scan(const TriangleMesh& mesh, const Camera& camera, int jobs) {
  StructuredScan scan = empty_scan(camera);
  if (mesh.empty()) return scan;
  const RayCaster caster(mesh);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count(jobs))
  for (int row = 0; row < camera.height; ++row) {
    for (int col = 0; col < camera.width; ++col) {
      const Ray ray = camera.pixel_ray(col, row);
      if (auto hit = caster.cast(ray.origin, ray.direction)) {
        scan.points[scan.index(col, row)] = hit->point;
        scan.valid[scan.index(col, row)] = 1;
      }
    }
  }
  return scan;
}

StructuredScan depth_scan_reference(const TriangleMesh& mesh, const Camera& camera) {
  StructuredScan scan = empty_scan(camera);
  if (mesh.empty()) return scan;
  for (int row = 0; row < camera.height; ++row) {
    for (int col = 0; col < camera.width; ++col) {
      const Ray ray = camera.pixel_ray(col, row);
      if (auto hit = raycast(mesh, ray.origin, ray.direction)) {
        scan.points[scan.index(col, row)] = hit->point;
        scan.valid[scan.index(col, row)] = 1;
      }
    }
  }
  return scan;
}

StructuredScan add_noise(const StructuredScan& scan, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise sigma must be >= 0");
  StructuredScan out = scan;
  if (sigma == 0.0) return out;
  for (int row = 0; row < scan.height; ++row) {
    for (int col = 0; col < scan.width; ++col) {
      const auto i = scan.index(col, row);
      if (!scan.valid[i]) continue;
      std::mt19937_64 rng(pixel_seed(seed, i));
      std::normal_distribution<double> noise(0.0, sigma);
      const Ray ray = scan.camera.pixel_ray(col, row);
      out.points[i] = scan.points[i] + ray.direction * noise(rng);
    }
  }
  return out;
}

PointCloud merge_scans(std::span<const StructuredScan> scans) {
  PointCloud cloud;
  for (const auto& scan : scans) {
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
      if (scan.valid[i]) cloud.points.push_back(scan.points[i]);
    }
  }
  return cloud;
}

ImageBuffer render_silhouette(const TriangleMesh& mesh, const Camera& camera, int jobs) {
  ImageBuffer image = blank(camera);
  if (mesh.empty()) return image;
  const RayCaster caster(mesh);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count(jobs))
  for (int row = 0; row < camera.height; ++row) {
    for (int col = 0; col < camera.width; ++col) {
      const Ray ray = camera.pixel_ray(col, row);
      if (caster.cast(ray.origin, ray.direction)) {
        image.pixels[static_cast<std::size_t>(row) * camera.width + col] = 1.0f;
      }
    }
  }
  return image;
}

ImageBuffer render_grayscale(const TriangleMesh& mesh, const Camera& camera, int jobs) {
  ImageBuffer image = blank(camera);
  if (mesh.empty()) return image;
  const RayCaster caster(mesh);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count(jobs))
  for (int row = 0; row < camera.height; ++row) {
    for (int col = 0; col < camera.width; ++col) {
      const Ray ray = camera.pixel_ray(col, row);
      if (auto hit = caster.cast(ray.origin, ray.direction)) {
        const double shade = std::max(0.0, -dot(mesh.face_normal(hit->triangle), ray.direction));
        image.pixels[static_cast<std::size_t>(row) * camera.width + col] = static_cast<float>(shade);
      }
    }
  }
  return image;
}

void ScannerConfig::validate() const {
  if (azimuths.empty()) throw Error(ErrorCode::InvalidArgument, "scanner needs at least one viewpoint");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise sigma must be >= 0");
  if (!(distance > 0.0)) throw Error(ErrorCode::InvalidArgument, "camera distance must be positive");
  if (image_size < 16) throw Error(ErrorCode::InvalidArgument, "image size below 16");
}

std::vector<Camera> scan_cameras(const TriangleMesh& mesh, const ScannerConfig& cfg) {
  cfg.validate();
  Vec3 center;
  for (int a = 0; a < 3; ++a) {
    const auto [lo, hi] = axis_extent(mesh, static_cast<Axis>(a));
    center[a] = 0.5 * (lo + hi);
  }
  std::vector<Camera> cams;
  for (double az : cfg.azimuths) {
    Camera cam;
    cam.look_at = center;
    cam.position = center + Vec3{std::sin(az * kDegrees), 0.0, std::cos(az * kDegrees)} * cfg.distance;
    cam.hfov_degrees = cam.vfov_degrees = cfg.fov_degrees;
    cam.width = cfg.scan_width;
    cam.height = cfg.scan_height;
    cam.validate();
    cams.push_back(cam);
  }
  return cams;
}

Camera image_camera(const TriangleMesh& mesh, const ScannerConfig& cfg) {
  cfg.validate();
  const auto [xlo, xhi] = axis_extent(mesh, Axis::X);
  const auto [zlo, zhi] = axis_extent(mesh, Axis::Z);
  Camera cam;
  cam.projection = Projection::Orthographic;
  const double x = 0.5 * (xlo + xhi);
  cam.look_at = {x, cfg.image_center_y, 0.5 * (zlo + zhi)};
  cam.position = cam.look_at + Vec3{0.0, 0.0, zhi - zlo + cfg.distance};
  cam.ortho_width = cam.ortho_height = cfg.image_extent;
  cam.width = cam.height = cfg.image_size;
  return cam;
}

}  // namespace anthro
