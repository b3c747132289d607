#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "anthro/mesh.hpp"

namespace anthro {

enum class Projection { Perspective, Orthographic };

struct Ray {
  Vec3 origin;
  Vec3 direction;
};

struct Camera {
  Vec3 position{0.0, 1.0, 2.5};
  Vec3 look_at{0.0, 1.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  double hfov_degrees = 50.0;
  double vfov_degrees = 50.0;
  int width = 256;
  int height = 256;
  Projection projection = Projection::Perspective;
  double ortho_width = 2.5;   // meters, orthographic only
  double ortho_height = 2.5;

  void validate() const;  // throws InvalidArgument
  // Ray through the center of pixel (col, row); row 0 is the top of the image.
  Ray pixel_ray(int col, int row) const;
};

struct StructuredScan {
  int width = 0;
  int height = 0;
  std::vector<Vec3> points;          // row-major, zero where invalid
  std::vector<std::uint8_t> valid;   // 1 where a ray hit
  Camera camera;

  std::size_t valid_count() const;
  std::size_t index(int col, int row) const { return static_cast<std::size_t>(row) * width + col; }
};

struct PointCloud {
  std::vector<Vec3> points;
};

// Single channel, row-major, values in [0, 1].
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;

  float at(int col, int row) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  double sum() const;
};

// One ray per pixel against a BVH; rows are split across `jobs` OpenMP
// threads (0 = runtime default). Output does not depend on `jobs`.
StructuredScan depth_scan(const TriangleMesh& mesh, const Camera& camera, int jobs = 0);
// Serial brute-force reference of depth_scan, for tests.
StructuredScan depth_scan_reference(const TriangleMesh& mesh, const Camera& camera);

// Moves every valid point by N(0, sigma^2) along its camera ray. Each
// pixel draws from its own generator seeded by (seed, pixel index).
StructuredScan add_noise(const StructuredScan& scan, double sigma, std::uint64_t seed);

// Valid points of every scan, row-major within a scan, scans in order.
PointCloud merge_scans(std::span<const StructuredScan> scans);

ImageBuffer render_silhouette(const TriangleMesh& mesh, const Camera& camera, int jobs = 0);
// Lambertian headlight: max(0, -n . d) per pixel, background 0.
ImageBuffer render_grayscale(const TriangleMesh& mesh, const Camera& camera, int jobs = 0);

struct ScannerConfig {
  int scan_width = 256;
  int scan_height = 256;
  double fov_degrees = 50.0;
  double distance = 2.5;                      // meters from the body's bounding-box center
  std::vector<double> azimuths{0.0, 180.0};   // degrees about Y; 0 looks at the front (+Z side)
  double noise_sigma = 0.002;                 // meters along the ray
  int image_size = 200;
  double image_extent = 2.5;                  // meters covered by the orthographic image
  double image_center_y = 1.2;

  void validate() const;
};

std::vector<Camera> scan_cameras(const TriangleMesh& mesh, const ScannerConfig& cfg);
Camera image_camera(const TriangleMesh& mesh, const ScannerConfig& cfg);

// Binary scan file: 8-byte magic, uint32 width, uint32 height, float32 XYZ
// grid (zeros where invalid), then a row-major validity bitmask (LSB first).
void write_structured_scan(const std::filesystem::path& path, const StructuredScan& scan);
StructuredScan read_structured_scan(const std::filesystem::path& path);

// P5 (8-bit) and P4 (1 = hit).
void write_pgm(const std::filesystem::path& path, const ImageBuffer& image);
void write_pbm(const std::filesystem::path& path, const ImageBuffer& image);
ImageBuffer read_pgm(const std::filesystem::path& path);
ImageBuffer read_pbm(const std::filesystem::path& path);

}  // namespace anthro
