#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "anthro/mesh.hpp"
#include "anthro/skeleton.hpp"

namespace anthro {

// ASCII OBJ: v and f lines, 1-based (or negative relative) indices.
// Only triangular faces are accepted.
TriangleMesh read_obj(const std::filesystem::path& path);
void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

// Binary little-endian PLY. Vertices are float32 on write; float32 or
// float64 accepted on read. Faces are uchar-counted int32 lists.
TriangleMesh read_ply_mesh(const std::filesystem::path& path);
void write_ply_mesh(const std::filesystem::path& path, const TriangleMesh& mesh);

// Vertex-only PLY used for point clouds.
std::vector<Vec3> read_ply_points(const std::filesystem::path& path);
void write_ply_points(const std::filesystem::path& path, std::span<const Vec3> points);

// Picks the reader from the extension (.obj or .ply).
TriangleMesh read_mesh(const std::filesystem::path& path);

// JSON object mapping joint name -> [x, y, z] in meters.
Skeleton read_skeleton_json(const std::filesystem::path& path);
void write_skeleton_json(const std::filesystem::path& path, const Skeleton& skeleton);

}  // namespace anthro
