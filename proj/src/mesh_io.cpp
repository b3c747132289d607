#include "anthro/mesh_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "anthro/error.hpp"

namespace anthro {
namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume little-endian hosts");

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, path.string() + ": " + what);
}

template <typename T>
T read_raw(std::istream& in, const std::filesystem::path& path) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) parse_fail(path, "truncated body");
  return value;
}

template <typename T>
void write_raw(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

struct PlyProperty {
  std::string name;
  std::string type;
  bool is_list = false;
  std::string count_type;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

std::size_t type_size(const std::string& t, const std::filesystem::path& path) {
  if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
  if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
  if (t == "int" || t == "uint" || t == "float" || t == "int32" || t == "uint32" || t == "float32") return 4;
  if (t == "double" || t == "float64") return 8;
  parse_fail(path, "unknown PLY type " + t);
}

double read_scalar(std::istream& in, const std::string& t, const std::filesystem::path& path) {
  if (t == "char" || t == "int8") return read_raw<std::int8_t>(in, path);
  if (t == "uchar" || t == "uint8") return read_raw<std::uint8_t>(in, path);
  if (t == "short" || t == "int16") return read_raw<std::int16_t>(in, path);
  if (t == "ushort" || t == "uint16") return read_raw<std::uint16_t>(in, path);
  if (t == "int" || t == "int32") return read_raw<std::int32_t>(in, path);
  if (t == "uint" || t == "uint32") return read_raw<std::uint32_t>(in, path);
  if (t == "float" || t == "float32") return read_raw<float>(in, path);
  if (t == "double" || t == "float64") return read_raw<double>(in, path);
  parse_fail(path, "unknown PLY type " + t);
}

TriangleMesh read_ply(const std::filesystem::path& path, bool need_faces) {
  auto in = open_in(path, std::ios::binary);
  std::string line;
  if (!std::getline(in, line) || line != "ply") parse_fail(path, "missing ply magic");
  std::vector<PlyElement> elements;
  bool binary_le = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      binary_le = fmt == "binary_little_endian";
    } else if (word == "element") {
      auto& e = elements.emplace_back();
      ls >> e.name >> e.count;
    } else if (word == "property") {
      if (elements.empty()) parse_fail(path, "property before element");
      PlyProperty p;
      ls >> p.type;
      if (p.type == "list") {
        p.is_list = true;
        ls >> p.count_type >> p.type;
      }
      ls >> p.name;
      elements.back().properties.push_back(p);
    } else if (word == "end_header") {
      break;
    }
  }
  if (!binary_le) parse_fail(path, "only binary_little_endian PLY is supported");

  TriangleMesh mesh;
  for (const auto& e : elements) {
    if (e.name == "vertex") {
      int xyz[3] = {-1, -1, -1};
      for (std::size_t i = 0; i < e.properties.size(); ++i) {
        const auto& n = e.properties[i].name;
        if (n == "x") xyz[0] = static_cast<int>(i);
        if (n == "y") xyz[1] = static_cast<int>(i);
        if (n == "z") xyz[2] = static_cast<int>(i);
      }
      if (xyz[0] < 0 || xyz[1] < 0 || xyz[2] < 0) parse_fail(path, "vertex lacks x/y/z");
      mesh.vertices.reserve(e.count);
      for (std::size_t v = 0; v < e.count; ++v) {
        Vec3 p;
        for (std::size_t i = 0; i < e.properties.size(); ++i) {
          const auto& prop = e.properties[i];
          if (prop.is_list) parse_fail(path, "list property on vertex");
          const double value = read_scalar(in, prop.type, path);
          for (int a = 0; a < 3; ++a) {
            if (xyz[a] == static_cast<int>(i)) p[a] = value;
          }
        }
        mesh.vertices.push_back(p);
      }
    } else if (e.name == "face") {
      for (std::size_t f = 0; f < e.count; ++f) {
        for (const auto& prop : e.properties) {
          if (!prop.is_list) {
            in.ignore(static_cast<std::streamsize>(type_size(prop.type, path)));
            continue;
          }
          const auto n = static_cast<std::size_t>(read_scalar(in, prop.count_type, path));
          std::vector<std::uint32_t> idx(n);
          for (auto& i : idx) i = static_cast<std::uint32_t>(read_scalar(in, prop.type, path));
          if (prop.name != "vertex_indices" && prop.name != "vertex_index") continue;
          if (n != 3) parse_fail(path, "non-triangle face " + std::to_string(f));
          mesh.triangles.push_back({idx[0], idx[1], idx[2]});
        }
      }
    } else {
      for (std::size_t k = 0; k < e.count; ++k) {
        for (const auto& prop : e.properties) {
          if (prop.is_list) {
            const auto n = static_cast<std::size_t>(read_scalar(in, prop.count_type, path));
            in.ignore(static_cast<std::streamsize>(n * type_size(prop.type, path)));
          } else {
            in.ignore(static_cast<std::streamsize>(type_size(prop.type, path)));
          }
        }
      }
    }
  }
  if (need_faces) {
    for (const auto& t : mesh.triangles) {
      for (auto i : t) {
        if (i >= mesh.vertices.size()) parse_fail(path, "face index out of range");
      }
    }
  }
  return mesh;
}

void write_ply(const std::filesystem::path& path, std::span<const Vec3> points,
               std::span<const Triangle> faces) {
  auto out = open_out(path, std::ios::binary);
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << points.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n";
  if (!faces.empty()) {
    out << "element face " << faces.size() << "\nproperty list uchar int vertex_indices\n";
  }
  out << "end_header\n";
  for (const auto& p : points) {
    write_raw(out, static_cast<float>(p.x));
    write_raw(out, static_cast<float>(p.y));
    write_raw(out, static_cast<float>(p.z));
  }
  for (const auto& f : faces) {
    write_raw(out, static_cast<std::uint8_t>(3));
    for (auto i : f) write_raw(out, static_cast<std::int32_t>(i));
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace

TriangleMesh read_obj(const std::filesystem::path& path) {
  auto in = open_in(path);
  TriangleMesh mesh;
  std::string line;
  std::size_t line_no = 0;
  auto resolve = [&](const std::string& token) -> std::uint32_t {
    const auto slash = token.find('/');
    long idx = 0;
    try {
      idx = std::stol(token.substr(0, slash));
    } catch (const std::exception&) {
      parse_fail(path, "line " + std::to_string(line_no) + ": bad index '" + token + "'");
    }
    const long n = static_cast<long>(mesh.vertices.size());
    const long zero_based = idx > 0 ? idx - 1 : n + idx;
    if (idx == 0 || zero_based < 0 || zero_based >= n) {
      parse_fail(path, "line " + std::to_string(line_no) + ": index out of range");
    }
    return static_cast<std::uint32_t>(zero_based);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) parse_fail(path, "line " + std::to_string(line_no) + ": bad vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (tokens.size() != 3) {
        parse_fail(path, "line " + std::to_string(line_no) + ": only triangular faces are supported");
      }
      mesh.triangles.push_back({resolve(tokens[0]), resolve(tokens[1]), resolve(tokens[2])});
    }
  }
  if (mesh.vertices.empty()) parse_fail(path, "no vertices");
  return mesh;
}

void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
  auto out = open_out(path);
  char buf[96];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

TriangleMesh read_ply_mesh(const std::filesystem::path& path) { return read_ply(path, true); }

void write_ply_mesh(const std::filesystem::path& path, const TriangleMesh& mesh) {
  write_ply(path, mesh.vertices, mesh.triangles);
}

std::vector<Vec3> read_ply_points(const std::filesystem::path& path) {
  return read_ply(path, false).vertices;
}

void write_ply_points(const std::filesystem::path& path, std::span<const Vec3> points) {
  write_ply(path, points, {});
}

TriangleMesh read_mesh(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".obj" || ext == ".OBJ") return read_obj(path);
  if (ext == ".ply" || ext == ".PLY") return read_ply_mesh(path);
  throw Error(ErrorCode::ParseError, path.string() + ": unsupported mesh extension");
}

Skeleton read_skeleton_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(path, e.what());
  }
  if (!doc.is_object()) parse_fail(path, "skeleton must be a JSON object");
  std::map<std::string, Vec3> named;
  for (const auto& [name, value] : doc.items()) {
    if (!value.is_array() || value.size() != 3) parse_fail(path, "joint " + name + " is not [x,y,z]");
    try {
      named[name] = Vec3{value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
    } catch (const nlohmann::json::exception&) {
      parse_fail(path, "joint " + name + " has non-numeric coordinates");
    }
  }
  return Skeleton::from_map(named);
}

void write_skeleton_json(const std::filesystem::path& path, const Skeleton& skeleton) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < kJointCount; ++i) {
    const auto& p = skeleton.joints[i];
    doc[std::string(joint_name(static_cast<Joint>(i)))] = {p.x, p.y, p.z};
  }
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace anthro
