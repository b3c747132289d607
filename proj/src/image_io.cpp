#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "anthro/error.hpp"
#include "anthro/scanner.hpp"

namespace anthro {
namespace {

constexpr std::array<char, 8> kScanMagic{'A', 'N', 'S', 'C', 'A', 'N', '0', '1'};

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return in;
}

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw Error(ErrorCode::ParseError, "truncated file " + path.string());
  }
  return value;
}

// Reads the "P? width height [maxval]" header; comments start with '#'.
std::array<int, 3> read_netpbm_header(std::istream& in, const std::string& magic, bool has_max,
                                      const std::filesystem::path& path) {
  auto token = [&]() {
    std::string t;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(c);
    }
    return t;
  };
  if (token() != magic) throw Error(ErrorCode::ParseError, "expected " + magic + " in " + path.string());
  std::array<int, 3> v{0, 0, 1};
  for (int i = 0; i < (has_max ? 3 : 2); ++i) {
    try {
      v[i] = std::stoi(token());
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad header in " + path.string());
    }
  }
  if (v[0] <= 0 || v[1] <= 0 || v[2] <= 0 || v[2] > 255) {
    throw Error(ErrorCode::ParseError, "bad header in " + path.string());
  }
  return v;
}

}  // namespace

void write_structured_scan(const std::filesystem::path& path, const StructuredScan& scan) {
  auto out = open_out(path);
  out.write(kScanMagic.data(), kScanMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(scan.width));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(scan.height));
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    for (int a = 0; a < 3; ++a) put<float>(out, scan.valid[i] ? static_cast<float>(scan.points[i][a]) : 0.0f);
  }
  std::vector<std::uint8_t> mask((scan.valid.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < scan.valid.size(); ++i) {
    if (scan.valid[i]) mask[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  out.write(reinterpret_cast<const char*>(mask.data()), static_cast<std::streamsize>(mask.size()));
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

StructuredScan read_structured_scan(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kScanMagic) {
    throw Error(ErrorCode::ParseError, "not a scan file: " + path.string());
  }
  StructuredScan scan;
  scan.width = static_cast<int>(get<std::uint32_t>(in, path));
  scan.height = static_cast<int>(get<std::uint32_t>(in, path));
  if (scan.width <= 0 || scan.height <= 0 || scan.width > 1 << 15 || scan.height > 1 << 15) {
    throw Error(ErrorCode::ParseError, "bad scan dimensions in " + path.string());
  }
  const std::size_t n = static_cast<std::size_t>(scan.width) * scan.height;
  scan.points.resize(n);
  for (auto& p : scan.points) {
    for (int a = 0; a < 3; ++a) p[a] = get<float>(in, path);
  }
  std::vector<std::uint8_t> mask((n + 7) / 8);
  if (!in.read(reinterpret_cast<char*>(mask.data()), static_cast<std::streamsize>(mask.size()))) {
    throw Error(ErrorCode::ParseError, "truncated file " + path.string());
  }
  scan.valid.resize(n);
  for (std::size_t i = 0; i < n; ++i) scan.valid[i] = (mask[i / 8] >> (i % 8)) & 1u;
  scan.camera.width = scan.width;
  scan.camera.height = scan.height;
  return scan;
}

void write_pgm(const std::filesystem::path& path, const ImageBuffer& image) {
  auto out = open_out(path);
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  std::vector<std::uint8_t> bytes(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), bytes.begin(), [](float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
  });
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void write_pbm(const std::filesystem::path& path, const ImageBuffer& image) {
  auto out = open_out(path);
  out << "P4\n" << image.width << ' ' << image.height << "\n";
  const int stride = (image.width + 7) / 8;
  std::vector<std::uint8_t> row(stride);
  for (int r = 0; r < image.height; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int c = 0; c < image.width; ++c) {
      if (image.at(c, r) >= 0.5f) row[c / 8] |= static_cast<std::uint8_t>(0x80u >> (c % 8));
    }
    out.write(reinterpret_cast<const char*>(row.data()), stride);
  }
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

ImageBuffer read_pgm(const std::filesystem::path& path) {
  auto in = open_in(path);
  const auto [w, h, maxval] = read_netpbm_header(in, "P5", true, path);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    throw Error(ErrorCode::ParseError, "truncated file " + path.string());
  }
  ImageBuffer image{w, h, std::vector<float>(bytes.size())};
  for (std::size_t i = 0; i < bytes.size(); ++i) image.pixels[i] = static_cast<float>(bytes[i]) / maxval;
  return image;
}

ImageBuffer read_pbm(const std::filesystem::path& path) {
  auto in = open_in(path);
  const auto [w, h, unused] = read_netpbm_header(in, "P4", false, path);
  (void)unused;
  const int stride = (w + 7) / 8;
  std::vector<std::uint8_t> row(stride);
  ImageBuffer image{w, h, std::vector<float>(static_cast<std::size_t>(w) * h)};
  for (int r = 0; r < h; ++r) {
    if (!in.read(reinterpret_cast<char*>(row.data()), stride)) {
      throw Error(ErrorCode::ParseError, "truncated file " + path.string());
    }
    for (int c = 0; c < w; ++c) {
      image.pixels[static_cast<std::size_t>(r) * w + c] = (row[c / 8] >> (7 - c % 8)) & 1u ? 1.0f : 0.0f;
    }
  }
  return image;
}

}  // namespace anthro
