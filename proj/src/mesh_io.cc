/*
 * Copyright 2026 The dynbps Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dynbps/mesh_io.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "dynbps/errors.h"

namespace dynbps {
namespace {

struct Token {
  std::string_view text;
  int line;
  int column;
};

// Splits `line` on blanks, remembering 1-based columns.
std::vector<Token> Tokenize(std::string_view line, int line_number) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    tokens.push_back({line.substr(start, i - start), line_number,
                      static_cast<int>(start) + 1});
  }
  return tokens;
}

// Calls fn(line_text, line_number) for each line, without the terminator.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_number);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

double ParseReal(const Token& token) {
  double value = 0.0;
  const char* first = token.text.data();
  const char* last = first + token.text.size();
  if (!token.text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("expected a finite number, got '" +
                         std::string(token.text) + "'",
                     token.line, token.column);
  }
  return value;
}

long ParseIndex(std::string_view text, const Token& token) {
  long value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || value == 0) {
    throw ParseError("malformed face index '" + std::string(token.text) + "'",
                     token.line, token.column);
  }
  return value;
}

struct PendingIndex {
  long index;  // 1-based, already resolved if it was negative
  int line;
  int column;
};

class VertexWelder {
 public:
  explicit VertexWelder(TriangleMesh& mesh) : mesh_(mesh) {}

  int Add(const Vec3& v) {
    auto [it, inserted] = index_.emplace(
        std::array<double, 3>{v.x(), v.y(), v.z()},
        static_cast<int>(mesh_.vertices.size()));
    if (inserted) mesh_.vertices.push_back(v);
    return it->second;
  }

 private:
  TriangleMesh& mesh_;
  std::map<std::array<double, 3>, int> index_;
};

TriangleMesh ParseAsciiStl(std::string_view text) {
  std::vector<Token> tokens;
  ForEachLine(text, [&](std::string_view line, int number) {
    for (const Token& t : Tokenize(line, number)) tokens.push_back(t);
  });

  std::size_t pos = 0;
  auto next = [&](const char* what) -> const Token& {
    if (pos >= tokens.size()) {
      const int line = tokens.empty() ? 1 : tokens.back().line;
      throw ParseError(std::string("unexpected end of file, expected ") + what,
                       line, 1);
    }
    return tokens[pos++];
  };
  auto expect = [&](std::string_view keyword) {
    const Token& t = next(std::string(keyword).c_str());
    if (t.text != keyword) {
      throw ParseError("expected '" + std::string(keyword) + "', got '" +
                           std::string(t.text) + "'",
                       t.line, t.column);
    }
  };

  expect("solid");
  // The solid name runs to the end of its line.
  const int header_line = tokens[0].line;
  while (pos < tokens.size() && tokens[pos].line == header_line) ++pos;

  TriangleMesh mesh;
  VertexWelder welder(mesh);
  while (true) {
    const Token& t = next("'facet' or 'endsolid'");
    if (t.text == "endsolid") break;
    if (t.text != "facet") {
      throw ParseError("expected 'facet' or 'endsolid', got '" +
                           std::string(t.text) + "'",
                       t.line, t.column);
    }
    expect("normal");
    for (int i = 0; i < 3; ++i) ParseReal(next("normal component"));
    expect("outer");
    expect("loop");
    Triangle tri;
    for (int c = 0; c < 3; ++c) {
      expect("vertex");
      Vec3 v;
      for (int i = 0; i < 3; ++i) v[i] = ParseReal(next("vertex coordinate"));
      tri[c] = welder.Add(v);
    }
    expect("endloop");
    expect("endfacet");
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

template <typename T>
T ReadLittleEndian(const char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* bytes = reinterpret_cast<unsigned char*>(&value);
    std::reverse(bytes, bytes + sizeof(T));
  }
  return value;
}

template <typename T>
void AppendLittleEndian(std::string& out, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* bytes = reinterpret_cast<unsigned char*>(&value);
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

constexpr std::size_t kStlHeaderSize = 84;
constexpr std::size_t kStlFacetSize = 50;

TriangleMesh ParseBinaryStl(std::string_view bytes) {
  if (bytes.size() < kStlHeaderSize) {
    throw ParseError("truncated binary STL: " + std::to_string(bytes.size()) +
                     " bytes, header needs 84");
  }
  const std::uint32_t declared =
      ReadLittleEndian<std::uint32_t>(bytes.data() + 80);
  const std::size_t payload = bytes.size() - kStlHeaderSize;
  const std::size_t expected = std::size_t{declared} * kStlFacetSize;
  if (payload < expected) {
    throw ParseError("truncated binary STL: header declares " +
                     std::to_string(declared) + " facets, payload holds " +
                     std::to_string(payload / kStlFacetSize));
  }
  if (payload != expected) {
    throw ParseError("binary STL facet count mismatch: header declares " +
                     std::to_string(declared) + " facets, payload has " +
                     std::to_string(payload) + " bytes");
  }

  TriangleMesh mesh;
  VertexWelder welder(mesh);
  mesh.triangles.reserve(declared);
  for (std::uint32_t f = 0; f < declared; ++f) {
    // Skip the 12-byte normal; the trailing 2-byte attribute is unused.
    const char* facet = bytes.data() + kStlHeaderSize + f * kStlFacetSize + 12;
    Triangle tri;
    for (int c = 0; c < 3; ++c) {
      Vec3 v;
      for (int i = 0; i < 3; ++i) {
        v[i] = ReadLittleEndian<float>(facet + 4 * (3 * c + i));
      }
      if (!v.allFinite()) {
        throw ParseError("non-finite vertex in facet " + std::to_string(f));
      }
      tri[c] = welder.Add(v);
    }
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

bool LooksBinary(std::string_view bytes) {
  return std::any_of(bytes.begin(), bytes.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u == 0 || u > 127;
  });
}

std::string Lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

TriangleMesh ParseObj(std::string_view text) {
  TriangleMesh mesh;
  std::vector<std::array<PendingIndex, 3>> faces;

  ForEachLine(text, [&](std::string_view line, int number) {
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const std::vector<Token> tokens = Tokenize(line, number);
    if (tokens.empty()) return;
    const std::string_view keyword = tokens[0].text;

    if (keyword == "v") {
      if (tokens.size() < 4) {
        throw ParseError("vertex record needs 3 coordinates", number,
                         tokens.back().column);
      }
      mesh.vertices.emplace_back(ParseReal(tokens[1]), ParseReal(tokens[2]),
                                 ParseReal(tokens[3]));
    } else if (keyword == "f") {
      if (tokens.size() < 4) {
        throw ParseError("face record needs at least 3 vertices", number,
                         tokens.back().column);
      }
      std::vector<PendingIndex> corners;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        // Only the position index before the first '/' is used.
        const std::string_view position = t.text.substr(0, t.text.find('/'));
        long index = ParseIndex(position, t);
        if (index < 0) {
          index += static_cast<long>(mesh.vertices.size()) + 1;
          if (index < 1) {
            throw ParseError("relative index '" + std::string(t.text) +
                                 "' points before the first vertex",
                             number, t.column);
          }
        }
        corners.push_back({index, number, t.column});
      }
      for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
        faces.push_back({corners[0], corners[i], corners[i + 1]});
      }
    }
  });

  const long num_vertices = static_cast<long>(mesh.vertices.size());
  for (const auto& face : faces) {
    Triangle tri;
    for (int c = 0; c < 3; ++c) {
      if (face[c].index > num_vertices) {
        throw ParseError("vertex index " + std::to_string(face[c].index) +
                             " out of range (" + std::to_string(num_vertices) +
                             " vertices)",
                         face[c].line, face[c].column);
      }
      tri[c] = static_cast<int>(face[c].index - 1);
    }
    mesh.triangles.push_back(tri);
  }

  if (mesh.vertices.size() < 4) {
    throw ParseError("mesh has " + std::to_string(mesh.vertices.size()) +
                     " vertices, at least 4 required");
  }
  if (mesh.triangles.size() < 4) {
    throw ParseError("mesh has " + std::to_string(mesh.triangles.size()) +
                     " triangles, at least 4 required");
  }
  return mesh;
}

TriangleMesh ParseStl(std::string_view bytes) {
  if (bytes.substr(0, 5) == "solid") {
    try {
      return ParseAsciiStl(bytes);
    } catch (const ParseError&) {
      // Binary files may also start with "solid" in their header.
      if (!LooksBinary(bytes)) throw;
    }
  }
  return ParseBinaryStl(bytes);
}

TriangleMesh LoadMesh(const std::string& path) {
  const std::string data = ReadFile(path);
  const std::string lower = Lowercase(path);
  TriangleMesh mesh;
  if (lower.ends_with(".obj")) {
    mesh = ParseObj(data);
  } else if (lower.ends_with(".stl")) {
    mesh = ParseStl(data);
  } else {
    throw ParseError("unsupported mesh format (expected .obj or .stl): " +
                     path);
  }
  Validate(mesh);
  return mesh;
}

std::string WriteObj(const TriangleMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  for (const Vec3& v : mesh.vertices) {
    out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const Triangle& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  return out.str();
}

std::string WriteBinaryStl(const TriangleMesh& mesh) {
  std::string out(80, '\0');
  const std::string banner = "binary stl written by dynbps";
  out.replace(0, banner.size(), banner);
  AppendLittleEndian(out, static_cast<std::uint32_t>(mesh.num_triangles()));
  for (std::size_t f = 0; f < mesh.num_triangles(); ++f) {
    const Vec3& a = mesh.corner(f, 0);
    const Vec3 normal =
        (mesh.corner(f, 1) - a).cross(mesh.corner(f, 2) - a).normalized();
    for (int i = 0; i < 3; ++i) {
      AppendLittleEndian(out, static_cast<float>(normal[i]));
    }
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < 3; ++i) {
        AppendLittleEndian(out, static_cast<float>(mesh.corner(f, c)[i]));
      }
    }
    AppendLittleEndian(out, std::uint16_t{0});
  }
  return out;
}

std::string WriteAsciiStl(const TriangleMesh& mesh, std::string_view name) {
  std::ostringstream out;
  out.precision(17);
  out << "solid " << name << '\n';
  for (std::size_t f = 0; f < mesh.num_triangles(); ++f) {
    const Vec3& a = mesh.corner(f, 0);
    const Vec3 n =
        (mesh.corner(f, 1) - a).cross(mesh.corner(f, 2) - a).normalized();
    out << "  facet normal " << n.x() << ' ' << n.y() << ' ' << n.z() << '\n'
        << "    outer loop\n";
    for (int c = 0; c < 3; ++c) {
      const Vec3& v = mesh.corner(f, c);
      out << "      vertex " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    }
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid " << name << '\n';
  return out.str();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path);
  return buffer.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error while writing " + path);
}

}  // namespace dynbps
