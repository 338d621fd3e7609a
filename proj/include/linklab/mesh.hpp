#pragma once

// Plain-text OBJ export of an n = 3 link: the components as closed
// polylines, the balls B1, B2, the half ball B3' and the membrane D2 as
// triangle meshes.

#include "linklab/catalog.hpp"
#include "linklab/crossing.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

namespace linklab {

struct Mesh {
  std::string name;
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> lines;  // 0-based vertex indices
  std::vector<std::array<int, 3>> faces;
};

inline std::string to_obj(const Mesh& mesh) {
  std::string out = "o " + mesh.name + "\n";
  char buf[96];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v(0), v(1), v(2));
    out += buf;
  }
  for (const auto& line : mesh.lines) {
    out += "l";
    for (int k : line) out += " " + std::to_string(k + 1);
    out += "\n";
  }
  for (const auto& f : mesh.faces) {
    std::snprintf(buf, sizeof buf, "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
    out += buf;
  }
  return out;
}

inline Mesh polyline_mesh(const std::string& name, const EmbeddedSphere& circle, int resolution) {
  Mesh m{name, {}, {}, {}};
  std::vector<int> line;
  for (int s = 0; s < resolution; ++s) {
    m.vertices.push_back(loop_point(circle, static_cast<double>(s) / resolution));
    line.push_back(s);
  }
  line.push_back(0);
  m.lines.push_back(std::move(line));
  return m;
}

/// Polar grid over a 2-dimensional ball patch; a half-ball patch covers the
/// angles [0, pi] only.
inline Mesh disk_mesh(const std::string& name, const Patch& patch, int resolution) {
  const bool half = patch.domain == Domain::half_ball;
  const int rings = std::max(2, resolution / 4);
  const int segments = half ? resolution / 2 + 1 : resolution;
  const double sweep = half ? std::numbers::pi / (segments - 1) : 2.0 * std::numbers::pi / segments;
  Mesh m{name, {}, {}, {}};
  m.vertices.push_back(patch.eval(Vec::Zero(2)));
  auto index = [&](int ring, int seg) { return 1 + (ring - 1) * segments + (half ? seg : seg % segments); };
  for (int ring = 1; ring <= rings; ++ring) {
    const double rho = static_cast<double>(ring) / rings;
    for (int seg = 0; seg < segments; ++seg) {
      Vec q(2);
      q << rho * std::cos(seg * sweep), rho * std::sin(seg * sweep);
      if (half) q(1) = std::abs(q(1));
      m.vertices.push_back(patch.eval(q));
    }
  }
  const int spans = half ? segments - 1 : segments;
  for (int seg = 0; seg < spans; ++seg) m.faces.push_back({0, index(1, seg), index(1, seg + 1)});
  for (int ring = 1; ring < rings; ++ring) {
    for (int seg = 0; seg < spans; ++seg) {
      const int a = index(ring, seg);
      const int b = index(ring, seg + 1);
      const int c = index(ring + 1, seg + 1);
      const int d = index(ring + 1, seg);
      m.faces.push_back({a, d, c});
      m.faces.push_back({a, c, b});
    }
  }
  return m;
}

/// The seven meshes of an n = 3 link at the given resolution.
inline std::vector<Mesh> link_meshes(const Link& link, int resolution) {
  require(link.n == 3, ErrorKind::unsupported, "export_meshes: only n = 3 links can be exported");
  require(resolution >= 8, ErrorKind::domain, "export_meshes: resolution must be at least 8");
  const auto balls = bounding_balls(link);
  const auto cap = cap_upper_half(link);
  std::vector<Mesh> out;
  out.push_back(polyline_mesh("K1", link.K1(), resolution));
  out.push_back(polyline_mesh("K2", link.K2(), resolution));
  out.push_back(polyline_mesh("K3", link.K3(), resolution));
  out.push_back(disk_mesh("B1", patches_of(balls[0]).front(), resolution));
  out.push_back(disk_mesh("B2", patches_of(balls[1]).front(), resolution));
  out.push_back(disk_mesh("B3half", patches_of(cap.region).front(), resolution));
  out.push_back(disk_mesh("D2", patches_of(membrane_system_for(link, 0.2).b).front(), resolution));
  return out;
}

/// Writes <dir>/<name>.obj for every mesh; returns the paths in order.
inline std::vector<std::string> export_meshes(const Link& link, int resolution, const std::string& dir) {
  const auto meshes = link_meshes(link, resolution);
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (const auto& m : meshes) {
    const std::string path = (std::filesystem::path(dir) / (m.name + ".obj")).string();
    std::ofstream file(path, std::ios::binary);
    require(static_cast<bool>(file), ErrorKind::domain, "export_meshes: cannot write " + path);
    file << to_obj(m);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace linklab
