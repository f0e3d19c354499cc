// SPDX-License-Identifier: Apache-2.0
#include "sfmap/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace sfmap {

namespace {

struct IcoMesh {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
};

IcoMesh base_icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoMesh m;
  const double raw[12][3] = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (const auto& v : raw) m.verts.push_back(Vec3(v[0], v[1], v[2]).normalized());
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

}  // namespace

DirectionGrid icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 6)
    throw std::invalid_argument("icosphere: subdivisions must be in [0, 6]");
  IcoMesh m = base_icosahedron();
  for (int lvl = 0; lvl < subdivisions; ++lvl) {
    // midpoints are welded exactly by caching on the parent edge's index pair
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 v = (m.verts[a] + m.verts[b]).normalized();
      m.verts.push_back(v);
      int idx = static_cast<int>(m.verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  DirectionGrid grid;
  grid.subdivision_level = subdivisions;
  grid.directions = std::move(m.verts);
  std::vector<std::set<int>> adj(grid.directions.size());
  for (const auto& f : m.faces) {
    for (int e = 0; e < 3; ++e) {
      int a = f[e], b = f[(e + 1) % 3];
      adj[a].insert(b);
      adj[b].insert(a);
    }
  }
  grid.adjacency.resize(adj.size());
  for (std::size_t i = 0; i < adj.size(); ++i)
    grid.adjacency[i].assign(adj[i].begin(), adj[i].end());
  return grid;
}

double angular_distance(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

int nearest_grid_index(const DirectionGrid& grid, const Vec3& dir) {
  if (grid.directions.empty()) throw std::invalid_argument("nearest_grid_index: empty grid");
  int best = 0;
  double best_dot = grid.directions[0].dot(dir);
  for (int i = 1; i < grid.size(); ++i) {
    double d = grid.directions[i].dot(dir);
    if (d > best_dot) {
      best_dot = d;
      best = i;
    }
  }
  return best;
}

ArrayGeometry reference_sma_geometry(const Vec3& center) {
  constexpr int n = 64;
  constexpr double radius = 0.10;
  ArrayGeometry g;
  g.kind = ArrayKind::SphericalOpen;
  g.radius = radius;
  g.center = center;
  g.label = "sma64";
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  g.positions.reserve(n);
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden_angle * i;
    g.positions.push_back(center + radius * Vec3(s * std::cos(phi), s * std::sin(phi), z));
  }
  return g;
}

std::vector<ArrayGeometry> reference_lma_geometries(const Vec3& center) {
  constexpr int n = 8;
  constexpr double spacing = 0.04;
  constexpr double offset = 0.5;
  std::vector<ArrayGeometry> out;
  const struct { int axis; double sign; const char* name; } placements[] = {
      {0, 1.0, "lma_x_pos"}, {0, -1.0, "lma_x_neg"}, {1, 1.0, "lma_y_pos"}, {1, -1.0, "lma_y_neg"}};
  for (const auto& pl : placements) {
    ArrayGeometry g;
    g.kind = ArrayKind::Linear;
    g.spacing = spacing;
    g.center = center;
    g.center[pl.axis] += pl.sign * offset;
    g.label = pl.name;
    for (int i = 0; i < n; ++i) {
      Vec3 p = g.center;
      p[pl.axis] += (i - (n - 1) / 2.0) * spacing;
      g.positions.push_back(p);
    }
    out.push_back(std::move(g));
  }
  return out;
}

double azimuth_deg(const Vec3& u) { return rad2deg(std::atan2(u.y(), u.x())); }

double elevation_deg(const Vec3& u) { return rad2deg(std::asin(std::clamp(u.z(), -1.0, 1.0))); }

Vec3 from_az_el_deg(double az_deg, double el_deg) {
  const double az = deg2rad(az_deg), el = deg2rad(el_deg);
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

void export_grid_csv(const DirectionGrid& grid, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_grid_csv: cannot open " + path);
  std::fprintf(f, "index,x,y,z,azimuth_deg,elevation_deg\n");
  for (int i = 0; i < grid.size(); ++i) {
    const Vec3& u = grid.directions[i];
    std::fprintf(f, "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", i, u.x(), u.y(), u.z(),
                 azimuth_deg(u), elevation_deg(u));
  }
  std::fclose(f);
}

}  // namespace sfmap
