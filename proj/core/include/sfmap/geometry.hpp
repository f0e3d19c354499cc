// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sfmap/common.hpp"

namespace sfmap {

using Vec3 = Eigen::Vector3d;

/// Unit direction set used as the plane-wave dictionary support.
/// Directions are unit vectors; adjacency lists the mesh neighbors of each
/// vertex and is symmetric.
struct DirectionGrid {
  std::vector<Vec3> directions;
  std::vector<std::vector<int>> adjacency;
  int subdivision_level = 0;

  int size() const { return static_cast<int>(directions.size()); }
};

/// Geodesic sphere by recursive subdivision of an icosahedron.
/// Vertex counts: 12, 42, 162, 642, 2562 for levels 0..4. subdivisions <= 6.
DirectionGrid icosphere(int subdivisions);

/// Great-circle angle between two unit vectors, in [0, pi].
double angular_distance(const Vec3& a, const Vec3& b);

/// Index of the grid direction closest to `dir`; ties break to the lowest index.
int nearest_grid_index(const DirectionGrid& grid, const Vec3& dir);

enum class ArrayKind { SphericalOpen, Linear };

struct ArrayGeometry {
  ArrayKind kind = ArrayKind::SphericalOpen;
  double radius = 0.0;   // SphericalOpen [m]
  double spacing = 0.0;  // Linear [m]
  Vec3 center = Vec3::Zero();
  std::vector<Vec3> positions;  // absolute positions [m]
  std::string label;

  int channels() const { return static_cast<int>(positions.size()); }
};

/// 64-element open spherical array, radius 0.10 m, centered at `center`.
/// Microphones follow a deterministic spherical Fibonacci layout.
ArrayGeometry reference_sma_geometry(const Vec3& center);

/// Four 8-element line arrays with 0.04 m spacing, centers displaced 0.5 m
/// from `center` along +x, -x, +y, -y; each array axis is parallel to its
/// displacement axis and all arrays lie in the plane of `center`.
std::vector<ArrayGeometry> reference_lma_geometries(const Vec3& center);

/// azimuth = atan2(y, x), elevation = asin(z), both for unit vectors.
double azimuth_deg(const Vec3& u);
double elevation_deg(const Vec3& u);
Vec3 from_az_el_deg(double az_deg, double el_deg);

/// CSV export: index,x,y,z,azimuth_deg,elevation_deg
void export_grid_csv(const DirectionGrid& grid, const std::string& path);

}  // namespace sfmap
