// SPDX-License-Identifier: Apache-2.0

#include "rissense/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rissense {

namespace {

void check_element(const SceneGeometry& scene, int n) {
  if (n < 0 || n >= scene.num_elements()) {
    throw std::out_of_range("element index " + std::to_string(n) + " outside [0, " +
                            std::to_string(scene.num_elements()) + ")");
  }
}

void check_block(const SceneGeometry& scene, int m) {
  if (m < 0 || m >= scene.num_blocks()) {
    throw std::out_of_range("block index " + std::to_string(m) + " outside [0, " +
                            std::to_string(scene.num_blocks()) + ")");
  }
}

}  // namespace

Vec3 SceneGeometry::soi_extent() const {
  return Vec3(block_counts[0], block_counts[1], block_counts[2]) * block_side;
}

void SceneGeometry::validate() const {
  if (ris_rows <= 0 || ris_cols <= 0) throw std::invalid_argument("ris_rows/ris_cols must be positive");
  if (!(element_pitch > 0.0)) throw std::invalid_argument("element_pitch must be positive");
  if (group_rows <= 0 || group_cols <= 0) throw std::invalid_argument("group_rows/group_cols must be positive");
  if (ris_rows % group_rows != 0 || ris_cols % group_cols != 0) {
    throw std::invalid_argument("group tiling must divide the RIS array evenly");
  }
  if (ris_rows / group_rows != ris_cols / group_cols) {
    throw std::invalid_argument("groups must be square tiles of elements");
  }
  if (!(block_side > 0.0)) throw std::invalid_argument("block_side must be positive");
  for (int c : block_counts) {
    if (c <= 0) throw std::invalid_argument("block_counts must be positive");
  }
  const double bottom_edge = -0.5 * ris_rows * element_pitch;
  if (!(rx_position.z() < bottom_edge)) {
    throw std::invalid_argument("rx_position must lie below the RIS bottom edge");
  }
  if (!tx_position.allFinite() || !rx_position.allFinite() || !soi_origin.allFinite()) {
    throw std::invalid_argument("positions must be finite");
  }
}

SceneGeometry make_default_scene(int ris_rows, int ris_cols, int group_rows, int group_cols,
                                 std::array<int, 3> block_counts, double element_pitch,
                                 double block_side) {
  SceneGeometry s;
  s.ris_rows = ris_rows;
  s.ris_cols = ris_cols;
  s.group_rows = group_rows;
  s.group_cols = group_cols;
  s.element_pitch = element_pitch;
  s.block_side = block_side;
  s.block_counts = block_counts;
  const double tx_range = 1.2;
  s.tx_position = Vec3(tx_range * std::cos(deg2rad(60.0)), tx_range * std::sin(deg2rad(60.0)), 0.0);
  s.rx_position = Vec3(0.0, 0.0, -0.5 * ris_rows * element_pitch - 0.05);
  const Vec3 extent = s.soi_extent();
  s.soi_origin = Vec3(1.0, -0.5 * extent.y(), -0.5 * extent.z());
  s.validate();
  return s;
}

Vec3 element_position(const SceneGeometry& scene, int n) {
  check_element(scene, n);
  const int row = n / scene.ris_cols;
  const int col = n % scene.ris_cols;
  const double y = (col - 0.5 * (scene.ris_cols - 1)) * scene.element_pitch;
  const double z = (0.5 * (scene.ris_rows - 1) - row) * scene.element_pitch;
  return {0.0, y, z};
}

int element_group(const SceneGeometry& scene, int n) {
  check_element(scene, n);
  const int tile_rows = scene.ris_rows / scene.group_rows;
  const int tile_cols = scene.ris_cols / scene.group_cols;
  const int row = n / scene.ris_cols;
  const int col = n % scene.ris_cols;
  return (row / tile_rows) * scene.group_cols + col / tile_cols;
}

Vec3 block_center(const SceneGeometry& scene, int m) {
  check_block(scene, m);
  const int mx = scene.block_counts[0];
  const int my = scene.block_counts[1];
  const int ix = m % mx;
  const int iy = (m / mx) % my;
  const int iz = m / (mx * my);
  return scene.soi_origin + scene.block_side * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
}

int block_index(const SceneGeometry& scene, int ix, int iy, int iz) {
  const auto& c = scene.block_counts;
  if (ix < 0 || ix >= c[0] || iy < 0 || iy >= c[1] || iz < 0 || iz >= c[2]) {
    throw std::out_of_range("block grid coordinate outside the space of interest");
  }
  return ix + c[0] * (iy + c[1] * iz);
}

int block_index(const SceneGeometry& scene, const Vec3& point) {
  const Vec3 rel = (point - scene.soi_origin) / scene.block_side;
  return block_index(scene, static_cast<int>(std::floor(rel.x())), static_cast<int>(std::floor(rel.y())),
                     static_cast<int>(std::floor(rel.z())));
}

PathDistances path_distances(const SceneGeometry& scene, int n, int m) {
  const Vec3 e = element_position(scene, n);
  const Vec3 b = block_center(scene, m);
  return {(scene.tx_position - e).norm(), (b - e).norm() + (scene.rx_position - b).norm()};
}

AnglePair direction_angles(const Vec3& dir) {
  const double len = dir.norm();
  if (!(len > 0.0)) throw std::invalid_argument("degenerate zero-length direction");
  const Vec3 u = dir / len;
  const double polar = std::acos(std::clamp(u.x(), -1.0, 1.0));
  const double azimuth = (u.y() == 0.0 && u.z() == 0.0) ? 0.0 : std::atan2(u.z(), u.y());
  return {rad2deg(polar), rad2deg(azimuth)};
}

ReflectionAngles reflection_angles(const SceneGeometry& scene, int n, int m) {
  const Vec3 e = element_position(scene, n);
  const Vec3 b = block_center(scene, m);
  return {direction_angles(scene.tx_position - e), direction_angles(b - e)};
}

}  // namespace rissense
