// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/types.hpp"

#include <array>
#include <cstddef>

namespace rissense {

/// Scene layout shared by every module.
///
/// Frame: origin at the RIS center, RIS in the y-z plane, +x is the RIS
/// normal pointing into the room and +z is up. Elements are indexed
/// row-major starting from the top-left (+z, -y) corner as seen from the
/// room. Space blocks are indexed x-fastest, then y, then z.
struct SceneGeometry {
  int ris_rows = 48;
  int ris_cols = 48;
  double element_pitch = 0.015;
  int group_rows = 4;
  int group_cols = 4;
  Vec3 tx_position{0.6, 1.2 * 0.8660254037844386, 0.0};
  Vec3 rx_position{0.0, 0.0, -0.41};
  Vec3 soi_origin{1.0, -0.5, -0.8};
  double block_side = 0.2;
  std::array<int, 3> block_counts{2, 5, 8};

  int num_elements() const { return ris_rows * ris_cols; }
  int num_groups() const { return group_rows * group_cols; }
  int group_size() const { return num_elements() / num_groups(); }
  int num_blocks() const { return block_counts[0] * block_counts[1] * block_counts[2]; }
  Vec3 soi_extent() const;

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const;
};

/// Defaults for a given RIS/group tiling: Tx 1.2 m from the RIS center at
/// 60 degrees azimuth in the horizontal plane, Rx 5 cm below the bottom
/// edge, space of interest 1 m in front of the RIS centered on its axis.
SceneGeometry make_default_scene(int ris_rows, int ris_cols, int group_rows, int group_cols,
                                 std::array<int, 3> block_counts = {2, 5, 8},
                                 double element_pitch = 0.015, double block_side = 0.2);

struct AnglePair {
  double polar_deg = 0.0;    // angle from the RIS normal
  double azimuth_deg = 0.0;  // measured in the RIS plane from +y toward +z
};

struct PathDistances {
  double tx_to_element = 0.0;       // d_n
  double element_via_block = 0.0;   // d_nm, element -> block -> rx
};

struct ReflectionAngles {
  AnglePair incidence;
  AnglePair reflection;
};

Vec3 element_position(const SceneGeometry& scene, int n);
int element_group(const SceneGeometry& scene, int n);
Vec3 block_center(const SceneGeometry& scene, int m);
int block_index(const SceneGeometry& scene, const Vec3& point);
int block_index(const SceneGeometry& scene, int ix, int iy, int iz);
PathDistances path_distances(const SceneGeometry& scene, int n, int m);
ReflectionAngles reflection_angles(const SceneGeometry& scene, int n, int m);

/// Direction angles of `dir` relative to the RIS normal. Throws on a zero vector.
AnglePair direction_angles(const Vec3& dir);

}  // namespace rissense
