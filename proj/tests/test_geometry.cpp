// SPDX-License-Identifier: Apache-2.0

#include "rissense/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace rissense;

namespace {

void check_point(const Vec3& p, double x, double y, double z, double tol = 1e-12) {
  CHECK(std::abs(p.x() - x) < tol);
  CHECK(std::abs(p.y() - y) < tol);
  CHECK(std::abs(p.z() - z) < tol);
}

double max_incidence_spread(const SceneGeometry& scene) {
  const double center = direction_angles(scene.tx_position).polar_deg;
  double worst = 0.0;
  for (int n = 0; n < scene.num_elements(); ++n) {
    const double polar = reflection_angles(scene, n, 0).incidence.polar_deg;
    worst = std::max(worst, std::abs(polar - center));
  }
  return worst;
}

}  // namespace

TEST_CASE("element positions are centered and row-major") {
  const SceneGeometry s = make_default_scene(2, 2, 1, 1);
  check_point(element_position(s, 0), 0.0, -0.0075, 0.0075);
  check_point(element_position(s, 1), 0.0, 0.0075, 0.0075);
  check_point(element_position(s, 3), 0.0, 0.0075, -0.0075);
  CHECK_THROWS_AS(element_position(s, 4), std::out_of_range);
  CHECK_THROWS_AS(element_position(s, -1), std::out_of_range);
}

TEST_CASE("48x48 array spans 0.72 m per side") {
  const SceneGeometry s;
  const Vec3 first = element_position(s, 0);
  const Vec3 last = element_position(s, s.num_elements() - 1);
  CHECK(std::abs((last.y() - first.y()) + s.element_pitch - 0.72) < 1e-12);
  CHECK(std::abs((first.z() - last.z()) + s.element_pitch - 0.72) < 1e-12);
  CHECK(s.num_elements() == 2304);
}

TEST_CASE("groups partition the elements into square tiles") {
  const SceneGeometry s;
  std::vector<int> counts(s.num_groups(), 0);
  for (int n = 0; n < s.num_elements(); ++n) ++counts[element_group(s, n)];
  for (int c : counts) CHECK(c == s.group_size());
  CHECK(s.group_size() == 144);
  // Top-left tile holds the first 12 elements of the first 12 rows.
  CHECK(element_group(s, 0) == 0);
  CHECK(element_group(s, 11) == 0);
  CHECK(element_group(s, 12) == 1);
  CHECK(element_group(s, 12 * 48) == 4);
}

TEST_CASE("block centers") {
  const SceneGeometry s;
  check_point(block_center(s, 0), 1.1, -0.4, -0.7);
  check_point(block_center(s, s.num_blocks() - 1), 1.3, 0.4, 0.7);
  CHECK(s.num_blocks() == 80);
  const Vec3 extent = s.soi_extent();
  check_point(extent, 0.4, 1.0, 1.6);
  CHECK_THROWS_AS(block_center(s, 80), std::out_of_range);
  // x varies fastest.
  check_point(block_center(s, 1), 1.3, -0.4, -0.7);
  check_point(block_center(s, 2), 1.1, -0.2, -0.7);
}

TEST_CASE("block index round trip") {
  const SceneGeometry s;
  for (int m = 0; m < s.num_blocks(); ++m) CHECK(block_index(s, block_center(s, m)) == m);
  CHECK(block_index(s, 1, 4, 7) == s.num_blocks() - 1);
  CHECK_THROWS_AS(block_index(s, 2, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(block_index(s, Vec3(0.0, 0.0, 0.0)), std::out_of_range);
}

TEST_CASE("path distances") {
  SceneGeometry s = make_default_scene(1, 1, 1, 1, {1, 1, 1}, 0.015, 0.2);
  s.tx_position = Vec3(2.0, 0.0, 0.0);
  s.soi_origin = Vec3(0.9, -0.1, -0.1);  // block center (1, 0, 0)
  s.rx_position = Vec3(0.0, 0.0, -1.0);
  const PathDistances d = path_distances(s, 0, 0);
  CHECK(std::abs(d.tx_to_element - 2.0) < 1e-12);
  CHECK(std::abs(d.element_via_block - (1.0 + std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("mirror elements are equidistant from a centered block") {
  const SceneGeometry s = make_default_scene(4, 4, 2, 2, {1, 1, 1}, 0.015, 0.2);
  // The block sits on the RIS axis (y = z = 0); mirror in y keeps the row.
  const int m = 0;
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 2; ++col) {
      const double a = path_distances(s, row * 4 + col, m).element_via_block;
      const double b = path_distances(s, row * 4 + (3 - col), m).element_via_block;
      CHECK(std::abs(a - b) < 1e-12);
    }
  }
}

TEST_CASE("triangle inequality on the reflected path") {
  const SceneGeometry s = make_default_scene(8, 8, 2, 2);
  for (int n = 0; n < s.num_elements(); n += 5) {
    for (int m = 0; m < s.num_blocks(); m += 7) {
      const double direct = (element_position(s, n) - s.rx_position).norm();
      CHECK(path_distances(s, n, m).element_via_block >= direct);
    }
  }
}

TEST_CASE("reflection angles") {
  SceneGeometry s = make_default_scene(1, 1, 1, 1, {1, 1, 1}, 0.015, 0.2);
  s.soi_origin = Vec3(0.9, -0.1, -0.1);
  const double az = deg2rad(60.0);
  s.tx_position = 1.2 * Vec3(std::cos(az), std::sin(az), 0.0);
  const ReflectionAngles r = reflection_angles(s, 0, 0);
  CHECK(std::abs(r.reflection.polar_deg) < 1e-9);
  CHECK(std::abs(r.reflection.azimuth_deg) < 1e-9);
  CHECK(std::abs(r.incidence.polar_deg - 60.0) < 1e-9);
  CHECK(std::abs(r.incidence.azimuth_deg) < 1e-9);
  CHECK_THROWS_AS(direction_angles(Vec3::Zero()), std::invalid_argument);
}

TEST_CASE("incidence angle spread over the array shrinks with Tx distance") {
  SceneGeometry s;
  const Vec3 dir = s.tx_position.normalized();
  double previous = 180.0;
  for (double dist : {1.2, 3.0, 10.0, 30.0}) {
    s.tx_position = dist * dir;
    const double spread = max_incidence_spread(s);
    CHECK(spread < previous);
    previous = spread;
  }
  CHECK(previous < 1.0);
}

TEST_CASE("scene validation") {
  SceneGeometry s;
  CHECK_NOTHROW(s.validate());
  s.group_rows = 5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = SceneGeometry{};
  s.rx_position = Vec3(0.0, 0.0, 0.0);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = SceneGeometry{};
  s.block_side = -0.2;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
