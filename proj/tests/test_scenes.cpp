// SPDX-License-Identifier: Apache-2.0

#include "rissense/scenes.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace rissense;

namespace {

struct SmallWorld {
  SceneGeometry scene = make_default_scene(8, 8, 2, 2);
  RadioParams radio;
  SensingDictionary dict = build_dictionary(scene, default_state_table(), radio);
  std::vector<PostureSpec> postures = default_postures(scene);
  ConfigurationMatrix T = random_configuration(6, 4, 4, 3);
};

}  // namespace

TEST_CASE("default posture masks") {
  const SceneGeometry s;
  const auto p = default_postures(s);
  REQUIRE(p.size() == 4);
  CHECK(p[0].name == "standing");
  CHECK(p[3].name == "lying");
  CHECK(p[0].occupancy.size() == 8);
  CHECK(p[1].occupancy.size() == 6);
  CHECK(p[2].occupancy.size() == 6);
  CHECK(p[3].occupancy.size() == 5);
  std::set<std::set<int>> distinct;
  for (const auto& q : p) {
    distinct.insert(std::set<int>(q.occupancy.begin(), q.occupancy.end()));
    CHECK_NOTHROW(q.validate(s.num_blocks()));
  }
  CHECK(distinct.size() == 4);
  // Standing is the vertical column at x = 0, y = 2.
  for (int z = 0; z < 8; ++z) CHECK(p[0].occupancy[z] == block_index(s, 0, 2, z));
  CHECK_THROWS_AS(default_postures(make_default_scene(8, 8, 2, 2, {2, 5, 4})), std::invalid_argument);
}

TEST_CASE("posture reflection vectors respect the mask") {
  const SceneGeometry s;
  const auto postures = default_postures(s);
  for (const auto& p : postures) {
    const std::set<int> occ(p.occupancy.begin(), p.occupancy.end());
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const SpaceReflectionVector v = posture_reflection_vector(p, 80, seed);
      const auto supp = v.support();
      CHECK(!supp.empty());
      CHECK(supp.size() <= occ.size());
      CHECK(supp.size() <= 12);
      for (int m = 0; m < 80; ++m) {
        if (!occ.count(m)) CHECK(v.eta[m] == Complex(0, 0));
      }
      for (int m : supp) {
        CHECK(std::abs(v.eta[m]) >= p.magnitude_min - 1e-15);
        CHECK(std::abs(v.eta[m]) <= p.magnitude_max + 1e-15);
      }
    }
  }
  const auto a = posture_reflection_vector(postures[0], 80, 5);
  const auto b = posture_reflection_vector(postures[0], 80, 5);
  CHECK(a.eta == b.eta);
}

TEST_CASE("degenerate reflectivity distribution") {
  PostureSpec p = default_postures(SceneGeometry{})[1];
  p.activation_probability = 1.0;
  p.magnitude_min = p.magnitude_max = 0.3;
  const SpaceReflectionVector v = posture_reflection_vector(p, 80, 9);
  CHECK(v.support().size() == p.occupancy.size());
  for (int m : p.occupancy) CHECK(std::abs(std::abs(v.eta[m]) - 0.3) < 1e-15);
}

TEST_CASE("posture validation") {
  PostureSpec p;
  p.name = "empty";
  CHECK_THROWS_AS(p.validate(80), std::invalid_argument);
  p.occupancy = {3, 80};
  CHECK_THROWS_AS(p.validate(80), std::out_of_range);
  p.occupancy = {3, 3};
  CHECK_THROWS_AS(p.validate(80), std::invalid_argument);
  p.occupancy = {3};
  p.activation_probability = 0.0;
  CHECK_THROWS_AS(p.validate(80), std::invalid_argument);
  p.activation_probability = 0.5;
  p.magnitude_min = 0.6;
  CHECK_THROWS_AS(p.validate(80), std::invalid_argument);
}

TEST_CASE("paper protocol dataset sizes and balance") {
  SmallWorld w;
  const DatasetSpec spec;
  const DatasetPair d = generate_dataset(w.T, w.dict, w.postures, spec, w.radio, los_distance(w.scene));
  CHECK(d.train.size() == 480);
  CHECK(d.test.size() == 120);
  CHECK(d.train.class_counts() == std::vector<int>{120, 120, 120, 120});
  CHECK(d.test.class_counts() == std::vector<int>{30, 30, 30, 30});
  CHECK(d.train.split == Split::Train);
  CHECK(d.test.split == Split::Test);
  for (const auto& s : d.train.samples) CHECK(s.y.size() == 6);
}

TEST_CASE("dataset generation is seed stable") {
  SmallWorld w;
  w.radio.noise_variance = 1e-4;
  DatasetSpec spec;
  spec.samples_per_class = 10;
  spec.train_per_class = 8;
  spec.test_per_class = 2;
  const double dlos = los_distance(w.scene);
  const DatasetPair a = generate_dataset(w.T, w.dict, w.postures, spec, w.radio, dlos);
  const DatasetPair b = generate_dataset(w.T, w.dict, w.postures, spec, w.radio, dlos);
  for (std::size_t j = 0; j < a.train.size(); ++j) CHECK(a.train.samples[j].y == b.train.samples[j].y);
  spec.seed = 2;
  const DatasetPair c = generate_dataset(w.T, w.dict, w.postures, spec, w.radio, dlos);
  CHECK(c.train.samples[0].y != a.train.samples[0].y);
}

TEST_CASE("fixed reflectivity without noise gives identical class samples") {
  SmallWorld w;
  for (auto& p : w.postures) {
    p.activation_probability = 1.0;
    p.magnitude_min = p.magnitude_max = 0.2;
    p.phase_min = p.phase_max = 1.0;
  }
  DatasetSpec spec;
  spec.samples_per_class = 6;
  spec.train_per_class = 4;
  spec.test_per_class = 2;
  spec.noise = false;
  w.radio.noise_variance = 1.0;  // ignored with noise off
  const DatasetPair d = generate_dataset(w.T, w.dict, w.postures, spec, w.radio, los_distance(w.scene));
  for (const auto& s : d.train.samples) CHECK(s.y == d.train.samples[s.label].y);
}

TEST_CASE("disjoint postures never produce the same measurement") {
  SmallWorld w;
  std::vector<PostureSpec> two{w.postures[0], w.postures[3]};
  two[1].occupancy = {block_index(w.scene, 1, 0, 7), block_index(w.scene, 1, 4, 7)};
  DatasetSpec spec;
  spec.samples_per_class = 30;
  spec.train_per_class = 30;
  spec.test_per_class = 0;
  spec.noise = false;
  const DatasetPair d = generate_dataset(w.T, w.dict, two, spec, w.radio, los_distance(w.scene));
  for (const auto& a : d.train.samples) {
    for (const auto& b : d.train.samples) {
      if (a.label != b.label) CHECK(a.y != b.y);
    }
  }
}

TEST_CASE("dataset argument errors") {
  SmallWorld w;
  DatasetSpec spec;
  spec.train_per_class = 100;
  CHECK_THROWS_AS(generate_dataset(w.T, w.dict, w.postures, spec, w.radio, 1.0), std::invalid_argument);
  spec = DatasetSpec{};
  spec.samples_per_class = 0;
  spec.train_per_class = 0;
  spec.test_per_class = 0;
  CHECK_THROWS_AS(generate_dataset(w.T, w.dict, w.postures, spec, w.radio, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_dataset(w.T, w.dict, {w.postures[0]}, DatasetSpec{}, w.radio, 1.0), std::invalid_argument);
}

TEST_CASE("static reflected power is positive and scales with P_t squared") {
  SmallWorld w;
  const double p1 = static_reflected_power(w.dict, w.postures, w.radio);
  CHECK(p1 > 0.0);
  w.radio.transmit_power = 3.0;
  CHECK(std::abs(static_reflected_power(w.dict, w.postures, w.radio) - 9.0 * p1) < 1e-12 * p1);
}
