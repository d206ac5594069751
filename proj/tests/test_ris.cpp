// SPDX-License-Identifier: Apache-2.0

#include "rissense/ris.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rissense;

TEST_CASE("default state table") {
  const StateTable t = default_state_table();
  REQUIRE(t.size() == 4);
  const double amps[] = {0.97, 0.97, 0.92, 0.88};
  for (int i = 0; i < 4; ++i) {
    CHECK(t.states[i].amplitude_ratio == amps[i]);
    CHECK(std::abs(t.states[i].phase_shift - (2 * i + 1) * kPi / 4) < 1e-15);
  }
  CHECK(t.pattern_exponent == 0.0);
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("state table validation") {
  StateTable t = default_state_table();
  t.states.resize(1);
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = default_state_table();
  t.states[0].amplitude_ratio = 1.5;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = default_state_table();
  t.states[0].phase_shift = 2 * kPi;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = default_state_table();
  t.pattern_exponent = -1;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("reflection coefficient") {
  StateTable t = default_state_table();
  const AnglePair inc{60.0, 0.0}, refl{35.0, 20.0};
  const Complex r1 = reflection_coefficient(t, inc, refl, 0);
  CHECK(std::abs(r1 - std::polar(0.97, kPi / 4)) < 1e-15);
  const Complex r4 = reflection_coefficient(t, inc, refl, 3);
  CHECK(std::abs(r4 - std::polar(0.88, 7 * kPi / 4)) < 1e-15);
  CHECK_THROWS_AS(reflection_coefficient(t, inc, refl, 4), std::out_of_range);

  t.pattern_exponent = 1.0;
  for (int i = 0; i < 4; ++i) CHECK(std::abs(reflection_coefficient(t, inc, {90.0, 0.0}, i)) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> polar(0.0, 90.0), q(0.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    t.pattern_exponent = q(rng);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(reflection_coefficient(t, inc, {polar(rng), 0.0}, i)) <= t.states[i].amplitude_ratio + 1e-15);
    }
  }
}

TEST_CASE("validate_configuration reports violations") {
  ConfigurationMatrix T(3, 2, 4);
  T.durations().setConstant(0.25);
  CHECK(validate_configuration(T).ok());

  ConfigurationMatrix neg = T;
  neg(1, 1, 2) = -0.1;
  neg(1, 1, 3) = 0.6;
  const auto rn = validate_configuration(neg);
  REQUIRE(rn.violations.size() == 1);
  CHECK(rn.violations[0].kind == ConfigurationViolation::Kind::NegativeEntry);
  CHECK(rn.violations[0].frame == 1);
  CHECK(rn.violations[0].group == 1);
  CHECK(rn.violations[0].state == 2);
  CHECK(rn.violations[0].value == -0.1);

  ConfigurationMatrix short_row = T;
  short_row(2, 0, 0) = 0.15;
  const auto rs = validate_configuration(short_row);
  REQUIRE(rs.violations.size() == 1);
  CHECK(rs.violations[0].kind == ConfigurationViolation::Kind::OffSimplex);
  CHECK(rs.violations[0].frame == 2);
  CHECK(rs.violations[0].group == 0);
  CHECK(std::abs(rs.violations[0].value - 0.1) < 1e-12);
  CHECK_FALSE(rs.describe().empty());

  ConfigurationMatrix nan = T;
  nan(0, 0, 0) = std::nan("");
  CHECK_FALSE(validate_configuration(nan).ok());
}

TEST_CASE("random configuration is feasible and deterministic") {
  const ConfigurationMatrix a = random_configuration(10, 16, 4, 7);
  const ConfigurationMatrix b = random_configuration(10, 16, 4, 7);
  const ConfigurationMatrix c = random_configuration(10, 16, 4, 8);
  CHECK(validate_configuration(a).ok());
  CHECK(a.durations() == b.durations());
  CHECK(a.durations() != c.durations());
}

TEST_CASE("random configuration rows are flat Dirichlet") {
  const ConfigurationMatrix T = random_configuration(100000, 1, 4, 11);
  const RealVector mean = T.durations().colwise().mean().transpose();
  for (int i = 0; i < 4; ++i) CHECK(std::abs(mean[i] - 0.25) < 0.005);
  // Flat Dirichlet(1,1,1,1) marginals are Beta(1,3): variance 3/80.
  const RealVector var = (T.durations().rowwise() - mean.transpose()).array().square().colwise().mean().transpose();
  for (int i = 0; i < 4; ++i) CHECK(std::abs(var[i] - 3.0 / 80.0) < 0.002);
}

TEST_CASE("fixed state configuration is one-hot") {
  const ConfigurationMatrix T = fixed_state_configuration(4, 3, 4, 0);
  CHECK(validate_configuration(T).ok());
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 3; ++l) {
      CHECK(T(k, l, 0) == 1.0);
      for (int i = 1; i < 4; ++i) CHECK(T(k, l, i) == 0.0);
    }
  }
  CHECK_THROWS(fixed_state_configuration(4, 3, 4, 4));
}

TEST_CASE("configuration matrix accessors") {
  ConfigurationMatrix T = random_configuration(3, 2, 4, 1);
  const RealMatrix rest = T.without_frame(1);
  CHECK(rest.rows() == 2);
  CHECK(rest.row(0) == T.durations().row(0));
  CHECK(rest.row(1) == T.durations().row(2));
  RealVector t = RealVector::Constant(8, 0.25);
  T.set_frame(1, t);
  CHECK(T.frame(1) == t);
  CHECK_THROWS(T.set_frame(1, RealVector::Constant(7, 0.25)));
  CHECK_THROWS(T.set_frame(3, t));
  CHECK_THROWS(ConfigurationMatrix(RealMatrix::Zero(2, 7), 2, 4));
}
