// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>

namespace rissense {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace rissense
