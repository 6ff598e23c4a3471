#pragma once

// Shared test configuration: the simulation setup used throughout — ellipse
// body with semi-axes 1 and 0.3, skin impedance 0.1, unit x-dipole at
// (0.7, 0), 64 sensors, and a small disk target on the π/3 ray.

#include <cmath>

#include "efish/forward.hpp"

namespace efish::test {

inline FishBody reference_fish(int sensors = 64) {
  FishBody fish;
  fish.body = make_ellipse({0, 0}, 1.0, 0.3);
  fish.skin_impedance = 0.1;
  fish.dipole_position = {0.7, 0.0};
  fish.dipole_moment = {1.0, 0.0};
  fish.sensor_count = sensors;
  return fish;
}

inline Vec2 reference_target_center(double distance = 1.5) {
  return {distance * std::cos(kPi / 3.0), distance * std::sin(kPi / 3.0)};
}

inline BoundaryCurve reference_disk_target(double radius = 0.05,
                                           double distance = 1.5) {
  return make_ellipse(reference_target_center(distance), radius, radius);
}

}  // namespace efish::test
