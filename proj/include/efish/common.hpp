#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace efish {

using Vec2 = Eigen::Vector2d;
using Cplx = std::complex<double>;
using CVec2 = Eigen::Vector2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct InvalidGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankDeficiencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularContrastError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace efish
