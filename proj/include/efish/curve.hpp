#pragma once

#include <functional>
#include <vector>

#include "efish/common.hpp"

namespace efish {

/// Smooth closed curve given by a 2π-periodic parametrization with two
/// derivatives. Orientation is normalized to counterclockwise at
/// construction, so outward normals and signed curvature follow the usual
/// convention (a circle of radius R has curvature 1/R everywhere).
class BoundaryCurve {
 public:
  using PointFn = std::function<Vec2(double)>;

  BoundaryCurve() = default;
  BoundaryCurve(PointFn x, PointFn dx, PointFn ddx);

  Vec2 position(double t) const { return x_(t); }
  Vec2 derivative(double t) const { return dx_(t); }
  Vec2 second_derivative(double t) const { return ddx_(t); }

  double speed(double t) const { return dx_(t).norm(); }
  Vec2 tangent(double t) const { return dx_(t).normalized(); }
  Vec2 outward_normal(double t) const;
  double curvature(double t) const;

  bool valid() const { return static_cast<bool>(x_); }

 private:
  PointFn x_, dx_, ddx_;
};

BoundaryCurve make_ellipse(Vec2 center, double semi_a, double semi_b,
                           double angle = 0.0);

/// Closed curve r(t)·(cos t, sin t) + center with r a truncated Fourier
/// series: r(t) = base + Σ_m cos_coeffs[m-1] cos(mt) + sin_coeffs[m-1] sin(mt).
struct RadialFourierSpec {
  Vec2 center{0.0, 0.0};
  double base = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

/// Closed curve with each coordinate a truncated Fourier series in t.
struct CoordinateFourierSpec {
  Vec2 center{0.0, 0.0};
  std::vector<double> x_cos, x_sin;
  std::vector<double> y_cos, y_sin;
};

BoundaryCurve make_fourier_curve(const RadialFourierSpec& spec);
BoundaryCurve make_fourier_curve(const CoordinateFourierSpec& spec);

/// Winding-number point-in-region test against a dense polygonal sampling.
bool point_inside(const BoundaryCurve& curve, Vec2 p, int samples = 1024);

/// Distance from p to the curve, by dense sampling plus local refinement.
double distance_to_curve(const BoundaryCurve& curve, Vec2 p,
                         int samples = 1024);

}  // namespace efish
