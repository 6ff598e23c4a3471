#include "efish/curve.hpp"

#include <cmath>

namespace efish {
namespace {

constexpr int kRegularitySamples = 10000;

double signed_area_estimate(const BoundaryCurve::PointFn& x,
                            const BoundaryCurve::PointFn& dx) {
  const int n = 512;
  const double h = kTwoPi / n;
  double area = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    const Vec2 p = x(t);
    const Vec2 d = dx(t);
    area += 0.5 * (p.x() * d.y() - p.y() * d.x()) * h;
  }
  return area;
}

void check_regular(const BoundaryCurve::PointFn& x,
                   const BoundaryCurve::PointFn& dx) {
  const Vec2 p0 = x(0.0);
  const Vec2 p1 = x(kTwoPi);
  if ((p0 - p1).norm() > 1e-12 * (1.0 + p0.norm())) {
    throw InvalidGeometryError("curve parametrization is not 2π-periodic");
  }
  double scale = 0.0;
  for (int i = 0; i < 64; ++i) scale = std::max(scale, dx(kTwoPi * i / 64.0).norm());
  if (scale == 0.0) throw InvalidGeometryError("degenerate curve: X' vanishes identically");
  for (int i = 0; i < kRegularitySamples; ++i) {
    const double t = kTwoPi * i / kRegularitySamples;
    if (dx(t).norm() <= 1e-12 * scale) {
      throw InvalidGeometryError("irregular curve: |X'| vanishes at t=" +
                                 std::to_string(t));
    }
  }
}

}  // namespace

BoundaryCurve::BoundaryCurve(PointFn x, PointFn dx, PointFn ddx) {
  check_regular(x, dx);
  if (signed_area_estimate(x, dx) >= 0.0) {
    x_ = std::move(x);
    dx_ = std::move(dx);
    ddx_ = std::move(ddx);
  } else {
    // Reverse the parameter direction to restore ccw orientation.
    x_ = [x](double t) { return x(kTwoPi - t); };
    dx_ = [dx](double t) { return Vec2(-dx(kTwoPi - t)); };
    ddx_ = [ddx](double t) { return ddx(kTwoPi - t); };
  }
}

Vec2 BoundaryCurve::outward_normal(double t) const {
  const Vec2 d = dx_(t);
  return Vec2(d.y(), -d.x()) / d.norm();
}

double BoundaryCurve::curvature(double t) const {
  const Vec2 d = dx_(t);
  const Vec2 dd = ddx_(t);
  const double s = d.norm();
  return (d.x() * dd.y() - d.y() * dd.x()) / (s * s * s);
}

BoundaryCurve make_ellipse(Vec2 center, double semi_a, double semi_b,
                           double angle) {
  if (!(semi_a > 0.0) || !(semi_b > 0.0)) {
    throw InvalidGeometryError("ellipse semi-axes must be positive");
  }
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix2d rot;
  rot << c, -s, s, c;
  auto x = [=](double t) -> Vec2 {
    return center + rot * Vec2(semi_a * std::cos(t), semi_b * std::sin(t));
  };
  auto dx = [=](double t) -> Vec2 {
    return rot * Vec2(-semi_a * std::sin(t), semi_b * std::cos(t));
  };
  auto ddx = [=](double t) -> Vec2 {
    return rot * Vec2(-semi_a * std::cos(t), -semi_b * std::sin(t));
  };
  return BoundaryCurve(x, dx, ddx);
}

BoundaryCurve make_fourier_curve(const RadialFourierSpec& spec) {
  double total = std::abs(spec.base);
  for (double c : spec.cos_coeffs) total += std::abs(c);
  for (double c : spec.sin_coeffs) total += std::abs(c);
  if (total == 0.0) {
    throw InvalidGeometryError("degenerate radial Fourier curve: all coefficients zero");
  }
  auto radius = [spec](double t, int deriv) {
    double r = deriv == 0 ? spec.base : 0.0;
    for (std::size_t i = 0; i < spec.cos_coeffs.size(); ++i) {
      const double m = static_cast<double>(i + 1);
      const double c = spec.cos_coeffs[i];
      if (deriv == 0) r += c * std::cos(m * t);
      if (deriv == 1) r += -c * m * std::sin(m * t);
      if (deriv == 2) r += -c * m * m * std::cos(m * t);
    }
    for (std::size_t i = 0; i < spec.sin_coeffs.size(); ++i) {
      const double m = static_cast<double>(i + 1);
      const double c = spec.sin_coeffs[i];
      if (deriv == 0) r += c * std::sin(m * t);
      if (deriv == 1) r += c * m * std::cos(m * t);
      if (deriv == 2) r += -c * m * m * std::sin(m * t);
    }
    return r;
  };
  for (int i = 0; i < kRegularitySamples; ++i) {
    if (radius(kTwoPi * i / kRegularitySamples, 0) <= 0.0) {
      throw InvalidGeometryError("self-intersecting radial Fourier curve: r(t) <= 0");
    }
  }
  const Vec2 center = spec.center;
  auto x = [=](double t) -> Vec2 {
    return center + radius(t, 0) * Vec2(std::cos(t), std::sin(t));
  };
  auto dx = [=](double t) -> Vec2 {
    const Vec2 e(std::cos(t), std::sin(t));
    const Vec2 ep(-std::sin(t), std::cos(t));
    return radius(t, 1) * e + radius(t, 0) * ep;
  };
  auto ddx = [=](double t) -> Vec2 {
    const Vec2 e(std::cos(t), std::sin(t));
    const Vec2 ep(-std::sin(t), std::cos(t));
    return (radius(t, 2) - radius(t, 0)) * e + 2.0 * radius(t, 1) * ep;
  };
  return BoundaryCurve(x, dx, ddx);
}

namespace {

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto cross = [](Vec2 u, Vec2 v) { return u.x() * v.y() - u.y() * v.x(); };
  const double d1 = cross(d - c, a - c);
  const double d2 = cross(d - c, b - c);
  const double d3 = cross(b - a, c - a);
  const double d4 = cross(b - a, d - a);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

void check_simple(const BoundaryCurve::PointFn& x) {
  const int n = 512;
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = x(kTwoPi * i / n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the wrap
      if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) {
        throw InvalidGeometryError("self-intersecting Fourier curve");
      }
    }
  }
}

}  // namespace

BoundaryCurve make_fourier_curve(const CoordinateFourierSpec& spec) {
  double total = 0.0;
  for (const auto* v : {&spec.x_cos, &spec.x_sin, &spec.y_cos, &spec.y_sin}) {
    for (double c : *v) total += std::abs(c);
  }
  if (total == 0.0) {
    throw InvalidGeometryError("degenerate coordinate Fourier curve: all coefficients zero");
  }
  auto series = [](const std::vector<double>& cc, const std::vector<double>& sc,
                   double t, int deriv) {
    double v = 0.0;
    for (std::size_t i = 0; i < cc.size(); ++i) {
      const double m = static_cast<double>(i + 1);
      if (deriv == 0) v += cc[i] * std::cos(m * t);
      if (deriv == 1) v += -cc[i] * m * std::sin(m * t);
      if (deriv == 2) v += -cc[i] * m * m * std::cos(m * t);
    }
    for (std::size_t i = 0; i < sc.size(); ++i) {
      const double m = static_cast<double>(i + 1);
      if (deriv == 0) v += sc[i] * std::sin(m * t);
      if (deriv == 1) v += sc[i] * m * std::cos(m * t);
      if (deriv == 2) v += -sc[i] * m * m * std::sin(m * t);
    }
    return v;
  };
  const auto s = spec;
  auto x = [=](double t) -> Vec2 {
    return s.center + Vec2(series(s.x_cos, s.x_sin, t, 0), series(s.y_cos, s.y_sin, t, 0));
  };
  auto dx = [=](double t) -> Vec2 {
    return Vec2(series(s.x_cos, s.x_sin, t, 1), series(s.y_cos, s.y_sin, t, 1));
  };
  auto ddx = [=](double t) -> Vec2 {
    return Vec2(series(s.x_cos, s.x_sin, t, 2), series(s.y_cos, s.y_sin, t, 2));
  };
  check_simple(x);
  return BoundaryCurve(x, dx, ddx);
}

bool point_inside(const BoundaryCurve& curve, Vec2 p, int samples) {
  // Crossing-number test against a dense inscribed polygon.
  int crossings = 0;
  Vec2 prev = curve.position(0.0);
  for (int i = 1; i <= samples; ++i) {
    const Vec2 cur = curve.position(kTwoPi * i / samples);
    if ((prev.y() > p.y()) != (cur.y() > p.y())) {
      const double xc = prev.x() + (p.y() - prev.y()) / (cur.y() - prev.y()) *
                                       (cur.x() - prev.x());
      if (xc > p.x()) ++crossings;
    }
    prev = cur;
  }
  return (crossings % 2) == 1;
}

double distance_to_curve(const BoundaryCurve& curve, Vec2 p, int samples) {
  double best = std::numeric_limits<double>::infinity();
  double tbest = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = kTwoPi * i / samples;
    const double d = (curve.position(t) - p).norm();
    if (d < best) {
      best = d;
      tbest = t;
    }
  }
  // Golden-section refinement around the best sample.
  double lo = tbest - kTwoPi / samples, hi = tbest + kTwoPi / samples;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  double fa = (curve.position(a) - p).norm();
  double fb = (curve.position(b) - p).norm();
  for (int it = 0; it < 40; ++it) {
    if (fa < fb) {
      hi = b; b = a; fb = fa;
      a = hi - gr * (hi - lo);
      fa = (curve.position(a) - p).norm();
    } else {
      lo = a; a = b; fa = fb;
      b = lo + gr * (hi - lo);
      fb = (curve.position(b) - p).norm();
    }
  }
  return std::min({best, fa, fb});
}

}  // namespace efish
