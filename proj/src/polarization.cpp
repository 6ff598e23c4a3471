#include "efish/polarization.hpp"

#include <cmath>

namespace efish {

double shape_area(const PtShape& shape) {
  if (const auto* d = std::get_if<DiskShape>(&shape)) {
    return kPi * d->radius * d->radius;
  }
  const auto& e = std::get<EllipseShape>(shape);
  return kPi * e.semi_a * e.semi_b;
}

Eigen::Matrix2cd PolarizationTensor::matrix() const {
  Eigen::Matrix2cd m;
  m << m11, m12, m12, m22;
  return m;
}

PolarizationTensor PolarizationTensor::from_matrix(const Eigen::Matrix2cd& m) {
  return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
}

PolarizationTensor::Eigen2 PolarizationTensor::eigensystem() const {
  const Cplx tr = m11 + m22;
  const Cplx det = m11 * m22 - m12 * m12;
  const Cplx disc = std::sqrt(tr * tr - 4.0 * det);
  Cplx t1 = 0.5 * (tr + disc);
  Cplx t2 = 0.5 * (tr - disc);
  if (std::abs(t1.real()) < std::abs(t2.real())) std::swap(t1, t2);
  // Eigenvector of t1: (t1 - m22, m12) is (τ1-τ2)·cosθ·(cosθ, sinθ) for a
  // rotated real-axis tensor, so the component ratio is real.
  double angle;
  const Cplx v1 = t1 - m22, v2 = m12;
  const double scale = std::abs(t1) + std::abs(t2);
  if (std::abs(v1) + std::abs(v2) < 1e-12 * scale) {
    angle = 0.0;  // isotropic tensor: any direction is an axis
  } else if (std::abs(v1) >= std::abs(v2)) {
    angle = std::atan((v2 / v1).real());
  } else {
    const double cot = (v1 / v2).real();
    angle = 0.5 * kPi - std::atan(cot);
  }
  return {t1, t2, angle};
}

PolarizationTensor analytic_pt(const PtShape& shape, Cplx k) {
  double a, b, angle;
  if (const auto* d = std::get_if<DiskShape>(&shape)) {
    a = b = d->radius;
    angle = 0.0;
  } else {
    const auto& e = std::get<EllipseShape>(shape);
    a = e.semi_a;
    b = e.semi_b;
    angle = e.angle;
  }
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidGeometryError("polarization tensor needs positive semi-axes");
  }
  const Cplx den1 = a + k * b;
  const Cplx den2 = b + k * a;
  const double scale = 1e-12 * (a + b) * (1.0 + std::abs(k));
  if (std::abs(den1) < scale || std::abs(den2) < scale) {
    throw SingularContrastError("polarization-tensor denominator vanishes");
  }
  const double area = kPi * a * b;
  const Cplx d1 = (k - 1.0) * area * (a + b) / den1;
  const Cplx d2 = (k - 1.0) * area * (a + b) / den2;
  const double c = std::cos(angle), s = std::sin(angle);
  PolarizationTensor m;
  m.m11 = c * c * d1 + s * s * d2;
  m.m22 = s * s * d1 + c * c * d2;
  m.m12 = c * s * (d1 - d2);
  return m;
}

}  // namespace efish
