#pragma once

#include <variant>

#include "efish/common.hpp"

namespace efish {

struct DiskShape {
  double radius = 0.05;
};

struct EllipseShape {
  double semi_a = 0.05;
  double semi_b = 0.05;
  double angle = 0.0;
};

using PtShape = std::variant<DiskShape, EllipseShape>;

double shape_area(const PtShape& shape);

/// Complex symmetric 2×2 polarization tensor, stored as its three
/// independent entries so symmetry holds exactly.
struct PolarizationTensor {
  Cplx m11{0, 0}, m12{0, 0}, m22{0, 0};

  Eigen::Matrix2cd matrix() const;
  static PolarizationTensor from_matrix(const Eigen::Matrix2cd& m);

  /// Eigenvalues ordered by |Re| descending, with the matching (real) axis
  /// angle of the leading eigenvector.
  struct Eigen2 {
    Cplx tau1, tau2;
    double angle;
  };
  Eigen2 eigensystem() const;
};

/// First-order polarization tensor of a disk or ellipse with complex
/// contrast k, in the global frame. For an axis-aligned ellipse the entries
/// are (k-1)|B|(a+b)/(a+kb) and (k-1)|B|(a+b)/(b+ka).
PolarizationTensor analytic_pt(const PtShape& shape, Cplx k);

}  // namespace efish
