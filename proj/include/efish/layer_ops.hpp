#pragma once

#include "efish/mesh.hpp"
#include "efish/quadrature.hpp"

namespace efish {

// Kernel conventions, with G(w) = (1/2π)·log|w| and ν the outward normal:
//   S φ(x)  = ∫ G(x-y) φ(y) ds(y)
//   D φ(x)  = ∫ ν(y)·(∇G)(x-y) φ(y) ds(y)        (Gauss: D(1) = -1 inside, 0 outside)
//   K φ(x)  = p.v. ∫ (1/2π) (y-x)·ν(y)/|x-y|² φ(y) ds(y)
//   K* φ(x) = p.v. ∫ (1/2π) (x-y)·ν(x)/|x-y|² φ(y) ds(y)
// K and K* are mutually adjoint in the arclength inner product and map
// constants to 1/2 on a circle. The hypersingular operator is kept in its
// curl-regularized form and has symbol m/2 on circle Fourier modes.

double green(Vec2 x, Vec2 y);
Vec2 green_gradient(Vec2 x, Vec2 y);             // ∇_x G(x-y)
Eigen::Matrix2d green_hessian(Vec2 x, Vec2 y);   // ∇_x ∇_x G(x-y)

enum class OperatorTag {
  SingleLayer,
  DoubleLayer,
  NeumannPoincare,
  NeumannPoincareAdjoint,
};

struct KernelMatrix {
  OperatorTag tag;
  Eigen::MatrixXd values;  // (obs nodes) × (source dof)
};

/// On-boundary Nyström matrix acting on nodal densities. The single layer
/// uses the spectral log-singular rule; K/K*/D use the smooth-kernel
/// trapezoid rule with the curvature limit κ/(4π) on the diagonal.
KernelMatrix assemble(OperatorTag tag, const CurveMesh& mesh);

/// Galerkin matrix of the curl-regularized hypersingular bilinear form on a
/// P1 mesh: W(v,w) = (1/2π) ∫∫ log(1/|x-y|) v'(x) w'(y) ds ds with v' the
/// curvilinear derivative. Symmetric, annihilates constants, positive
/// semidefinite. Throws on a P0 mesh.
Eigen::MatrixXd hypersingular_form(const CurveMesh& mesh);

/// Nodal (strong-form) hypersingular operator obtained from the same
/// integration-by-parts identity, composing spectral curvilinear
/// differentiation with the single layer. Spectrally accurate on smooth
/// curves; used by the solvers.
Eigen::MatrixXd hypersingular_nodal(const CurveMesh& mesh);

// --- off-boundary evaluation ---------------------------------------------

enum class PotentialKind { SingleLayer, DoubleLayer };

/// Potentials of a nodal density at arbitrary points. Points closer to the
/// curve than three panel lengths trigger spectral upsampling of density and
/// geometry until the separation criterion holds (factor capped at 64).
Eigen::VectorXcd eval_potential(PotentialKind kind, const CurveMesh& source,
                                const Eigen::VectorXcd& density,
                                const Eigen::Matrix2Xd& points);

Eigen::Matrix2Xcd eval_potential_gradient(PotentialKind kind,
                                          const CurveMesh& source,
                                          const Eigen::VectorXcd& density,
                                          const Eigen::Matrix2Xd& points);

/// Matrices mapping a nodal density on `source` to values at off-curve
/// points. Near-singular observation points are handled by composing the
/// kernel on an upsampled source with the trigonometric interpolation
/// matrix; a warning flag is reported for points inside one panel length.
struct CrossMatrix {
  Eigen::MatrixXd values;
  bool near_singular = false;
};

CrossMatrix cross_single_layer(const CurveMesh& source,
                               const Eigen::Matrix2Xd& obs);
CrossMatrix cross_double_layer(const CurveMesh& source,
                               const Eigen::Matrix2Xd& obs);
CrossMatrix cross_single_layer_normal_deriv(const CurveMesh& source,
                                            const Eigen::Matrix2Xd& obs,
                                            const Eigen::Matrix2Xd& obs_normals);
CrossMatrix cross_double_layer_normal_deriv(const CurveMesh& source,
                                            const Eigen::Matrix2Xd& obs,
                                            const Eigen::Matrix2Xd& obs_normals);

}  // namespace efish
