#pragma once

#include "efish/common.hpp"

namespace efish {

/// Quadrature weights R_d for the 2π-periodic log-singular rule
///   ∫ log(4 sin²((t_i - s)/2)) g(s) ds ≈ Σ_j R_{|i-j|} g(s_j)
/// on P equispaced nodes (P even). Exact for trigonometric polynomials of
/// degree < P/2.
Eigen::ArrayXd periodic_log_weights(int num_points);

/// Dense spectral differentiation matrix d/dt on P equispaced 2π-periodic
/// nodes (P even).
Eigen::MatrixXd periodic_diff_matrix(int num_points);

/// Trigonometric interpolation of 2π-periodic nodal data. `params` are the
/// source node parameters (uniform spacing, arbitrary offset); evaluation at
/// arbitrary targets.
Eigen::VectorXcd trig_interpolate(const Eigen::ArrayXd& params,
                                  const Eigen::VectorXcd& values,
                                  const Eigen::ArrayXd& targets);

struct GaussRule {
  Eigen::ArrayXd nodes;    // on [0,1]
  Eigen::ArrayXd weights;
};

const GaussRule& gauss_rule_4();
const GaussRule& gauss_rule_8();

}  // namespace efish
