#pragma once

#include <memory>
#include <vector>

#include "efish/layer_ops.hpp"

namespace efish {

/// Electric-organ source: an analytic dipole H(x) = p·∇G(x - z0). The
/// optional additive constant only shifts the potential gauge.
struct SourceField {
  Vec2 position{0.7, 0.0};
  Vec2 moment{1.0, 0.0};
  double gauge_offset = 0.0;

  double potential(Vec2 x) const;
  Vec2 gradient(Vec2 x) const;
  Eigen::VectorXd normal_derivative(const CurveMesh& mesh) const;
};

/// Target material over the harmonic comb: k_n = k + i·ε·ω0·n.
struct MaterialSpectrum {
  double conductivity = 2.0;
  double permittivity = 1.0;
  double omega0 = 1.0;
  std::vector<double> harmonics;  // the n values

  static MaterialSpectrum equidistributed(double k, double eps, double omega0,
                                          int count, double first, double last);

  int size() const { return static_cast<int>(harmonics.size()); }
  Cplx contrast(int i) const;
  Cplx lambda(int i) const;  // (k_n + 1) / (2 (k_n - 1))
  void validate() const;
};

struct ForwardSolution {
  std::shared_ptr<const CurveMesh> body_mesh;
  std::shared_ptr<const CurveMesh> target_mesh;  // null for the background
  SourceField source;
  double skin_impedance = 0.0;
  Cplx contrast{1.0, 0.0};
  Eigen::VectorXcd body_density;      // ψ, P1 nodal on Γ
  Eigen::VectorXcd target_density;    // φ, P0 nodal on ∂D
  Eigen::VectorXcd boundary_current;  // exterior normal derivative at Γ nodes

  Eigen::VectorXcd potentials(const Eigen::Matrix2Xd& points) const;
  Eigen::Matrix2Xcd potential_gradients(const Eigen::Matrix2Xd& points) const;
  Cplx potential(Vec2 x) const;
  CVec2 potential_gradient(Vec2 x) const;
};

/// Assembled body-boundary operators for one fish and mesh: the penalized
/// Robin system, its factorization, the exterior-current map and the
/// measurement post-processing operator. Also solves and caches the
/// target-free background field. Immutable after construction.
class BackgroundModel {
 public:
  BackgroundModel(const FishBody& fish, int body_nodes = 256);

  const FishBody& fish() const { return fish_; }
  const CurveMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const CurveMesh> mesh_ptr() const { return mesh_; }
  const std::vector<int>& sensor_indices() const { return sensor_indices_; }
  Eigen::Matrix2Xd sensor_positions() const;
  Eigen::Matrix2Xd sensor_normals() const;

  const Eigen::MatrixXd& adjoint_double_layer() const { return kstar_; }
  const Eigen::MatrixXd& hypersingular() const { return hyper_; }
  /// ½I + K* - ξT: maps ψ to the exterior normal derivative minus ∂H/∂ν.
  const Eigen::MatrixXd& exterior_current_map() const { return current_map_; }
  /// ½I - K* + ξT: the measurement post-processing operator. It maps the
  /// boundary current of the skin-impedance point-source kernel to minus the
  /// free-space kernel current (verified to machine precision in the tests).
  const Eigen::MatrixXd& postprocess_operator() const { return postprocess_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  const Eigen::PartialPivLU<Eigen::MatrixXd>& factorization() const { return lu_; }
  double rcond() const { return rcond_; }

  const ForwardSolution& background() const { return background_; }
  /// Background potential gradient ∇U at exterior points.
  Eigen::Matrix2Xd background_gradients(const Eigen::Matrix2Xd& points) const;
  Vec2 background_gradient(Vec2 z) const;

 private:
  FishBody fish_;
  std::shared_ptr<const CurveMesh> mesh_;
  std::vector<int> sensor_indices_;
  Eigen::MatrixXd kstar_, hyper_, system_, current_map_, postprocess_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
  ForwardSolution background_;
};

/// Two-boundary transmission solver. The body blocks and their factorization
/// are assembled once; each frequency only updates the target-side contrast.
class TransmissionSolver {
 public:
  TransmissionSolver(const BackgroundModel& model,
                     std::shared_ptr<const CurveMesh> target);

  ForwardSolution solve(Cplx contrast) const;
  std::vector<ForwardSolution> sweep(const MaterialSpectrum& spectrum) const;

  const BackgroundModel& model() const { return model_; }
  const CurveMesh& target_mesh() const { return *target_; }

 private:
  const BackgroundModel& model_;
  std::shared_ptr<const CurveMesh> target_;
  Eigen::MatrixXd coupling_body_from_target_;   // P×M block
  Eigen::MatrixXd coupling_target_from_body_;   // M×P block
  Eigen::MatrixXd target_self_;                 // -K*_∂D + penalty - A21·Y
  Eigen::MatrixXd body_solve_coupling_;         // Y = A11⁻¹·A12
  Eigen::VectorXd body_solve_rhs_;              // y = A11⁻¹·rhs1
  Eigen::VectorXd rhs_target_;                  // rhs2 - A21·y
  Eigen::VectorXd rhs_body_;                    // ∂H/∂ν on Γ
};

std::vector<ForwardSolution> frequency_sweep(const BackgroundModel& model,
                                             std::shared_ptr<const CurveMesh> target,
                                             const MaterialSpectrum& spectrum);

/// Free-space transmission solve (no fish): returns the boundary density of
/// the scattered single-layer field for given exterior Neumann data of the
/// incident potential.
Eigen::VectorXcd solve_exterior_transmission(const CurveMesh& target, Cplx contrast,
                                             const Eigen::VectorXcd& incident_normal_deriv);

}  // namespace efish
