#include "efish/forward.hpp"

#include <cmath>
#include <iostream>

namespace efish {

double SourceField::potential(Vec2 x) const {
  const Vec2 w = x - position;
  const double r2 = w.squaredNorm();
  if (r2 == 0.0) throw SingularityError("source potential at the dipole location");
  return moment.dot(w) / (kTwoPi * r2) + gauge_offset;
}

Vec2 SourceField::gradient(Vec2 x) const {
  const Vec2 w = x - position;
  const double r2 = w.squaredNorm();
  if (r2 == 0.0) throw SingularityError("source gradient at the dipole location");
  return (moment / r2 - 2.0 * moment.dot(w) * w / (r2 * r2)) / kTwoPi;
}

Eigen::VectorXd SourceField::normal_derivative(const CurveMesh& mesh) const {
  Eigen::VectorXd out(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    out[i] = gradient(mesh.nodes.col(i)).dot(mesh.normals.col(i));
  }
  return out;
}

MaterialSpectrum MaterialSpectrum::equidistributed(double k, double eps,
                                                   double omega0, int count,
                                                   double first, double last) {
  MaterialSpectrum s;
  s.conductivity = k;
  s.permittivity = eps;
  s.omega0 = omega0;
  s.harmonics.resize(count);
  for (int i = 0; i < count; ++i) {
    s.harmonics[i] = count == 1 ? first : first + (last - first) * i / (count - 1);
  }
  s.validate();
  return s;
}

Cplx MaterialSpectrum::contrast(int i) const {
  return Cplx(conductivity, permittivity * omega0 * harmonics[i]);
}

Cplx MaterialSpectrum::lambda(int i) const {
  const Cplx kn = contrast(i);
  return (kn + 1.0) / (2.0 * (kn - 1.0));
}

void MaterialSpectrum::validate() const {
  if (!(conductivity > 0.0)) throw InvalidConfigurationError("target conductivity must be positive");
  if (permittivity < 0.0) throw InvalidConfigurationError("target permittivity must be nonnegative");
  if (!(omega0 > 0.0)) throw InvalidConfigurationError("fundamental frequency must be positive");
  if (harmonics.empty()) throw InvalidConfigurationError("at least one harmonic is required");
  for (int i = 0; i < size(); ++i) {
    if (std::abs(contrast(i) - Cplx(1.0, 0.0)) < 1e-300) {
      throw InvalidConfigurationError("unit contrast makes the target invisible");
    }
    if (std::abs(lambda(i)) <= 0.5) {
      std::cerr << "[forward] warning: |lambda| <= 1/2 at harmonic " << harmonics[i]
                << "; the transmission operator may not be invertible\n";
    }
  }
}

namespace {

template <typename Lu, typename Scalar>
double inverse_one_norm_estimate(const Lu& lu, int n) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector x = Vector::Constant(n, Scalar(1.0) / double(n));
  double est = 0.0;
  for (int it = 0; it < 4; ++it) {
    Vector y = lu.solve(x);
    est = y.template lpNorm<1>();
    Vector xi = y.unaryExpr([](Scalar v) {
      const double a = std::abs(v);
      return a == 0.0 ? Scalar(1.0) : Scalar(v / a);
    });
    Vector z = lu.adjoint().solve(xi);
    int j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= std::real(Cplx(z.dot(x)))) break;
    x = Vector::Zero(n);
    x[j] = Scalar(1.0);
  }
  return est;
}

constexpr double kRcondFloor = 1e-12;

}  // namespace

BackgroundModel::BackgroundModel(const FishBody& fish, int body_nodes)
    : fish_(fish) {
  fish_.validate();
  auto mesh = std::make_shared<CurveMesh>(discretize(fish_.body, body_nodes));
  mesh_ = mesh;
  sensor_indices_ = sensor_node_indices(*mesh_, fish_.sensor_count);

  const int p = mesh_->size();
  const double xi = fish_.skin_impedance;
  kstar_ = assemble(OperatorTag::NeumannPoincareAdjoint, *mesh_).values;
  hyper_ = hypersingular_nodal(*mesh_);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
  const Eigen::VectorXd w = mesh_->weights.matrix();

  system_ = 0.5 * eye - kstar_ + xi * hyper_ + w * w.transpose();
  current_map_ = 0.5 * eye + kstar_ - xi * hyper_;
  postprocess_ = 0.5 * eye - kstar_ + xi * hyper_;
  lu_.compute(system_);

  const double norm1 = system_.cwiseAbs().colwise().sum().maxCoeff();
  rcond_ = 1.0 / (norm1 * inverse_one_norm_estimate<decltype(lu_), double>(lu_, p));
  if (rcond_ < kRcondFloor) {
    throw SolverError("body system is numerically singular (rcond " +
                      std::to_string(rcond_) + ")");
  }

  SourceField src{fish_.dipole_position, fish_.dipole_moment};
  Eigen::VectorXd rhs = src.normal_derivative(*mesh_);
  Eigen::VectorXd psi = lu_.solve(rhs);

  background_.body_mesh = mesh_;
  background_.source = src;
  background_.skin_impedance = xi;
  background_.body_density = psi.cast<Cplx>();
  background_.boundary_current = (rhs + current_map_ * psi).cast<Cplx>();
}

Eigen::Matrix2Xd BackgroundModel::sensor_positions() const {
  Eigen::Matrix2Xd out(2, sensor_indices_.size());
  for (std::size_t l = 0; l < sensor_indices_.size(); ++l) {
    out.col(l) = mesh_->nodes.col(sensor_indices_[l]);
  }
  return out;
}

Eigen::Matrix2Xd BackgroundModel::sensor_normals() const {
  Eigen::Matrix2Xd out(2, sensor_indices_.size());
  for (std::size_t l = 0; l < sensor_indices_.size(); ++l) {
    out.col(l) = mesh_->normals.col(sensor_indices_[l]);
  }
  return out;
}

Eigen::VectorXd BackgroundModel::solve(const Eigen::VectorXd& rhs) const {
  return lu_.solve(rhs);
}

Eigen::Matrix2Xd BackgroundModel::background_gradients(
    const Eigen::Matrix2Xd& points) const {
  return background_.potential_gradients(points).real();
}

Vec2 BackgroundModel::background_gradient(Vec2 z) const {
  Eigen::Matrix2Xd pts(2, 1);
  pts.col(0) = z;
  return background_gradients(pts).col(0);
}

Eigen::VectorXcd ForwardSolution::potentials(const Eigen::Matrix2Xd& points) const {
  Eigen::VectorXcd out(points.cols());
  for (int i = 0; i < points.cols(); ++i) out[i] = source.potential(points.col(i));
  out += eval_potential(PotentialKind::SingleLayer, *body_mesh, body_density, points);
  if (skin_impedance != 0.0) {
    out += skin_impedance *
           eval_potential(PotentialKind::DoubleLayer, *body_mesh, body_density, points);
  }
  if (target_mesh) {
    out += eval_potential(PotentialKind::SingleLayer, *target_mesh, target_density, points);
  }
  return out;
}

Eigen::Matrix2Xcd ForwardSolution::potential_gradients(
    const Eigen::Matrix2Xd& points) const {
  Eigen::Matrix2Xcd out(2, points.cols());
  for (int i = 0; i < points.cols(); ++i) {
    out.col(i) = source.gradient(points.col(i)).cast<Cplx>();
  }
  out += eval_potential_gradient(PotentialKind::SingleLayer, *body_mesh, body_density,
                                 points);
  if (skin_impedance != 0.0) {
    out += skin_impedance * eval_potential_gradient(PotentialKind::DoubleLayer,
                                                    *body_mesh, body_density, points);
  }
  if (target_mesh) {
    out += eval_potential_gradient(PotentialKind::SingleLayer, *target_mesh,
                                   target_density, points);
  }
  return out;
}

Cplx ForwardSolution::potential(Vec2 x) const {
  Eigen::Matrix2Xd pts(2, 1);
  pts.col(0) = x;
  return potentials(pts)[0];
}

CVec2 ForwardSolution::potential_gradient(Vec2 x) const {
  Eigen::Matrix2Xd pts(2, 1);
  pts.col(0) = x;
  return potential_gradients(pts).col(0);
}

TransmissionSolver::TransmissionSolver(const BackgroundModel& model,
                                       std::shared_ptr<const CurveMesh> target)
    : model_(model), target_(std::move(target)) {
  const CurveMesh& body = model_.mesh();
  const CurveMesh& tgt = *target_;
  for (int q = 0; q < tgt.size(); ++q) {
    if (point_inside(model_.fish().body, tgt.nodes.col(q))) {
      throw InvalidConfigurationError("target intersects the fish body");
    }
  }
  if (point_inside(tgt.curve, body.nodes.col(0))) {
    throw InvalidConfigurationError("target encloses the fish body");
  }

  const double xi = model_.fish().skin_impedance;
  coupling_body_from_target_ =
      -cross_single_layer_normal_deriv(tgt, body.nodes, body.normals).values;
  coupling_target_from_body_ =
      -(cross_single_layer_normal_deriv(body, tgt.nodes, tgt.normals).values +
        xi * cross_double_layer_normal_deriv(body, tgt.nodes, tgt.normals).values);

  const Eigen::VectorXd wd = tgt.weights.matrix();
  const Eigen::MatrixXd kstar_target =
      assemble(OperatorTag::NeumannPoincareAdjoint, tgt).values;

  body_solve_coupling_ = model_.factorization().solve(coupling_body_from_target_);
  SourceField src = model_.background().source;
  rhs_body_ = src.normal_derivative(body);
  body_solve_rhs_ = model_.factorization().solve(rhs_body_);

  target_self_ = -kstar_target + wd * wd.transpose() -
                 coupling_target_from_body_ * body_solve_coupling_;
  rhs_target_ = src.normal_derivative(tgt) -
                coupling_target_from_body_ * body_solve_rhs_;
}

ForwardSolution TransmissionSolver::solve(Cplx contrast) const {
  if (std::abs(contrast - Cplx(1.0, 0.0)) < 1e-300) {
    throw InvalidConfigurationError("unit contrast makes the target invisible");
  }
  const Cplx lambda = (contrast + 1.0) / (2.0 * (contrast - 1.0));
  const int m = target_->size();
  Eigen::MatrixXcd schur = target_self_.cast<Cplx>();
  schur.diagonal().array() += lambda;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(schur);
  const double norm1 = schur.cwiseAbs().colwise().sum().maxCoeff();
  const double rcond =
      1.0 / (norm1 * inverse_one_norm_estimate<decltype(lu), Cplx>(lu, m));
  if (rcond < kRcondFloor) {
    throw SolverError("transmission system is numerically singular (rcond " +
                      std::to_string(rcond) + ")");
  }

  ForwardSolution sol;
  sol.body_mesh = model_.mesh_ptr();
  sol.target_mesh = target_;
  sol.source = model_.background().source;
  sol.skin_impedance = model_.fish().skin_impedance;
  sol.contrast = contrast;
  sol.target_density = lu.solve(rhs_target_.cast<Cplx>().eval());
  sol.body_density = body_solve_rhs_.cast<Cplx>() -
                     body_solve_coupling_.cast<Cplx>() * sol.target_density;
  sol.boundary_current = rhs_body_.cast<Cplx>() +
                         model_.exterior_current_map().cast<Cplx>() * sol.body_density -
                         coupling_body_from_target_.cast<Cplx>() * sol.target_density;
  return sol;
}

std::vector<ForwardSolution> TransmissionSolver::sweep(
    const MaterialSpectrum& spectrum) const {
  spectrum.validate();
  std::vector<ForwardSolution> out;
  out.reserve(spectrum.size());
  for (int i = 0; i < spectrum.size(); ++i) out.push_back(solve(spectrum.contrast(i)));
  return out;
}

std::vector<ForwardSolution> frequency_sweep(const BackgroundModel& model,
                                             std::shared_ptr<const CurveMesh> target,
                                             const MaterialSpectrum& spectrum) {
  TransmissionSolver solver(model, std::move(target));
  return solver.sweep(spectrum);
}

Eigen::VectorXcd solve_exterior_transmission(
    const CurveMesh& target, Cplx contrast,
    const Eigen::VectorXcd& incident_normal_deriv) {
  if (std::abs(contrast - Cplx(1.0, 0.0)) < 1e-300) {
    throw InvalidConfigurationError("unit contrast makes the target invisible");
  }
  const Cplx lambda = (contrast + 1.0) / (2.0 * (contrast - 1.0));
  const Eigen::VectorXd w = target.weights.matrix();
  Eigen::MatrixXcd sys =
      (-assemble(OperatorTag::NeumannPoincareAdjoint, target).values +
       w * w.transpose())
          .cast<Cplx>();
  sys.diagonal().array() += lambda;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(sys).solve(incident_normal_deriv);
}

}  // namespace efish
