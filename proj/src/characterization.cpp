#include "efish/characterization.hpp"

#include <cmath>
#include <iostream>

namespace efish {

std::vector<Cplx> estimate_tau_disk(const SfrMatrix& sfr, Vec2 z, Vec2 grad_u) {
  const Eigen::Matrix2Xd kernels =
      sensor_kernel_gradients(sfr.sensor_positions, sfr.sensor_normals, z);
  Eigen::VectorXd model = kTwoPi * (grad_u.x() * kernels.row(0).transpose() +
                                    grad_u.y() * kernels.row(1).transpose());
  const double denom = model.squaredNorm();
  if (denom < 1e-280) {
    throw RankDeficiencyError("degenerate geometry: disk model vector vanishes");
  }
  std::vector<Cplx> taus(sfr.harmonics());
  for (int n = 0; n < sfr.harmonics(); ++n) {
    taus[n] = model.cast<Cplx>().dot(sfr.values.col(n)) / denom;
  }
  return taus;
}

namespace {

struct GaussNewton {
  // Minimizes the stacked squared residual of a complex-valued model with
  // log-transformed positive parameters.
  using Model = std::function<void(const Eigen::VectorXd& params,
                                   Eigen::VectorXcd& residuals,
                                   Eigen::MatrixXcd& jacobian)>;

  static bool run(const Model& model, Eigen::VectorXd& params, int max_iter,
                  double grad_tol, double* final_cost, int* iterations) {
    Eigen::VectorXcd r;
    Eigen::MatrixXcd j;
    model(params, r, j);
    double cost = r.squaredNorm();
    int it = 0;
    bool converged = false;
    double mu = 0.0;  // Levenberg damping, raised on rejected steps
    for (; it < max_iter; ++it) {
      // Real normal equations of the complexified system.
      const Eigen::MatrixXd jtj =
          (j.adjoint() * j).real().selfadjointView<Eigen::Lower>();
      const Eigen::VectorXd jtr = (j.adjoint() * r).real();
      if (jtr.norm() < grad_tol) {
        converged = true;
        break;
      }
      if (mu == 0.0) mu = 1e-10 * jtj.trace() / jtj.rows();
      bool improved = false;
      for (int attempt = 0; attempt < 60; ++attempt) {
        Eigen::MatrixXd damped = jtj;
        damped.diagonal().array() += mu;
        Eigen::VectorXd step = -damped.ldlt().solve(jtr);
        // Parameters live on a log scale: cap the move at e^3 per iteration.
        const double span = step.cwiseAbs().maxCoeff();
        if (span > 3.0) step *= 3.0 / span;
        Eigen::VectorXd trial = params + step;
        Eigen::VectorXcd rt;
        Eigen::MatrixXcd jt;
        model(trial, rt, jt);
        if (rt.squaredNorm() < cost) {
          params = trial;
          r = rt;
          j = jt;
          cost = rt.squaredNorm();
          mu = std::max(mu * 0.25, 1e-14);
          improved = true;
          break;
        }
        mu *= 4.0;
      }
      if (!improved) {
        converged = jtr.norm() < 1e-6 * std::max(1.0, cost);
        break;
      }
    }
    if (final_cost) *final_cost = cost;
    if (iterations) *iterations = it;
    return converged;
  }
};

}  // namespace

CharacterizationResult fit_disk(const std::vector<Cplx>& taus,
                                const std::vector<double>& harmonics,
                                double omega0, double alpha0, double k0,
                                double eps0) {
  if (taus.size() != harmonics.size()) {
    throw InvalidConfigurationError("one tau estimate per harmonic is required");
  }
  if (taus.size() < 2) {
    throw InvalidConfigurationError(
        "disk characterization needs at least two frequencies; size, "
        "conductivity and permittivity are not identifiable from one");
  }
  const int n = static_cast<int>(taus.size());
  auto model = [&](const Eigen::VectorXd& p, Eigen::VectorXcd& r,
                   Eigen::MatrixXcd& j) {
    const double alpha = std::exp(p[0]);
    const double k = std::exp(p[1]);
    const double eps = std::exp(p[2]);
    r.resize(n);
    j.resize(n, 3);
    for (int i = 0; i < n; ++i) {
      const Cplx kn(k, eps * omega0 * harmonics[i]);
      const Cplx m = alpha * alpha * (kn - 1.0) / (kn + 1.0);
      r[i] = m - taus[i];
      const Cplx dm_dkn = alpha * alpha * 2.0 / ((kn + 1.0) * (kn + 1.0));
      j(i, 0) = 2.0 * m;                                     // ∂/∂log α
      j(i, 1) = dm_dkn * k;                                  // ∂/∂log k
      j(i, 2) = dm_dkn * Cplx(0.0, eps * omega0 * harmonics[i]);  // ∂/∂log ε
    }
  };
  Eigen::VectorXd params(3);
  params << std::log(alpha0), std::log(k0), std::log(eps0);
  CharacterizationResult res;
  double cost = 0.0;
  res.converged = GaussNewton::run(model, params, 200, 1e-12, &cost, &res.iterations);
  res.size_a = res.size_b = std::exp(params[0]);
  res.conductivity = std::exp(params[1]);
  res.permittivity = std::exp(params[2]);
  res.residual = std::sqrt(cost);
  if (!res.converged) {
    std::cerr << "[characterization] warning: disk fit stopped without meeting "
                 "the gradient tolerance (residual "
              << res.residual << ")\n";
  }
  return res;
}

std::vector<PolarizationTensor> estimate_pt_two_positions(
    const SfrMatrix& sfr1, const SfrMatrix& sfr2, Vec2 z1, Vec2 z2,
    Vec2 grad_u1, Vec2 grad_u2) {
  if (sfr1.harmonics() != sfr2.harmonics() || sfr1.sensors() != sfr2.sensors()) {
    throw InvalidConfigurationError("the two measurement matrices must share shape");
  }
  const double cross =
      grad_u1.x() * grad_u2.y() - grad_u1.y() * grad_u2.x();
  if (std::abs(cross) < 1e-10 * grad_u1.norm() * grad_u2.norm()) {
    throw RankDeficiencyError(
        "parallel illumination gradients at the two positions: the symmetric "
        "tensor is not identifiable (move the fish)");
  }
  const int l = sfr1.sensors();
  Eigen::MatrixXd f(2 * l, 3);
  auto fill = [&](const SfrMatrix& sfr, Vec2 z, Vec2 gu, int row0) {
    const Eigen::Matrix2Xd k =
        sensor_kernel_gradients(sfr.sensor_positions, sfr.sensor_normals, z);
    for (int i = 0; i < l; ++i) {
      const double vx = k(0, i), vy = k(1, i);
      f(row0 + i, 0) = gu.x() * vx;
      f(row0 + i, 1) = gu.x() * vy + gu.y() * vx;
      f(row0 + i, 2) = gu.y() * vy;
    }
  };
  fill(sfr1, z1, grad_u1, 0);
  fill(sfr2, z2, grad_u2, l);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(f);
  std::vector<PolarizationTensor> out(sfr1.harmonics());
  for (int n = 0; n < sfr1.harmonics(); ++n) {
    Eigen::VectorXd bre(2 * l), bim(2 * l);
    bre.head(l) = sfr1.values.col(n).real();
    bre.tail(l) = sfr2.values.col(n).real();
    bim.head(l) = sfr1.values.col(n).imag();
    bim.tail(l) = sfr2.values.col(n).imag();
    const Eigen::Vector3d xre = qr.solve(bre);
    const Eigen::Vector3d xim = qr.solve(bim);
    out[n].m11 = Cplx(xre[0], xim[0]);
    out[n].m12 = Cplx(xre[1], xim[1]);
    out[n].m22 = Cplx(xre[2], xim[2]);
  }
  return out;
}

SemiAxes semiaxes_from_pt(const PolarizationTensor& tensor, double limit_quality) {
  const auto eig = tensor.eigensystem();
  if (eig.tau1.real() <= 0.0 && eig.tau2.real() <= 0.0) {
    throw InvalidConfigurationError(
        "invalid tensor: both eigenvalues have non-positive real part");
  }
  if (limit_quality < 10.0) {
    std::cerr << "[characterization] warning: highest harmonic too low for the "
                 "high-contrast limit (eps*omega0*N / k = "
              << limit_quality << " < 10)\n";
  }
  const Cplx root = std::sqrt(kPi * (eig.tau1 + eig.tau2));
  SemiAxes axes;
  axes.a = (eig.tau1 / root).real();
  axes.b = (eig.tau2 / root).real();
  axes.angle = eig.angle;
  return axes;
}

MaterialEstimate material_from_pt(const std::vector<PolarizationTensor>& tensors,
                                  double a_est, double b_est, double omega0,
                                  const std::vector<double>& harmonics) {
  if (tensors.size() != harmonics.size() || tensors.empty()) {
    throw InvalidConfigurationError("one tensor per harmonic is required");
  }
  // The eigenvectors are frequency independent (the target axes): read the
  // major-axis direction off the last tensor and use its Rayleigh quotient,
  // exact for complex symmetric tensors with real eigenvectors.
  const double angle = tensors.back().eigensystem().angle;
  const Vec2 u(std::cos(angle), std::sin(angle));
  const double denom = kPi * a_est * b_est * (a_est + b_est);
  double k_acc = 0.0, eps_acc = 0.0;
  int k_used = 0, eps_used = 0;
  const int k_count = std::min<std::size_t>(3, tensors.size());
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const Eigen::Matrix2cd m = tensors[i].matrix();
    const Cplx tau1 = u.x() * u.x() * m(0, 0) + 2.0 * u.x() * u.y() * m(0, 1) +
                      u.y() * u.y() * m(1, 1);
    const Cplx mu = tau1 / denom;
    const Cplx lower = 1.0 - b_est * mu;
    if (std::abs(lower) < 1e-12 * (1.0 + std::abs(b_est * mu))) {
      std::cerr << "[characterization] warning: skipping harmonic "
                << harmonics[i] << " (vanishing denominator)\n";
      continue;
    }
    const Cplx kn = (1.0 + a_est * mu) / lower;
    if (static_cast<int>(i) < k_count) {
      k_acc += kn.real();
      ++k_used;
    }
    eps_acc += kn.imag() / (omega0 * harmonics[i]);
    ++eps_used;
  }
  if (k_used == 0 || eps_used == 0) {
    throw SolverError("all harmonics skipped in the material estimate");
  }
  return {k_acc / k_used, eps_acc / eps_used};
}

CharacterizationResult fit_ellipse_eigenvalues(
    const std::vector<PolarizationTensor>& tensors,
    const std::vector<double>& harmonics, double omega0, double a0, double b0,
    double k0, double eps0) {
  if (tensors.size() != harmonics.size() || tensors.size() < 2) {
    throw InvalidConfigurationError("ellipse fit needs tensors for >= 2 harmonics");
  }
  const int n = static_cast<int>(tensors.size());
  std::vector<Cplx> t1(n), t2(n);
  double angle_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto eig = tensors[i].eigensystem();
    t1[i] = eig.tau1;
    t2[i] = eig.tau2;
    angle_sum += eig.angle;
  }
  auto eval_taus = [&](double a, double b, double k, double eps, int i,
                       Cplx& m1, Cplx& m2) {
    const Cplx kn(k, eps * omega0 * harmonics[i]);
    const Cplx common = (kn - 1.0) * kPi * a * b * (a + b);
    m1 = common / (a + kn * b);
    m2 = common / (b + kn * a);
  };
  auto model = [&](const Eigen::VectorXd& p, Eigen::VectorXcd& r,
                   Eigen::MatrixXcd& j) {
    const double a = std::exp(p[0]), b = std::exp(p[1]);
    const double k = std::exp(p[2]), eps = std::exp(p[3]);
    r.resize(2 * n);
    j.resize(2 * n, 4);
    for (int i = 0; i < n; ++i) {
      Cplx m1, m2;
      eval_taus(a, b, k, eps, i, m1, m2);
      r[2 * i] = m1 - t1[i];
      r[2 * i + 1] = m2 - t2[i];
      // Central differences in the log parameters.
      const double h = 1e-6;
      for (int q = 0; q < 4; ++q) {
        Eigen::VectorXd pp = p, pm = p;
        pp[q] += h;
        pm[q] -= h;
        Cplx m1p, m2p, m1m, m2m;
        eval_taus(std::exp(pp[0]), std::exp(pp[1]), std::exp(pp[2]), std::exp(pp[3]),
                  i, m1p, m2p);
        eval_taus(std::exp(pm[0]), std::exp(pm[1]), std::exp(pm[2]), std::exp(pm[3]),
                  i, m1m, m2m);
        j(2 * i, q) = (m1p - m1m) / (2.0 * h);
        j(2 * i + 1, q) = (m2p - m2m) / (2.0 * h);
      }
    }
  };
  Eigen::VectorXd params(4);
  params << std::log(a0), std::log(b0), std::log(k0), std::log(eps0);
  CharacterizationResult res;
  double cost = 0.0;
  res.converged = GaussNewton::run(model, params, 200, 1e-12, &cost, &res.iterations);
  res.size_a = std::exp(params[0]);
  res.size_b = std::exp(params[1]);
  res.conductivity = std::exp(params[2]);
  res.permittivity = std::exp(params[3]);
  res.angle = angle_sum / n;
  res.residual = std::sqrt(cost);
  return res;
}

}  // namespace efish
