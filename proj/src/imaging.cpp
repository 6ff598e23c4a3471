#include "efish/imaging.hpp"

#include <cmath>
#include <limits>
#include <thread>

namespace efish {

Eigen::VectorXcd SignalProjector::residual(const Eigen::VectorXcd& g) const {
  return g - basis * (basis.adjoint() * g);
}

double SignalProjector::residual_norm_unit(const Eigen::VectorXcd& g_unit) const {
  const double proj2 = (basis.adjoint() * g_unit).squaredNorm();
  return std::sqrt(std::max(0.0, 1.0 - proj2));
}

SignalProjector signal_projector(const Eigen::MatrixXcd& a, int rank) {
  if (rank < 1 || rank > 2) throw std::invalid_argument("projector rank must be 1 or 2");
  const double scale = a.norm();
  if (scale == 0.0) throw SolverError("cannot build a projector from a zero matrix");
  const int l = static_cast<int>(a.rows());
  Eigen::MatrixXcd b = a * a.adjoint() / (scale * scale);

  SignalProjector proj;
  proj.basis.resize(l, rank);
  for (int r = 0; r < rank; ++r) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Constant(l, Cplx(1.0 / std::sqrt(l), 0.0));
    double sigma2 = 0.0;
    for (int it = 0; it < 1000; ++it) {
      Eigen::VectorXcd w = b * v;
      const double norm = w.norm();
      if (norm < 1e-300) {
        // Deflated matrix vanished: complete with any orthonormal direction.
        w = Eigen::VectorXcd::Zero(l);
        w[r] = 1.0;
        for (int q = 0; q < r; ++q) {
          w -= proj.basis.col(q) * (proj.basis.col(q).adjoint() * w);
        }
        v = w.normalized();
        sigma2 = 0.0;
        break;
      }
      w /= norm;
      const Cplx phase_dot = v.adjoint() * w;
      const double phase_mag = std::abs(phase_dot);
      Eigen::VectorXcd aligned =
          phase_mag > 0 ? (w * (std::conj(phase_dot) / phase_mag)).eval() : w;
      const double delta = (aligned - v).norm();
      v = aligned;
      sigma2 = norm;
      if (delta < 1e-12) break;
    }
    proj.basis.col(r) = v;
    b -= sigma2 * v * v.adjoint();
  }
  // Re-orthonormalize (deflation is only accurate to the iteration tolerance).
  if (rank == 2) {
    proj.basis.col(1) -=
        proj.basis.col(0) * (proj.basis.col(0).adjoint() * proj.basis.col(1));
    proj.basis.col(1).normalize();
  }
  return proj;
}

namespace {

constexpr double kTinyIllumination = 1e-280;

// Smallest eigenvalue of the 2×2 Hermitian pencil (resid, gram).
double min_generalized_eig(const Eigen::Matrix2cd& resid, const Eigen::Matrix2d& gram) {
  // Cholesky of gram = L Lᵀ.
  const double l00 = std::sqrt(gram(0, 0));
  const double l10 = gram(1, 0) / l00;
  const double l11 = std::sqrt(std::max(gram(1, 1) - l10 * l10, 0.0));
  if (!(l00 > 0.0) || !(l11 > 0.0)) return -1.0;  // degenerate span
  // C = L⁻¹ resid L⁻ᴴ.
  const Cplx r00 = resid(0, 0), r01 = resid(0, 1), r11 = resid(1, 1);
  const Cplx c00 = r00 / (l00 * l00);
  const Cplx c01 = (r01 / l00 - l10 * c00) / l11;
  const Cplx c11 =
      (r11 - l10 * (r01 / l00) - std::conj(l10 * (r01 / l00)) + l10 * l10 * c00) /
      (l11 * l11);
  const double a = c00.real(), bb = c11.real();
  const double half_diff = 0.5 * (a - bb);
  return 0.5 * (a + bb) - std::sqrt(half_diff * half_diff + std::norm(c01));
}

// Core of the combined functional given the L×2 kernel matrix V (columns are
// the two components over sensors) and the background gradient at z.
double combined_value(const SignalProjector& projector, const Eigen::VectorXd& vx,
                      const Eigen::VectorXd& vy, Vec2 grad_u, double cap,
                      bool* flagged) {
  double best = 0.0;
  bool have_branch = false;

  // Background-dependent branch.
  Eigen::VectorXd gt = grad_u.x() * vx + grad_u.y() * vy;
  const double gnorm = gt.norm();
  if (gnorm > kTinyIllumination) {
    const double res =
        projector.residual_norm_unit((gt / gnorm).cast<Cplx>().eval());
    best = std::max(best, res > 1.0 / cap ? 1.0 / res : cap);
    have_branch = true;
  }

  // Background-free branch: minimum residual over unit vectors in the span
  // of the two kernel columns, from the 2×2 Gram system.
  Eigen::Matrix2d gram;
  gram << vx.squaredNorm(), vx.dot(vy), vx.dot(vy), vy.squaredNorm();
  if (gram(0, 0) + gram(1, 1) > kTinyIllumination) {
    const Eigen::MatrixXcd bv_x = projector.basis.adjoint() * vx.cast<Cplx>();
    const Eigen::MatrixXcd bv_y = projector.basis.adjoint() * vy.cast<Cplx>();
    Eigen::Matrix2cd resid;
    resid(0, 0) = gram(0, 0) - bv_x.squaredNorm();
    resid(1, 1) = gram(1, 1) - bv_y.squaredNorm();
    resid(0, 1) = gram(0, 1) - (bv_x.adjoint() * bv_y)(0, 0);
    resid(1, 0) = std::conj(resid(0, 1));
    const double lam = min_generalized_eig(resid, gram);
    if (lam >= 0.0) {
      const double res = std::sqrt(std::max(lam, 0.0));
      best = std::max(best, res > 1.0 / cap ? 1.0 / res : cap);
      have_branch = true;
    }
  }

  if (flagged) *flagged = !have_branch;
  return best;
}

}  // namespace

double music_value(const SignalProjector& projector,
                   const Eigen::Matrix2Xd& sensor_kernels, Vec2 grad_u, double cap) {
  const Eigen::VectorXd vx = sensor_kernels.row(0).transpose();
  const Eigen::VectorXd vy = sensor_kernels.row(1).transpose();
  bool flagged = false;
  const double value = combined_value(projector, vx, vy, grad_u, cap, &flagged);
  if (flagged) throw SolverError("illumination vector vanishes at the query point");
  return value;
}

GridGeometry::GridGeometry(const BackgroundModel& model, const GridSpec& spec)
    : spec_(spec) {
  if (spec.nx < 2 || spec.ny < 2) throw InvalidConfigurationError("grid needs at least 2x2 points");
  xs_.resize(spec.nx);
  ys_.resize(spec.ny);
  for (int i = 0; i < spec.nx; ++i) {
    xs_[i] = spec.xmin + (spec.xmax - spec.xmin) * i / (spec.nx - 1);
  }
  for (int j = 0; j < spec.ny; ++j) {
    ys_[j] = spec.ymin + (spec.ymax - spec.ymin) * j / (spec.ny - 1);
  }

  // Exclusion mask from a dense polygon of the body.
  const int nposeg = 512;
  Eigen::Matrix2Xd poly(2, nposeg);
  for (int i = 0; i < nposeg; ++i) {
    poly.col(i) = model.fish().body.position(kTwoPi * i / nposeg);
  }
  auto masked = [&](Vec2 p) {
    double dmin2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nposeg; ++i) {
      dmin2 = std::min(dmin2, (poly.col(i) - p).squaredNorm());
    }
    if (dmin2 < spec_.margin * spec_.margin) return true;
    int crossings = 0;
    for (int i = 0; i < nposeg; ++i) {
      const Vec2 a = poly.col(i), b = poly.col((i + 1) % nposeg);
      if ((a.y() > p.y()) != (b.y() > p.y())) {
        const double xc = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
        if (xc > p.x()) ++crossings;
      }
    }
    return crossings % 2 == 1;
  };

  mask_.assign(static_cast<std::size_t>(spec.nx) * spec.ny, 0);
  std::vector<Vec2> pts;
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      const Vec2 p(xs_[i], ys_[j]);
      if (!masked(p)) {
        mask_[static_cast<std::size_t>(j) * spec.nx + i] = 1;
        flat_indices_.push_back(j * spec.nx + i);
        pts.push_back(p);
      }
    }
  }
  if (flat_indices_.empty()) {
    throw InvalidConfigurationError("imaging window contains no evaluable points");
  }

  Eigen::Matrix2Xd points(2, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) points.col(i) = pts[i];
  grad_u_ = model.background_gradients(points);

  const Eigen::Matrix2Xd sensors = model.sensor_positions();
  const Eigen::Matrix2Xd normals = model.sensor_normals();
  const int l = static_cast<int>(sensors.cols());
  kernel_x_.resize(l, points.cols());
  kernel_y_.resize(l, points.cols());
  for (int e = 0; e < points.cols(); ++e) {
    const Eigen::Matrix2Xd k = sensor_kernel_gradients(sensors, normals, points.col(e));
    kernel_x_.col(e) = k.row(0).transpose();
    kernel_y_.col(e) = k.row(1).transpose();
  }
}

ImagingGrid scan(const GridGeometry& geometry, const SignalProjector& projector) {
  const GridSpec& spec = geometry.spec();
  ImagingGrid grid;
  grid.spec = spec;
  grid.xs = geometry.xs();
  grid.ys = geometry.ys();
  grid.mask = geometry.mask();
  grid.values = Eigen::MatrixXd::Constant(spec.ny, spec.nx,
                                          std::numeric_limits<double>::quiet_NaN());
  double best = -1.0;
  int best_flat = -1;
  for (int e = 0; e < geometry.evaluable_count(); ++e) {
    bool flagged = false;
    const double value = combined_value(
        projector, geometry.kernel_x().col(e), geometry.kernel_y().col(e),
        geometry.background_gradients().col(e), spec.cap, &flagged);
    const int flat = geometry.flat_indices()[e];
    if (flagged) {
      grid.mask[flat] = 0;  // skipped: illumination undefined here
      continue;
    }
    const int iy = flat / spec.nx, ix = flat % spec.nx;
    grid.values(iy, ix) = value;
    if (value > best) {
      best = value;
      best_flat = flat;
    }
  }
  if (best_flat < 0) throw SolverError("no point of the grid could be evaluated");
  grid.argmax_value = best;
  grid.argmax = Vec2(grid.xs[best_flat % spec.nx], grid.ys[best_flat / spec.nx]);
  return grid;
}

double rms_location_error(const LocationStudy& study, double zeta, int trials,
                          std::uint64_t master_seed, std::uint64_t stream,
                          int workers) {
  if (trials < 1) throw InvalidConfigurationError("at least one trial is required");
  std::vector<double> sq_err(trials, 0.0);
  auto run_range = [&](int begin, int end) {
    for (int t = begin; t < end; ++t) {
      const std::uint64_t seed = derive_seed(master_seed, t, stream);
      const SfrMatrix noisy =
          noisy_sfr(study.model, study.data, zeta, seed, study.stage);
      const SignalProjector proj =
          signal_projector(noisy.values, study.projector_rank);
      const ImagingGrid grid = scan(study.geometry, proj);
      sq_err[t] = (grid.argmax - study.true_center).squaredNorm();
    }
  };
  workers = std::max(1, std::min(workers, trials));
  if (workers == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(trials, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  double acc = 0.0;
  for (double e : sq_err) acc += e;
  return std::sqrt(acc / trials);
}

}  // namespace efish
