#pragma once

#include "efish/measurements.hpp"

namespace efish {

/// Orthogonal projector onto the leading singular subspace of an SFR matrix,
/// stored through an orthonormal basis of the signal space.
struct SignalProjector {
  Eigen::MatrixXcd basis;  // L×rank

  int rank() const { return static_cast<int>(basis.cols()); }
  Eigen::VectorXcd residual(const Eigen::VectorXcd& g) const;
  double residual_norm_unit(const Eigen::VectorXcd& g_unit) const;
};

/// Power iteration on A·Aᴴ with deflation; tolerance 1e-12. Throws on a zero
/// matrix.
SignalProjector signal_projector(const Eigen::MatrixXcd& a, int rank = 1);

struct GridSpec {
  double xmin = -3.0, xmax = 3.0;
  double ymin = -3.0, ymax = 3.0;
  int nx = 151, ny = 151;
  double margin = 0.1;   // exclusion margin around the body
  double cap = 1e12;     // guard for near-exact residual cancellation
};

struct ImagingGrid {
  GridSpec spec;
  Eigen::ArrayXd xs, ys;
  Eigen::MatrixXd values;          // ny×nx, NaN where masked
  std::vector<std::uint8_t> mask;  // row-major iy*nx+ix, 1 = evaluated
  Vec2 argmax{0, 0};
  double argmax_value = 0.0;
};

/// Precomputed search-grid data for one background: the exclusion mask, the
/// background gradient, and the sensor kernel vectors at every evaluable
/// point. Shared read-only across noise trials.
class GridGeometry {
 public:
  GridGeometry(const BackgroundModel& model, const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  const Eigen::ArrayXd& xs() const { return xs_; }
  const Eigen::ArrayXd& ys() const { return ys_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  int evaluable_count() const { return static_cast<int>(flat_indices_.size()); }
  const std::vector<int>& flat_indices() const { return flat_indices_; }
  const Eigen::Matrix2Xd& background_gradients() const { return grad_u_; }
  const Eigen::MatrixXd& kernel_x() const { return kernel_x_; }  // L×E
  const Eigen::MatrixXd& kernel_y() const { return kernel_y_; }  // L×E

 private:
  GridSpec spec_;
  Eigen::ArrayXd xs_, ys_;
  std::vector<std::uint8_t> mask_;
  std::vector<int> flat_indices_;
  Eigen::Matrix2Xd grad_u_;
  Eigen::MatrixXd kernel_x_, kernel_y_;
};

/// Combined imaging functional at one point: the larger of the
/// background-dependent and background-free branch values, capped.
/// `sensor_kernels` holds ∇_z(∂G/∂ν_x)(x_l, z) columnwise.
double music_value(const SignalProjector& projector,
                   const Eigen::Matrix2Xd& sensor_kernels, Vec2 grad_u,
                   double cap = 1e12);

/// Evaluate the imaging functional over the whole grid; deterministic,
/// ties broken toward the first (row-major) index.
ImagingGrid scan(const GridGeometry& geometry, const SignalProjector& projector);

struct LocationStudy {
  const BackgroundModel& model;
  const BemSfrData& data;
  const GridGeometry& geometry;
  Vec2 true_center;
  int projector_rank = 1;
  NoiseStage stage = NoiseStage::Raw;
};

/// Root-mean-square localization error over seeded noise trials; trials are
/// independent and may run on several workers without changing results.
double rms_location_error(const LocationStudy& study, double zeta, int trials,
                          std::uint64_t master_seed, std::uint64_t stream,
                          int workers = 1);

}  // namespace efish
