#pragma once

#include <filesystem>

#include "efish/forward.hpp"
#include "efish/polarization.hpp"
#include "efish/rng.hpp"

namespace efish {

/// Space-frequency response matrix: sensors × harmonics of post-processed
/// boundary-current perturbations.
struct SfrMatrix {
  enum class Provenance { Bem, DipoleApprox };

  Eigen::MatrixXcd values;  // L×N
  Eigen::Matrix2Xd sensor_positions;
  Eigen::Matrix2Xd sensor_normals;
  std::vector<double> frequencies;  // harmonic numbers n
  double omega0 = 1.0;
  Provenance provenance = Provenance::Bem;
  bool noisy = false;
  double zeta = 0.0;
  std::uint64_t seed = 0;

  int sensors() const { return static_cast<int>(values.rows()); }
  int harmonics() const { return static_cast<int>(values.cols()); }
};

/// Difference of exterior normal derivatives at the sensor nodes.
Eigen::VectorXcd raw_currents(const ForwardSolution& background,
                              const ForwardSolution& perturbed,
                              const std::vector<int>& sensor_indices);

/// Same difference on the full body mesh (input to the post-processor).
Eigen::VectorXcd raw_current_difference(const ForwardSolution& background,
                                        const ForwardSolution& perturbed);

/// The measurement post-processing operator applied to full-mesh
/// boundary-current vectors; sensor subsampling happens afterwards.
class PostProcessor {
 public:
  explicit PostProcessor(const BackgroundModel& model) : model_(model) {}
  Eigen::VectorXcd apply(const Eigen::VectorXcd& mesh_currents) const;
  Eigen::MatrixXcd apply_columns(const Eigen::MatrixXcd& mesh_columns) const;

 private:
  const BackgroundModel& model_;
};

/// Full simulated data package for one target and spectrum.
struct BemSfrData {
  SfrMatrix clean;              // post-processed, sensor-sampled
  Eigen::MatrixXcd raw_mesh;    // P×N raw current differences
  double raw_sensor_max = 0.0;  // max |raw| over sensors and harmonics
};

BemSfrData build_sfr_bem(const BackgroundModel& model,
                         std::shared_ptr<const CurveMesh> target,
                         const MaterialSpectrum& spectrum);

/// ∇_z of the sensor-normal kernel derivative: column l holds
/// ∇_z (∂G/∂ν_x)(x_l, z), a real 2-vector per sensor.
Eigen::Matrix2Xd sensor_kernel_gradients(const Eigen::Matrix2Xd& sensor_positions,
                                         const Eigen::Matrix2Xd& sensor_normals,
                                         Vec2 z);

/// Leading-order dipole model of the SFR matrix for a disk/ellipse target of
/// the given shape centered at z.
SfrMatrix dipole_approx_sfr(const BackgroundModel& model, Vec2 z,
                            const PtShape& shape, const MaterialSpectrum& spectrum);

/// Entrywise complex Gaussian noise of standard deviation
/// √ζ · raw_magnitude_scale on real and imaginary parts independently.
SfrMatrix add_noise(const SfrMatrix& clean, double zeta,
                    double raw_magnitude_scale, std::uint64_t seed);

enum class NoiseStage { Raw, Postprocessed };

/// Noise pipeline: perturb the raw full-mesh currents (default) or the
/// post-processed matrix entries, then sample at the sensors.
SfrMatrix noisy_sfr(const BackgroundModel& model, const BemSfrData& data,
                    double zeta, std::uint64_t seed,
                    NoiseStage stage = NoiseStage::Raw);

void write_sfr_csv(const SfrMatrix& sfr, const std::filesystem::path& stem);
void write_sfr_binary(const SfrMatrix& sfr, const std::filesystem::path& file);
SfrMatrix read_sfr_binary(const std::filesystem::path& file);

}  // namespace efish
