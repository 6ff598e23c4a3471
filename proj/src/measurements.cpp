#include "efish/measurements.hpp"

#include <cstring>
#include <fstream>

namespace efish {

Eigen::VectorXcd raw_current_difference(const ForwardSolution& background,
                                        const ForwardSolution& perturbed) {
  if (background.body_mesh != perturbed.body_mesh) {
    throw InvalidConfigurationError(
        "current difference requires both solutions on the same body mesh");
  }
  return perturbed.boundary_current - background.boundary_current;
}

Eigen::VectorXcd raw_currents(const ForwardSolution& background,
                              const ForwardSolution& perturbed,
                              const std::vector<int>& sensor_indices) {
  const Eigen::VectorXcd diff = raw_current_difference(background, perturbed);
  Eigen::VectorXcd out(sensor_indices.size());
  for (std::size_t l = 0; l < sensor_indices.size(); ++l) {
    out[l] = diff[sensor_indices[l]];
  }
  return out;
}

Eigen::VectorXcd PostProcessor::apply(const Eigen::VectorXcd& mesh_currents) const {
  if (mesh_currents.size() != model_.mesh().size()) {
    throw InvalidConfigurationError("post-processing needs full-mesh current data");
  }
  return model_.postprocess_operator().cast<Cplx>() * mesh_currents;
}

Eigen::MatrixXcd PostProcessor::apply_columns(const Eigen::MatrixXcd& cols) const {
  if (cols.rows() != model_.mesh().size()) {
    throw InvalidConfigurationError("post-processing needs full-mesh current data");
  }
  return model_.postprocess_operator().cast<Cplx>() * cols;
}

namespace {

SfrMatrix make_sfr_shell(const BackgroundModel& model,
                         const MaterialSpectrum& spectrum,
                         SfrMatrix::Provenance provenance) {
  SfrMatrix sfr;
  sfr.sensor_positions = model.sensor_positions();
  sfr.sensor_normals = model.sensor_normals();
  sfr.frequencies = spectrum.harmonics;
  sfr.omega0 = spectrum.omega0;
  sfr.provenance = provenance;
  sfr.values.resize(sfr.sensor_positions.cols(), spectrum.size());
  return sfr;
}

}  // namespace

BemSfrData build_sfr_bem(const BackgroundModel& model,
                         std::shared_ptr<const CurveMesh> target,
                         const MaterialSpectrum& spectrum) {
  TransmissionSolver solver(model, std::move(target));
  const auto& sensors = model.sensor_indices();
  BemSfrData data;
  data.clean = make_sfr_shell(model, spectrum, SfrMatrix::Provenance::Bem);
  data.raw_mesh.resize(model.mesh().size(), spectrum.size());
  for (int n = 0; n < spectrum.size(); ++n) {
    ForwardSolution sol = solver.solve(spectrum.contrast(n));
    data.raw_mesh.col(n) = raw_current_difference(model.background(), sol);
    for (std::size_t l = 0; l < sensors.size(); ++l) {
      data.raw_sensor_max =
          std::max(data.raw_sensor_max, std::abs(data.raw_mesh(sensors[l], n)));
    }
  }
  PostProcessor post(model);
  const Eigen::MatrixXcd processed = post.apply_columns(data.raw_mesh);
  for (int n = 0; n < spectrum.size(); ++n) {
    for (std::size_t l = 0; l < sensors.size(); ++l) {
      data.clean.values(l, n) = processed(sensors[l], n);
    }
  }
  return data;
}

Eigen::Matrix2Xd sensor_kernel_gradients(const Eigen::Matrix2Xd& sensor_positions,
                                         const Eigen::Matrix2Xd& sensor_normals,
                                         Vec2 z) {
  Eigen::Matrix2Xd out(2, sensor_positions.cols());
  for (int l = 0; l < sensor_positions.cols(); ++l) {
    out.col(l) = -green_hessian(sensor_positions.col(l), z) * sensor_normals.col(l);
  }
  return out;
}

SfrMatrix dipole_approx_sfr(const BackgroundModel& model, Vec2 z,
                            const PtShape& shape, const MaterialSpectrum& spectrum) {
  if (point_inside(model.fish().body, z)) {
    throw InvalidConfigurationError("dipole model needs the target outside the body");
  }
  SfrMatrix sfr = make_sfr_shell(model, spectrum, SfrMatrix::Provenance::DipoleApprox);
  const Vec2 grad_u = model.background_gradient(z);
  const Eigen::Matrix2Xd kernels =
      sensor_kernel_gradients(sfr.sensor_positions, sfr.sensor_normals, z);
  for (int n = 0; n < spectrum.size(); ++n) {
    const Eigen::Matrix2cd m = analytic_pt(shape, spectrum.contrast(n)).matrix();
    const CVec2 left = m.transpose() * grad_u.cast<Cplx>();
    for (int l = 0; l < kernels.cols(); ++l) {
      sfr.values(l, n) = left(0) * kernels(0, l) + left(1) * kernels(1, l);
    }
  }
  return sfr;
}

SfrMatrix add_noise(const SfrMatrix& clean, double zeta,
                    double raw_magnitude_scale, std::uint64_t seed) {
  if (zeta < 0.0) throw InvalidConfigurationError("noise power must be nonnegative");
  SfrMatrix out = clean;
  out.noisy = zeta > 0.0;
  out.zeta = zeta;
  out.seed = seed;
  if (zeta == 0.0) return out;
  const double sd = std::sqrt(zeta) * raw_magnitude_scale;
  Rng rng(seed);
  for (int l = 0; l < out.values.rows(); ++l) {
    for (int n = 0; n < out.values.cols(); ++n) {
      out.values(l, n) += Cplx(sd * rng.next_gaussian(), sd * rng.next_gaussian());
    }
  }
  return out;
}

SfrMatrix noisy_sfr(const BackgroundModel& model, const BemSfrData& data,
                    double zeta, std::uint64_t seed, NoiseStage stage) {
  if (zeta < 0.0) throw InvalidConfigurationError("noise power must be nonnegative");
  if (stage == NoiseStage::Postprocessed || zeta == 0.0) {
    return add_noise(data.clean, zeta, data.raw_sensor_max, seed);
  }
  const double sd = std::sqrt(zeta) * data.raw_sensor_max;
  Eigen::MatrixXcd raw = data.raw_mesh;
  Rng rng(seed);
  for (int i = 0; i < raw.rows(); ++i) {
    for (int n = 0; n < raw.cols(); ++n) {
      raw(i, n) += Cplx(sd * rng.next_gaussian(), sd * rng.next_gaussian());
    }
  }
  PostProcessor post(model);
  const Eigen::MatrixXcd processed = post.apply_columns(raw);
  SfrMatrix out = data.clean;
  const auto& sensors = model.sensor_indices();
  for (int n = 0; n < raw.cols(); ++n) {
    for (std::size_t l = 0; l < sensors.size(); ++l) {
      out.values(l, n) = processed(sensors[l], n);
    }
  }
  out.noisy = true;
  out.zeta = zeta;
  out.seed = seed;
  return out;
}

namespace {

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot open " + file.string());
  os.precision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      os << m(i, j) << (j + 1 < m.cols() ? "," : "");
    }
    os << "\n";
  }
}

}  // namespace

void write_sfr_csv(const SfrMatrix& sfr, const std::filesystem::path& stem) {
  write_matrix_csv(sfr.values.real(), stem.string() + "_re.csv");
  write_matrix_csv(sfr.values.imag(), stem.string() + "_im.csv");
}

void write_sfr_binary(const SfrMatrix& sfr, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + file.string());
  const char magic[4] = {'S', 'F', 'R', 'B'};
  os.write(magic, 4);
  auto put_u32 = [&](std::uint32_t v) { os.write(reinterpret_cast<char*>(&v), 4); };
  auto put_u64 = [&](std::uint64_t v) { os.write(reinterpret_cast<char*>(&v), 8); };
  auto put_f64 = [&](double v) { os.write(reinterpret_cast<char*>(&v), 8); };
  put_u32(static_cast<std::uint32_t>(sfr.sensors()));
  put_u32(static_cast<std::uint32_t>(sfr.harmonics()));
  put_u32(sfr.provenance == SfrMatrix::Provenance::Bem ? 0u : 1u);
  put_u32(sfr.noisy ? 1u : 0u);
  put_f64(sfr.omega0);
  put_f64(sfr.zeta);
  put_u64(sfr.seed);
  for (double f : sfr.frequencies) put_f64(f);
  for (int l = 0; l < sfr.sensors(); ++l) {
    put_f64(sfr.sensor_positions(0, l));
    put_f64(sfr.sensor_positions(1, l));
    put_f64(sfr.sensor_normals(0, l));
    put_f64(sfr.sensor_normals(1, l));
  }
  for (int l = 0; l < sfr.sensors(); ++l) {
    for (int n = 0; n < sfr.harmonics(); ++n) {
      put_f64(sfr.values(l, n).real());
      put_f64(sfr.values(l, n).imag());
    }
  }
}

SfrMatrix read_sfr_binary(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "SFRB", 4) != 0) {
    throw std::runtime_error(file.string() + " is not an SFR binary file");
  }
  auto get_u32 = [&] { std::uint32_t v; is.read(reinterpret_cast<char*>(&v), 4); return v; };
  auto get_u64 = [&] { std::uint64_t v; is.read(reinterpret_cast<char*>(&v), 8); return v; };
  auto get_f64 = [&] { double v; is.read(reinterpret_cast<char*>(&v), 8); return v; };
  SfrMatrix sfr;
  const int ll = static_cast<int>(get_u32());
  const int nn = static_cast<int>(get_u32());
  sfr.provenance = get_u32() == 0 ? SfrMatrix::Provenance::Bem
                                  : SfrMatrix::Provenance::DipoleApprox;
  sfr.noisy = get_u32() != 0;
  sfr.omega0 = get_f64();
  sfr.zeta = get_f64();
  sfr.seed = get_u64();
  sfr.frequencies.resize(nn);
  for (double& f : sfr.frequencies) f = get_f64();
  sfr.sensor_positions.resize(2, ll);
  sfr.sensor_normals.resize(2, ll);
  for (int l = 0; l < ll; ++l) {
    sfr.sensor_positions(0, l) = get_f64();
    sfr.sensor_positions(1, l) = get_f64();
    sfr.sensor_normals(0, l) = get_f64();
    sfr.sensor_normals(1, l) = get_f64();
  }
  sfr.values.resize(ll, nn);
  for (int l = 0; l < ll; ++l) {
    for (int n = 0; n < nn; ++n) {
      const double re = get_f64();
      const double im = get_f64();
      sfr.values(l, n) = Cplx(re, im);
    }
  }
  if (!is) throw std::runtime_error("truncated SFR binary file " + file.string());
  return sfr;
}

}  // namespace efish
