#include "efish/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <iostream>

namespace efish {

using nlohmann::json;

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Collects output files and writes the run manifest.
class Artifacts {
 public:
  Artifacts(const ExperimentConfig& config, const std::string& output_override)
      : config_(config),
        dir_(output_override.empty() ? config.output : output_override) {
    std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }

  CsvWriter csv(const std::string& name, const std::string& role) {
    note(name, role);
    return CsvWriter(dir_ / name, "config " + config_.name + " " +
                                      hash_hex(config_.hash));
  }

  std::filesystem::path path(const std::string& name, const std::string& role) {
    note(name, role);
    return dir_ / name;
  }

  void note(const std::string& name, const std::string& role) {
    files_.emplace_back(name, role);
  }

  void write_json(const std::string& name, const std::string& role,
                  const json& body) {
    json j = body;
    j["config"] = config_.name;
    j["config_hash"] = hash_hex(config_.hash);
    std::ofstream os(path(name, role));
    os << j.dump(2) << "\n";
  }

  void write_manifest() {
    json files = json::array();
    for (const auto& [name, role] : files_) {
      files.push_back({{"file", name}, {"role", role}});
    }
    json m;
    m["config"] = config_.name;
    m["config_hash"] = hash_hex(config_.hash);
    m["master_seed"] = config_.master_seed;
    m["experiment"] = config_.canonical.empty() ? json() : json::parse(config_.canonical);
    m["files"] = files;
    std::ofstream os(dir_ / "manifest.json");
    os << m.dump(2) << "\n";
  }

 private:
  const ExperimentConfig& config_;
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

BackgroundModel make_model(const ExperimentConfig& config, int sensor_count = 0) {
  FishBody fish = config.fish;
  if (sensor_count > 0) fish.sensor_count = sensor_count;
  return BackgroundModel(fish, config.body_nodes);
}

std::shared_ptr<const CurveMesh> make_target_mesh(const ExperimentConfig& config,
                                                  const ShapeSpec& shape,
                                                  Vec2 position) {
  return std::make_shared<CurveMesh>(discretize(shape.make_curve(position),
                                                config.target_nodes,
                                                ElementKind::P0Panels));
}

BemSfrData make_data(const ExperimentConfig& config, const BackgroundModel& model,
                     const ShapeSpec& shape, Vec2 position,
                     const MaterialSpectrum& spectrum) {
  if (config.data_source == "bem") {
    return build_sfr_bem(model, make_target_mesh(config, shape, position), spectrum);
  }
  const auto analytic = shape.analytic_shape();
  if (!analytic) {
    throw InvalidConfigurationError(
        "the dipole data model needs a disk or ellipse target");
  }
  BemSfrData data;
  data.clean = dipole_approx_sfr(model, position, *analytic, spectrum);
  data.raw_sensor_max = data.clean.values.cwiseAbs().maxCoeff();
  return data;
}

SfrMatrix perturb(const ExperimentConfig& config, const BackgroundModel& model,
                  const BemSfrData& data, double zeta, std::uint64_t seed) {
  const NoiseStage stage =
      data.raw_mesh.size() == 0 ? NoiseStage::Postprocessed : config.noise_stage;
  return noisy_sfr(model, data, zeta, seed, stage);
}

void write_imaging_map(Artifacts& artifacts, const std::string& name,
                       const ImagingGrid& grid) {
  CsvWriter csv = artifacts.csv(name, "imaging functional values over the grid");
  csv.cell("x").cell("y").cell("value");
  csv.end_row();
  for (int iy = 0; iy < grid.spec.ny; ++iy) {
    for (int ix = 0; ix < grid.spec.nx; ++ix) {
      csv.cell(grid.xs[ix]).cell(grid.ys[iy]).cell(grid.values(iy, ix));
      csv.end_row();
    }
  }
}

void write_currents(Artifacts& artifacts, const std::string& name,
                    const std::string& role, const CurveMesh& mesh,
                    const Eigen::VectorXcd& values) {
  CsvWriter csv = artifacts.csv(name, role);
  csv.cell("node").cell("x").cell("y").cell("re").cell("im");
  csv.end_row();
  for (int i = 0; i < mesh.size(); ++i) {
    csv.cell(i)
        .cell(mesh.nodes(0, i))
        .cell(mesh.nodes(1, i))
        .cell(values[i].real())
        .cell(values[i].imag());
    csv.end_row();
  }
}

void write_potential_grid(Artifacts& artifacts, const std::string& name,
                          const ExperimentConfig& config,
                          const ForwardSolution& sol) {
  const GridSpec& g = config.grid;
  std::vector<Vec2> pts;
  std::vector<std::pair<int, int>> index;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const Vec2 p(g.xmin + (g.xmax - g.xmin) * ix / (g.nx - 1),
                   g.ymin + (g.ymax - g.ymin) * iy / (g.ny - 1));
      bool ok = distance_to_curve(sol.body_mesh->curve, p, 256) > 0.02;
      if (ok && sol.target_mesh) {
        ok = distance_to_curve(sol.target_mesh->curve, p, 128) > 0.02;
      }
      if (ok) {
        pts.push_back(p);
        index.emplace_back(ix, iy);
      }
    }
  }
  Eigen::Matrix2Xd points(2, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) points.col(i) = pts[i];
  const Eigen::VectorXcd u = sol.potentials(points);
  CsvWriter csv = artifacts.csv(name, "potential samples for isopotential plots");
  csv.cell("x").cell("y").cell("re").cell("im");
  csv.end_row();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    csv.cell(pts[i].x()).cell(pts[i].y()).cell(u[i].real()).cell(u[i].imag());
    csv.end_row();
  }
}

void run_validate(const ExperimentConfig& config, Artifacts& artifacts) {
  const auto checks = run_operator_checks();
  CsvWriter csv = artifacts.csv("validate_report.csv", "operator identity report");
  csv.cell("check").cell("value").cell("tolerance").cell("pass");
  csv.end_row();
  bool all = true;
  for (const auto& c : checks) {
    csv.cell(c.name).cell(c.value).cell(c.tolerance).cell(c.pass ? 1 : 0);
    csv.end_row();
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  value " << c.value
              << "  tol " << c.tolerance << "\n";
    all = all && c.pass;
  }
  artifacts.write_manifest();
  (void)config;
  if (!all) throw SolverError("operator identity checks failed");
}

void run_forward(const ExperimentConfig& config, Artifacts& artifacts) {
  BackgroundModel model = make_model(config);
  write_currents(artifacts, "background_density.csv",
                 "background layer density on the body", model.mesh(),
                 model.background().body_density);
  write_currents(artifacts, "background_current.csv",
                 "background exterior normal derivative", model.mesh(),
                 model.background().boundary_current);
  write_potential_grid(artifacts, "potential_background.csv", config,
                       model.background());
  if (config.target) {
    const MaterialSpectrum spectrum =
        config.spectrum.make(config.target->conductivity, config.target->permittivity);
    TransmissionSolver solver(
        model, make_target_mesh(config, config.target->shape, config.target->position));
    ForwardSolution sol = solver.solve(spectrum.contrast(0));
    write_currents(artifacts, "target_current.csv",
                   "exterior normal derivative with the target", model.mesh(),
                   sol.boundary_current);
    write_currents(artifacts, "target_density.csv", "target layer density",
                   solver.target_mesh(), sol.target_density);
    write_potential_grid(artifacts, "potential_target.csv", config, sol);
  }
  artifacts.write_manifest();
}

void run_locate(const ExperimentConfig& config, Artifacts& artifacts) {
  BackgroundModel model = make_model(config);
  const MaterialSpectrum spectrum =
      config.spectrum.make(config.target->conductivity, config.target->permittivity);
  const BemSfrData data =
      make_data(config, model, config.target->shape, config.target->position, spectrum);
  const double zeta = config.zetas.empty() ? 0.0 : config.zetas[0];
  const std::uint64_t seed = derive_seed(config.master_seed, 0, 0);
  const SfrMatrix sfr = perturb(config, model, data, zeta, seed);
  write_sfr_csv(sfr, artifacts.path("sfr", "measured SFR matrix (re/im parts)"));
  artifacts.note("sfr_re.csv", "SFR matrix, real part");
  artifacts.note("sfr_im.csv", "SFR matrix, imaginary part");
  write_sfr_binary(sfr, artifacts.path("sfr.bin", "SFR matrix, binary form"));

  const SignalProjector projector = signal_projector(sfr.values, config.projector_rank);
  GridGeometry geometry(model, config.grid);
  const ImagingGrid grid = scan(geometry, projector);
  write_imaging_map(artifacts, "imaging_map.csv", grid);
  const Vec2 refined = refine_argmax(model, projector, config.grid, grid.argmax);

  json meta;
  meta["argmax"] = {grid.argmax.x(), grid.argmax.y()};
  meta["argmax_value"] = grid.argmax_value;
  meta["argmax_refined"] = {refined.x(), refined.y()};
  meta["true_position"] = {config.target->position.x(), config.target->position.y()};
  meta["zeta"] = zeta;
  meta["seed"] = seed;
  artifacts.write_json("metadata.json", "localization summary", meta);
  artifacts.write_manifest();
}

void run_noise_stats(const ExperimentConfig& config, Artifacts& artifacts) {
  const TargetConfig& target = *config.target;
  CsvWriter csv = artifacts.csv("rms_table.csv", "root mean square location errors");
  std::uint64_t stream = 0;
  switch (config.study.vary) {
    case StudyConfig::Vary::Frequencies: {
      BackgroundModel model = make_model(config);
      GridGeometry geometry(model, config.grid);
      csv.cell("zeta").cell("frequencies").cell("rms");
      csv.end_row();
      for (int count : config.study.freq_counts) {
        SpectrumConfig sc = config.spectrum;
        sc.count = count;
        sc.first = 1.0;
        sc.last = count;
        sc.list.clear();
        const BemSfrData data =
            make_data(config, model, target.shape, target.position,
                      sc.make(target.conductivity, target.permittivity));
        for (double zeta : config.study.zetas) {
          LocationStudy study{model,           data, geometry, target.position,
                              config.projector_rank, config.noise_stage};
          const double rms = rms_location_error(study, zeta, config.trials,
                                                config.master_seed, stream++,
                                                config.workers);
          csv.cell(zeta).cell(count).cell(rms);
          csv.end_row();
        }
      }
      break;
    }
    case StudyConfig::Vary::Sensors: {
      csv.cell("zeta").cell("sensors").cell("rms");
      csv.end_row();
      for (int sensors : config.study.sensor_counts) {
        BackgroundModel model = make_model(config, sensors);
        GridGeometry geometry(model, config.grid);
        const BemSfrData data =
            make_data(config, model, target.shape, target.position,
                      config.spectrum.make(target.conductivity, target.permittivity));
        for (double zeta : config.study.zetas) {
          LocationStudy study{model,           data, geometry, target.position,
                              config.projector_rank, config.noise_stage};
          const double rms = rms_location_error(study, zeta, config.trials,
                                                config.master_seed, stream++,
                                                config.workers);
          csv.cell(zeta).cell(sensors).cell(rms);
          csv.end_row();
        }
      }
      break;
    }
    case StudyConfig::Vary::Distance: {
      BackgroundModel model = make_model(config);
      GridGeometry geometry(model, config.grid);
      csv.cell("distance").cell("zeta").cell("rms");
      csv.end_row();
      const Vec2 direction = target.position.normalized();
      for (double distance : config.study.distances) {
        const Vec2 position = distance * direction;
        const BemSfrData data =
            make_data(config, model, target.shape, position,
                      config.spectrum.make(target.conductivity, target.permittivity));
        for (double zeta : config.study.zetas) {
          LocationStudy study{model,           data, geometry, position,
                              config.projector_rank, config.noise_stage};
          const double rms = rms_location_error(study, zeta, config.trials,
                                                config.master_seed, stream++,
                                                config.workers);
          csv.cell(distance).cell(zeta).cell(rms);
          csv.end_row();
        }
      }
      break;
    }
  }
  artifacts.write_manifest();
}

Vec2 locate_from(const BackgroundModel& model, const GridGeometry& geometry,
                 const GridSpec& spec, const SfrMatrix& sfr, int rank) {
  const SignalProjector projector = signal_projector(sfr.values, rank);
  const ImagingGrid grid = scan(geometry, projector);
  return refine_argmax(model, projector, spec, grid.argmax);
}

void run_characterize_disk(const ExperimentConfig& config, Artifacts& artifacts) {
  BackgroundModel model = make_model(config);
  GridGeometry geometry(model, config.grid);
  CsvWriter csv = artifacts.csv("disk_table.csv", "disk characterization results");
  csv.cell("alpha_true").cell("sigma_true").cell("eps_true")
      .cell("alpha_est").cell("sigma_est").cell("eps_est")
      .cell("residual").cell("located_x").cell("located_y");
  csv.end_row();
  for (const CharacterizeRow& row : config.characterize.rows) {
    const MaterialSpectrum spectrum =
        config.spectrum.make(row.conductivity, row.permittivity);
    const BemSfrData data =
        make_data(config, model, row.shape, config.target->position, spectrum);
    Vec2 z = config.target->position;
    if (config.characterize.locate) {
      z = locate_from(model, geometry, config.grid, data.clean, config.projector_rank);
    }
    const auto taus = estimate_tau_disk(data.clean, z, model.background_gradient(z));
    const CharacterizationResult fit = fit_disk(
        taus, spectrum.harmonics, spectrum.omega0, config.characterize.init_alpha,
        config.characterize.init_conductivity, config.characterize.init_permittivity);
    csv.cell(row.shape.radius).cell(row.conductivity).cell(row.permittivity)
        .cell(fit.size_a).cell(fit.conductivity).cell(fit.permittivity)
        .cell(fit.residual).cell(z.x()).cell(z.y());
    csv.end_row();
  }
  artifacts.write_manifest();
}

void run_characterize_ellipse(const ExperimentConfig& config, Artifacts& artifacts) {
  BackgroundModel model = make_model(config);
  GridGeometry geometry(model, config.grid);
  const Vec2 z1_true = config.target->position;
  const Vec2 z2_true = config.characterize.position2;

  CsvWriter axes_csv = artifacts.csv("axes_table.csv", "semi-axis estimates");
  axes_csv.cell("a_true").cell("b_true").cell("angle_true")
      .cell("a_est").cell("b_est").cell("angle_est");
  axes_csv.end_row();
  CsvWriter material_csv =
      artifacts.csv("material_table.csv", "material parameter estimates");
  material_csv.cell("sigma_true").cell("eps_true").cell("sigma_est").cell("eps_est")
      .cell("shape");
  material_csv.end_row();

  int row_index = 0;
  for (const CharacterizeRow& row : config.characterize.rows) {
    const MaterialSpectrum spectrum =
        config.spectrum.make(row.conductivity, row.permittivity);
    const BemSfrData data1 = make_data(config, model, row.shape, z1_true, spectrum);
    const BemSfrData data2 = make_data(config, model, row.shape, z2_true, spectrum);
    Vec2 z1 = z1_true, z2 = z2_true;
    if (config.characterize.locate) {
      z1 = locate_from(model, geometry, config.grid, data1.clean, config.projector_rank);
      z2 = locate_from(model, geometry, config.grid, data2.clean, config.projector_rank);
    }
    const auto tensors = estimate_pt_two_positions(
        data1.clean, data2.clean, z1, z2, model.background_gradient(z1),
        model.background_gradient(z2));
    const double quality = row.permittivity * spectrum.omega0 *
                           spectrum.harmonics.back() / row.conductivity;
    const SemiAxes axes = semiaxes_from_pt(tensors.back(), quality);
    const MaterialEstimate material = material_from_pt(
        tensors, axes.a, axes.b, spectrum.omega0, spectrum.harmonics);

    double a_true = 0, b_true = 0, angle_true = 0;
    if (row.shape.kind == ShapeSpec::Kind::Disk) {
      a_true = b_true = row.shape.radius;
    } else {
      a_true = row.shape.semi_a;
      b_true = row.shape.semi_b;
      angle_true = row.shape.angle;
    }
    axes_csv.cell(a_true).cell(b_true).cell(angle_true)
        .cell(axes.a).cell(axes.b).cell(axes.angle);
    axes_csv.end_row();
    material_csv.cell(row.conductivity).cell(row.permittivity)
        .cell(material.conductivity).cell(material.permittivity)
        .cell(row.shape.kind == ShapeSpec::Kind::Disk ? "disk" : "ellipse");
    material_csv.end_row();

    if (config.characterize.trace) {
      CsvWriter trace = artifacts.csv(
          "trace_row" + std::to_string(row_index) + ".csv",
          "per-frequency material estimates against the model values");
      trace.cell("n").cell("k_est_re").cell("k_est_im")
          .cell("k_model_re").cell("k_model_im");
      trace.end_row();
      const double angle = tensors.back().eigensystem().angle;
      const Vec2 u(std::cos(angle), std::sin(angle));
      const double denom = kPi * axes.a * axes.b * (axes.a + axes.b);
      for (int n = 0; n < spectrum.size(); ++n) {
        const Eigen::Matrix2cd m = tensors[n].matrix();
        const Cplx tau1 = u.x() * u.x() * m(0, 0) + 2.0 * u.x() * u.y() * m(0, 1) +
                          u.y() * u.y() * m(1, 1);
        const Cplx mu = tau1 / denom;
        const Cplx kn_est = (1.0 + axes.a * mu) / (1.0 - axes.b * mu);
        const Cplx kn_model = spectrum.contrast(n);
        trace.cell(spectrum.harmonics[n])
            .cell(kn_est.real()).cell(kn_est.imag())
            .cell(kn_model.real()).cell(kn_model.imag());
        trace.end_row();
      }
    }
    ++row_index;
  }
  artifacts.write_manifest();
}

void run_scaling(const ExperimentConfig& config, Artifacts& artifacts) {
  const DimensionlessGroups g = nondimensionalize(config.physical);
  // Electrolocation range of roughly two body lengths and ten harmonics set
  // the worst-case quasistatic scales.
  const QuasistaticCheck eqs = eqs_validity(
      config.physical, 10.0 * config.physical.body_length,
      10.0 * config.physical.fundamental_freq);
  CsvWriter csv = artifacts.csv("scaling.csv", "dimensionless groups and EQS check");
  csv.cell("quantity").cell("value");
  csv.end_row();
  csv.cell("body_conductivity").cell(g.body_conductivity);
  csv.end_row();
  csv.cell("skin_conductivity").cell(g.skin_conductivity);
  csv.end_row();
  csv.cell("skin_thickness").cell(g.skin_thickness);
  csv.end_row();
  csv.cell("effective_impedance").cell(g.effective_impedance);
  csv.end_row();
  csv.cell("eqs_ratio").cell(eqs.ratio);
  csv.end_row();
  csv.cell("eqs_pass").cell(eqs.pass ? 1 : 0);
  csv.end_row();
  std::cout << "k_b = " << g.body_conductivity << ", k_s = " << g.skin_conductivity
            << ", delta = " << g.skin_thickness
            << ", xi = " << g.effective_impedance << "\n"
            << "EQS ratio " << eqs.ratio << (eqs.pass ? " (pass)" : " (fail)")
            << "\n";
  artifacts.write_manifest();
}

}  // namespace

std::vector<ValidationCheck> run_operator_checks() {
  std::vector<ValidationCheck> checks;
  auto add = [&](const std::string& name, double value, double tol) {
    checks.push_back({name, value, tol, value < tol});
  };

  const CurveMesh circle = discretize(make_ellipse({0, 0}, 1, 1), 256);
  const int p = circle.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p);

  const Eigen::MatrixXd kstar =
      assemble(OperatorTag::NeumannPoincareAdjoint, circle).values;
  add("adjoint_double_layer_constant", ((kstar * ones).array() - 0.5).abs().maxCoeff(),
      1e-3);

  Eigen::Matrix2Xd pts(2, 2);
  pts.col(0) = Vec2(0.2, 0.1);
  pts.col(1) = Vec2(2.0, 1.0);
  const Eigen::VectorXcd dvals =
      eval_potential(PotentialKind::DoubleLayer, circle, ones.cast<Cplx>(), pts);
  add("gauss_identity_inside", std::abs(dvals[0] - Cplx(-1.0, 0.0)), 1e-6);
  add("gauss_identity_outside", std::abs(dvals[1]), 1e-6);

  const Eigen::MatrixXd s = assemble(OperatorTag::SingleLayer, circle).values;
  add("single_layer_on_circle", (s * ones).cwiseAbs().maxCoeff(), 1e-6);
  Eigen::Matrix2Xd off(2, 1);
  off.col(0) = Vec2(2.0, 0.0);
  add("single_layer_off_circle",
      std::abs(eval_potential(PotentialKind::SingleLayer, circle, ones.cast<Cplx>(),
                              off)[0] -
               Cplx(std::log(2.0), 0.0)),
      1e-6);

  const Eigen::MatrixXd w = hypersingular_form(circle);
  add("hypersingular_constants", (w * ones).cwiseAbs().maxCoeff(), 1e-10);
  // Symbol check of the curl-regularized operator used by the solvers, plus
  // the P1 Galerkin form at its element-resolution (the P1 consistency error
  // scales like (m·h)²).
  const Eigen::MatrixXd t = hypersingular_nodal(circle);
  const CurveMesh fine = discretize(make_ellipse({0, 0}, 1, 1), 512);
  const Eigen::MatrixXd w_fine = hypersingular_form(fine);
  for (int m = 1; m <= 4; ++m) {
    Eigen::VectorXd v(p);
    for (int i = 0; i < p; ++i) v[i] = std::cos(m * circle.params[i]);
    const double rayleigh =
        (v.array() * (t * v).array() * circle.weights.array()).sum() /
        (v.array().square() * circle.weights.array()).sum();
    add("hypersingular_symbol_m" + std::to_string(m), std::abs(rayleigh - 0.5 * m),
        1e-3);
    Eigen::VectorXd vf(fine.size());
    for (int i = 0; i < fine.size(); ++i) vf[i] = std::cos(m * fine.params[i]);
    const double galerkin =
        vf.dot(w_fine * vf) / (vf.array().square() * fine.weights.array()).sum();
    add("hypersingular_galerkin_symbol_m" + std::to_string(m),
        std::abs(galerkin - 0.5 * m), 1e-3);
  }
  return checks;
}

Vec2 refine_argmax(const BackgroundModel& model, const SignalProjector& projector,
                   const GridSpec& coarse, Vec2 peak) {
  const double cell_x = (coarse.xmax - coarse.xmin) / (coarse.nx - 1);
  const double cell_y = (coarse.ymax - coarse.ymin) / (coarse.ny - 1);
  GridSpec fine;
  fine.xmin = peak.x() - 1.2 * cell_x;
  fine.xmax = peak.x() + 1.2 * cell_x;
  fine.ymin = peak.y() - 1.2 * cell_y;
  fine.ymax = peak.y() + 1.2 * cell_y;
  fine.nx = fine.ny = 25;
  fine.margin = coarse.margin;
  fine.cap = coarse.cap;
  try {
    GridGeometry geometry(model, fine);
    return scan(geometry, projector).argmax;
  } catch (const std::exception&) {
    return peak;  // refinement window fully masked: keep the coarse peak
  }
}

void run_experiment(const ExperimentConfig& config,
                    const std::string& output_override) {
  Artifacts artifacts(config, output_override);
  switch (config.kind) {
    case ExperimentKind::Validate:
      run_validate(config, artifacts);
      return;
    case ExperimentKind::Forward:
      run_forward(config, artifacts);
      return;
    case ExperimentKind::Locate:
      run_locate(config, artifacts);
      return;
    case ExperimentKind::NoiseStats:
      run_noise_stats(config, artifacts);
      return;
    case ExperimentKind::CharacterizeDisk:
      run_characterize_disk(config, artifacts);
      return;
    case ExperimentKind::CharacterizeEllipse:
      run_characterize_ellipse(config, artifacts);
      return;
    case ExperimentKind::Scaling:
      run_scaling(config, artifacts);
      return;
  }
  throw std::logic_error("unknown experiment kind");
}

}  // namespace efish
