#include <cmath>

#include "doctest.h"
#include "efish/measurements.hpp"
#include "fixtures.hpp"

using namespace efish;

namespace {

struct Fig3aData {
  Fig3aData()
      : model(test::reference_fish(), 256),
        target(std::make_shared<CurveMesh>(discretize(
            test::reference_disk_target(), 128, ElementKind::P0Panels))) {}
  BackgroundModel model;
  std::shared_ptr<const CurveMesh> target;
};

Fig3aData& fig3a() {
  static Fig3aData data;
  return data;
}

}  // namespace

TEST_CASE("raw currents") {
  auto& fx = fig3a();
  TransmissionSolver solver(fx.model, fx.target);

  SUBCASE("identical solutions give the zero vector") {
    Eigen::VectorXcd r = raw_currents(fx.model.background(), fx.model.background(),
                                      fx.model.sensor_indices());
    CHECK(r.norm() == 0.0);
  }

  SUBCASE("strongest sensor sits in the target quadrant") {
    ForwardSolution sol = solver.solve(Cplx(2.0, 1.0));
    Eigen::VectorXcd r =
        raw_currents(fx.model.background(), sol, fx.model.sensor_indices());
    int lmax = 0;
    r.cwiseAbs().maxCoeff(&lmax);
    const Vec2 pos = fx.model.sensor_positions().col(lmax);
    CHECK(pos.x() > 0.0);
    CHECK(pos.y() > 0.0);
  }

  SUBCASE("conjugating the contrast conjugates the currents") {
    ForwardSolution a = solver.solve(Cplx(2.0, 3.0));
    ForwardSolution b = solver.solve(Cplx(2.0, -3.0));
    Eigen::VectorXcd ra =
        raw_currents(fx.model.background(), a, fx.model.sensor_indices());
    Eigen::VectorXcd rb =
        raw_currents(fx.model.background(), b, fx.model.sensor_indices());
    CHECK((ra - rb.conjugate()).norm() / ra.norm() < 1e-12);
  }

  SUBCASE("mesh mismatch rejected") {
    BackgroundModel other(test::reference_fish(), 128);
    CHECK_THROWS_AS(
        raw_currents(fx.model.background(), other.background(), {0, 1}),
        InvalidConfigurationError);
  }
}

TEST_CASE("post-processing operator identities on the circle") {
  // With xi = 0 the operator reduces to ½I - K*: it kills constants on a
  // circle (K*(1) = ½ there) and halves zero-mean densities.
  FishBody fish;
  fish.body = make_ellipse({0, 0}, 1.0, 1.0);
  fish.skin_impedance = 0.0;
  fish.dipole_position = {0.3, 0.0};
  fish.sensor_count = 16;
  BackgroundModel model(fish, 256);
  PostProcessor post(model);

  Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(256);
  CHECK(post.apply(ones).cwiseAbs().maxCoeff() < 1e-3);

  Eigen::VectorXcd mode(256);
  for (int i = 0; i < 256; ++i) mode[i] = std::cos(3 * model.mesh().params[i]);
  CHECK((post.apply(mode) - 0.5 * mode).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("post-processing linearity") {
  auto& fx = fig3a();
  PostProcessor post(fx.model);
  const int p = fx.model.mesh().size();
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(p), w = Eigen::VectorXcd::Random(p);
  const Cplx a(1.3, -0.4);
  const Eigen::VectorXcd lhs = post.apply(a * v + w);
  const Eigen::VectorXcd rhs = a * post.apply(v) + post.apply(w);
  CHECK((lhs - rhs).norm() / rhs.norm() < 1e-14);
}

TEST_CASE("post-processing maps the Robin kernel to the free-space kernel") {
  // Numerically reconstruct the exterior Robin point-source field via a
  // bordered single-layer system, then verify that the post-processor turns
  // its boundary current into minus the free-space kernel current.
  auto& fx = fig3a();
  const CurveMesh& mesh = fx.model.mesh();
  const int p = mesh.size();
  const double xi = fx.model.fish().skin_impedance;
  const Vec2 z(1.2, 0.9);

  Eigen::VectorXd gz(p), dgz(p);
  for (int i = 0; i < p; ++i) {
    gz[i] = green(mesh.nodes.col(i), z);
    dgz[i] = green_gradient(mesh.nodes.col(i), z).dot(mesh.normals.col(i));
  }
  const Eigen::MatrixXd s = assemble(OperatorTag::SingleLayer, mesh).values;
  const Eigen::MatrixXd kstar =
      assemble(OperatorTag::NeumannPoincareAdjoint, mesh).values;
  Eigen::MatrixXd bordered = Eigen::MatrixXd::Zero(p + 1, p + 1);
  bordered.topLeftCorner(p, p) =
      s - xi * (0.5 * Eigen::MatrixXd::Identity(p, p) + kstar);
  bordered.topRightCorner(p, 1).setOnes();
  bordered.bottomLeftCorner(1, p) = mesh.weights.matrix().transpose();
  Eigen::VectorXd rhs(p + 1);
  rhs.head(p) = gz - xi * dgz;
  rhs[p] = 0.0;
  Eigen::VectorXd sol = bordered.partialPivLu().solve(rhs);
  CHECK(std::abs(sol[p]) < 1.0);  // finite far-field constant

  const Eigen::VectorXd robin_current =
      -dgz + (0.5 * Eigen::MatrixXd::Identity(p, p) + kstar) * sol.head(p);
  PostProcessor post(fx.model);
  const Eigen::VectorXcd mapped = post.apply(robin_current.cast<Cplx>());
  CHECK((mapped.real() + dgz).norm() / dgz.norm() < 1e-6);
}

TEST_CASE("dipole model consistency with the solver data") {
  auto& fx = fig3a();
  MaterialSpectrum spectrum = MaterialSpectrum::equidistributed(2.0, 1.0, 1.0, 3, 1, 3);
  const Vec2 z = test::reference_target_center();

  BemSfrData coarse = build_sfr_bem(fx.model, fx.target, spectrum);
  SfrMatrix dip05 = dipole_approx_sfr(fx.model, z, DiskShape{0.05}, spectrum);
  const double err05 =
      (coarse.clean.values - dip05.values).norm() / dip05.values.norm();
  CHECK(err05 < 0.10);

  auto small_target = std::make_shared<CurveMesh>(discretize(
      test::reference_disk_target(0.025), 128, ElementKind::P0Panels));
  BemSfrData fine = build_sfr_bem(fx.model, small_target, spectrum);
  SfrMatrix dip025 = dipole_approx_sfr(fx.model, z, DiskShape{0.025}, spectrum);
  const double err025 =
      (fine.clean.values - dip025.values).norm() / dip025.values.norm();
  // The remainder is quadratic in the target size, so halving the size
  // shrinks the mismatch by about four.
  CHECK(err05 / err025 >= 1.5);
  CHECK(err05 / err025 <= 4.5);
}

TEST_CASE("dipole-model rank dichotomy") {
  auto& fx = fig3a();
  MaterialSpectrum spectrum = MaterialSpectrum::equidistributed(2.0, 1.0, 1.0, 8, 1, 8);
  const Vec2 z = test::reference_target_center();

  SUBCASE("disk: rank one") {
    SfrMatrix sfr = dipole_approx_sfr(fx.model, z, DiskShape{0.05}, spectrum);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sfr.values);
    CHECK(svd.singularValues()[1] / svd.singularValues()[0] < 1e-10);
  }

  SUBCASE("disk with zero permittivity: identical columns") {
    MaterialSpectrum flat = MaterialSpectrum::equidistributed(2.0, 0.0, 1.0, 5, 1, 5);
    SfrMatrix sfr = dipole_approx_sfr(fx.model, z, DiskShape{0.05}, spectrum);
    SfrMatrix sfr0 = dipole_approx_sfr(fx.model, z, DiskShape{0.05}, flat);
    for (int n = 1; n < 5; ++n) {
      CHECK((sfr0.values.col(n) - sfr0.values.col(0)).norm() == 0.0);
    }
    CHECK(sfr.values.col(0).norm() > 0.0);
  }

  SUBCASE("true ellipse: rank two") {
    SfrMatrix sfr = dipole_approx_sfr(fx.model, z, EllipseShape{0.025, 0.1, kPi / 3},
                                      spectrum);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sfr.values);
    CHECK(svd.singularValues()[1] / svd.singularValues()[0] > 1e-6);
    CHECK(svd.singularValues()[2] / svd.singularValues()[0] < 1e-10);
  }

  SUBCASE("target inside the body rejected") {
    CHECK_THROWS_AS(
        dipole_approx_sfr(fx.model, {0.5, 0.0}, DiskShape{0.05}, spectrum),
        InvalidConfigurationError);
  }
}

TEST_CASE("noise model") {
  auto& fx = fig3a();
  MaterialSpectrum spectrum = MaterialSpectrum::equidistributed(2.0, 1.0, 1.0, 8, 1, 8);
  SfrMatrix clean =
      dipole_approx_sfr(fx.model, test::reference_target_center(), DiskShape{0.05},
                        spectrum);
  const double scale = clean.values.cwiseAbs().maxCoeff();

  SUBCASE("zero noise is the identity") {
    SfrMatrix same = add_noise(clean, 0.0, scale, 7);
    CHECK((same.values - clean.values).norm() == 0.0);
  }

  SUBCASE("negative noise rejected") {
    CHECK_THROWS_AS(add_noise(clean, -0.1, scale, 7), InvalidConfigurationError);
  }

  SUBCASE("deterministic under a fixed seed, different across seeds") {
    SfrMatrix a = add_noise(clean, 0.01, scale, 42);
    SfrMatrix b = add_noise(clean, 0.01, scale, 42);
    SfrMatrix c = add_noise(clean, 0.01, scale, 43);
    CHECK((a.values - b.values).norm() == 0.0);
    CHECK((a.values - c.values).norm() > 0.0);
    const double na = (a.values - clean.values).norm();
    const double nc = (c.values - clean.values).norm();
    CHECK(std::abs(na - nc) / std::max(na, nc) < 0.20);
  }

  SUBCASE("empirical standard deviation matches the prescription") {
    // 10^4 noise samples via a tall synthetic matrix.
    SfrMatrix wide = clean;
    wide.values = Eigen::MatrixXcd::Zero(100, 100);
    const double zeta = 0.01, sd = std::sqrt(zeta) * scale;
    SfrMatrix noisy = add_noise(wide, zeta, scale, 11);
    double acc = 0.0;
    for (int l = 0; l < 100; ++l) {
      for (int n = 0; n < 100; ++n) {
        acc += std::norm(noisy.values(l, n));  // re² + im²
      }
    }
    const double empirical = std::sqrt(acc / (2.0 * 100 * 100));
    CHECK(std::abs(empirical - sd) / sd < 0.03);
  }
}

TEST_CASE("serialization round trip") {
  auto& fx = fig3a();
  MaterialSpectrum spectrum = MaterialSpectrum::equidistributed(3.0, 2.0, 1.5, 4, 1, 4);
  SfrMatrix sfr = dipole_approx_sfr(fx.model, test::reference_target_center(),
                                    EllipseShape{0.03, 0.05, 0.2}, spectrum);
  sfr = add_noise(sfr, 0.02, sfr.values.cwiseAbs().maxCoeff(), 99);

  const auto dir = std::filesystem::temp_directory_path() / "efish_test_sfr";
  std::filesystem::create_directories(dir);
  write_sfr_csv(sfr, dir / "sfr");
  CHECK(std::filesystem::exists(dir / "sfr_re.csv"));
  CHECK(std::filesystem::exists(dir / "sfr_im.csv"));

  write_sfr_binary(sfr, dir / "sfr.bin");
  SfrMatrix back = read_sfr_binary(dir / "sfr.bin");
  CHECK((back.values - sfr.values).norm() == 0.0);
  CHECK(back.zeta == sfr.zeta);
  CHECK(back.seed == sfr.seed);
  CHECK(back.frequencies == sfr.frequencies);
  CHECK(back.noisy);
  CHECK((back.sensor_positions - sfr.sensor_positions).norm() == 0.0);
}

TEST_CASE("raw-stage noise pipeline is deterministic and sensor-consistent") {
  auto& fx = fig3a();
  MaterialSpectrum spectrum = MaterialSpectrum::equidistributed(2.0, 1.0, 1.0, 3, 1, 3);
  BemSfrData data = build_sfr_bem(fx.model, fx.target, spectrum);
  SfrMatrix a = noisy_sfr(fx.model, data, 0.01, 123, NoiseStage::Raw);
  SfrMatrix b = noisy_sfr(fx.model, data, 0.01, 123, NoiseStage::Raw);
  CHECK((a.values - b.values).norm() == 0.0);
  SfrMatrix c = noisy_sfr(fx.model, data, 0.0, 123, NoiseStage::Raw);
  CHECK((c.values - data.clean.values).norm() == 0.0);
  SfrMatrix d = noisy_sfr(fx.model, data, 0.01, 123, NoiseStage::Postprocessed);
  CHECK((d.values - a.values).norm() > 0.0);
}
