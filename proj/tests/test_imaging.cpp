#include <cmath>

#include "doctest.h"
#include "efish/imaging.hpp"
#include "fixtures.hpp"

using namespace efish;

namespace {

struct ImagingFixture {
  ImagingFixture()
      : model(test::reference_fish(), 256),
        spectrum(MaterialSpectrum::equidistributed(2.0, 1.0, 1.0, 10, 1, 10)),
        geometry(model, GridSpec{}) {}
  BackgroundModel model;
  MaterialSpectrum spectrum;
  GridGeometry geometry;
};

ImagingFixture& fix() {
  static ImagingFixture f;
  return f;
}

double cell_diagonal(const GridSpec& s) {
  return std::hypot((s.xmax - s.xmin) / (s.nx - 1), (s.ymax - s.ymin) / (s.ny - 1));
}

}  // namespace

TEST_CASE("signal projector") {
  SUBCASE("rank-one matrix gives the left singular direction") {
    const int l = 16, n = 6;
    Eigen::VectorXcd u = Eigen::VectorXcd::Random(l);
    Eigen::VectorXcd v = Eigen::VectorXcd::Random(n);
    SignalProjector p = signal_projector(u * v.adjoint(), 1);
    CHECK(p.rank() == 1);
    CHECK(p.residual(u).norm() / u.norm() < 1e-12);
    // Projector axioms via the basis: P² = P and Pᴴ = P hold by construction
    // for an orthonormal basis; check idempotence numerically.
    Eigen::VectorXcd g = Eigen::VectorXcd::Random(l);
    Eigen::VectorXcd pg = g - p.residual(g);
    Eigen::VectorXcd ppg = pg - p.residual(pg);
    CHECK((ppg - pg).norm() < 1e-12);
  }

  SUBCASE("zero matrix rejected") {
    CHECK_THROWS_AS(signal_projector(Eigen::MatrixXcd::Zero(4, 4), 1), SolverError);
  }

  SUBCASE("agrees with a full SVD on wideband data") {
    auto& f = fix();
    SfrMatrix sfr = dipole_approx_sfr(f.model, test::reference_target_center(),
                                      EllipseShape{0.025, 0.1, kPi / 3}, f.spectrum);
    SignalProjector p = signal_projector(sfr.values, 2);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sfr.values, Eigen::ComputeThinU);
    const Eigen::MatrixXcd u2 = svd.matrixU().leftCols(2);
    // Same subspace: projecting one basis through the other loses nothing.
    CHECK((u2 - p.basis * (p.basis.adjoint() * u2)).norm() < 1e-8);
  }

  SUBCASE("clean disk data contains the true illumination vector") {
    auto& f = fix();
    const Vec2 z = test::reference_target_center();
    SfrMatrix sfr = dipole_approx_sfr(f.model, z, DiskShape{0.05}, f.spectrum);
    SignalProjector p = signal_projector(sfr.values, 1);
    const Eigen::Matrix2Xd k = sensor_kernel_gradients(sfr.sensor_positions,
                                                       sfr.sensor_normals, z);
    const Vec2 gu = f.model.background_gradient(z);
    Eigen::VectorXd gt = gu.x() * k.row(0).transpose() + gu.y() * k.row(1).transpose();
    CHECK(p.residual_norm_unit((gt / gt.norm()).cast<Cplx>().eval()) < 1e-8);
  }
}

TEST_CASE("music value") {
  SUBCASE("full-space projector hits the cap") {
    SignalProjector full;
    full.basis = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::Matrix2Xd kernels(2, 2);
    kernels << 1.0, 0.0, 0.0, 1.0;
    CHECK(music_value(full, kernels, {1.0, 0.0}, 1e12) == 1e12);
  }

  SUBCASE("invariant under nonzero complex rescaling of the data") {
    auto& f = fix();
    const Vec2 z = test::reference_target_center();
    SfrMatrix sfr = dipole_approx_sfr(f.model, z, DiskShape{0.05}, f.spectrum);
    SignalProjector p1 = signal_projector(sfr.values, 1);
    SignalProjector p2 = signal_projector((Cplx(0.0, -3.7) * sfr.values).eval(), 1);
    const Vec2 probe(2.0, -1.0);
    const Eigen::Matrix2Xd k =
        sensor_kernel_gradients(sfr.sensor_positions, sfr.sensor_normals, probe);
    const Vec2 gu = f.model.background_gradient(probe);
    CHECK(music_value(p1, k, gu) ==
          doctest::Approx(music_value(p2, k, gu)).epsilon(1e-9));
  }
}

TEST_CASE("scan locates the reference disk") {
  auto& f = fix();
  const Vec2 z_true = test::reference_target_center();

  SUBCASE("ten frequencies") {
    SfrMatrix sfr = dipole_approx_sfr(f.model, z_true, DiskShape{0.05}, f.spectrum);
    SignalProjector proj = signal_projector(sfr.values, 1);
    ImagingGrid grid = scan(f.geometry, proj);
    CHECK((grid.argmax - z_true).norm() <= cell_diagonal(grid.spec));

    // At the exact center the residual nearly cancels.
    const Eigen::Matrix2Xd k =
        sensor_kernel_gradients(sfr.sensor_positions, sfr.sensor_normals, z_true);
    CHECK(music_value(proj, k, f.model.background_gradient(z_true)) >= 1e6);

    // Median over evaluated points stays modest.
    std::vector<double> vals;
    for (int iy = 0; iy < grid.spec.ny; ++iy) {
      for (int ix = 0; ix < grid.spec.nx; ++ix) {
        if (std::isfinite(grid.values(iy, ix))) vals.push_back(grid.values(iy, ix));
      }
    }
    std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
    CHECK(vals[vals.size() / 2] < 1e2);
  }

  SUBCASE("single frequency") {
    MaterialSpectrum one = MaterialSpectrum::equidistributed(2.0, 1.0, 1.0, 1, 1, 1);
    SfrMatrix sfr = dipole_approx_sfr(f.model, z_true, DiskShape{0.05}, one);
    ImagingGrid grid = scan(f.geometry, signal_projector(sfr.values, 1));
    CHECK((grid.argmax - z_true).norm() <= cell_diagonal(grid.spec));
  }

  SUBCASE("column rescaling leaves the argmax unchanged") {
    SfrMatrix sfr = dipole_approx_sfr(f.model, z_true, DiskShape{0.05}, f.spectrum);
    ImagingGrid base = scan(f.geometry, signal_projector(sfr.values, 1));
    SfrMatrix scaled = sfr;
    scaled.values.col(3) *= Cplx(0.0, 5.0);
    ImagingGrid mod = scan(f.geometry, signal_projector(scaled.values, 1));
    CHECK(base.argmax == mod.argmax);
  }

  SUBCASE("deterministic bit-for-bit") {
    SfrMatrix sfr = dipole_approx_sfr(f.model, z_true, DiskShape{0.05}, f.spectrum);
    ImagingGrid a = scan(f.geometry, signal_projector(sfr.values, 1));
    ImagingGrid b = scan(f.geometry, signal_projector(sfr.values, 1));
    CHECK(a.argmax == b.argmax);
    for (int iy = 0; iy < a.spec.ny; ++iy) {
      for (int ix = 0; ix < a.spec.nx; ++ix) {
        const double va = a.values(iy, ix), vb = b.values(iy, ix);
        CHECK(((std::isnan(va) && std::isnan(vb)) || va == vb));
      }
    }
  }
}

TEST_CASE("mirror symmetry of the imaging map") {
  auto& f = fix();
  const Vec2 z = test::reference_target_center();
  const Vec2 z_mirror(z.x(), -z.y());
  SfrMatrix up = dipole_approx_sfr(f.model, z, DiskShape{0.05}, f.spectrum);
  SfrMatrix down = dipole_approx_sfr(f.model, z_mirror, DiskShape{0.05}, f.spectrum);
  ImagingGrid gu = scan(f.geometry, signal_projector(up.values, 1));
  ImagingGrid gd = scan(f.geometry, signal_projector(down.values, 1));
  const int ny = gu.spec.ny;
  double max_rel = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < gu.spec.nx; ++ix) {
      const double a = gu.values(iy, ix);
      const double b = gd.values(ny - 1 - iy, ix);
      if (std::isfinite(a) && std::isfinite(b)) {
        max_rel = std::max(max_rel, std::abs(a - b) / std::max(1.0, std::abs(a)));
      }
    }
  }
  CHECK(max_rel < 1e-8);
  CHECK((gd.argmax - Vec2(gu.argmax.x(), -gu.argmax.y())).norm() < 1e-12);
}

TEST_CASE("identifiability over a ring of true positions") {
  auto& f = fix();
  MaterialSpectrum sp = MaterialSpectrum::equidistributed(2.0, 1.0, 1.0, 3, 1, 3);
  const double diag = cell_diagonal(f.geometry.spec());
  int tested = 0;
  for (double radius : {1.0, 1.5, 2.0}) {
    for (int a = 0; a < 8; ++a) {
      const double angle = kTwoPi * a / 8;
      const Vec2 z(radius * std::cos(angle), radius * std::sin(angle));
      if (distance_to_curve(f.model.fish().body, z) < f.geometry.spec().margin + 0.05) {
        continue;  // inside the exclusion zone: not evaluable by contract
      }
      SfrMatrix sfr = dipole_approx_sfr(f.model, z, DiskShape{0.05}, sp);
      ImagingGrid grid = scan(f.geometry, signal_projector(sfr.values, 1));
      CHECK((grid.argmax - z).norm() <= diag);
      ++tested;
    }
  }
  CHECK(tested >= 18);
}

TEST_CASE("noiseless RMS stays within one cell and parallel workers agree") {
  auto& f = fix();
  MaterialSpectrum sp = MaterialSpectrum::equidistributed(2.0, 1.0, 1.0, 5, 1, 5);
  auto target = std::make_shared<CurveMesh>(
      discretize(test::reference_disk_target(), 96, ElementKind::P0Panels));
  BemSfrData data = build_sfr_bem(f.model, target, sp);
  LocationStudy study{f.model, data, f.geometry, test::reference_target_center()};
  const double rms0 = rms_location_error(study, 0.0, 4, 99, 0, 1);
  CHECK(rms0 <= cell_diagonal(f.geometry.spec()));
  const double noisy1 = rms_location_error(study, 0.01, 6, 99, 0, 1);
  const double noisy2 = rms_location_error(study, 0.01, 6, 99, 0, 3);
  CHECK(noisy1 == noisy2);
}
