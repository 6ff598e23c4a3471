#include <cmath>

#include "doctest.h"
#include "efish/mesh.hpp"
#include "oracle_utils.hpp"

using namespace efish;

TEST_CASE("ellipse factory") {
  SUBCASE("unit circle has curvature 1 everywhere") {
    BoundaryCurve c = make_ellipse({0, 0}, 1.0, 1.0);
    for (int i = 0; i < 32; ++i) {
      const double t = kTwoPi * i / 32;
      CHECK(c.curvature(t) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(c.position(t).norm() == doctest::Approx(1.0));
    }
  }
  SUBCASE("axis-aligned ellipse curvature at angle 0 is a/b^2") {
    BoundaryCurve c = make_ellipse({0, 0}, 1.0, 0.3);
    CHECK(c.curvature(0.0) == doctest::Approx(1.0 / 0.09).epsilon(1e-12));
  }
  SUBCASE("small disk target") {
    BoundaryCurve c = make_ellipse({0.75, 1.299}, 0.05, 0.05);
    CHECK(c.curvature(1.0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK((c.position(0.3) - Vec2(0.75, 1.299)).norm() == doctest::Approx(0.05));
  }
  SUBCASE("non-positive axis rejected") {
    CHECK_THROWS_AS(make_ellipse({0, 0}, 0.0, 1.0), InvalidGeometryError);
    CHECK_THROWS_AS(make_ellipse({0, 0}, 1.0, -0.2), InvalidGeometryError);
  }
  SUBCASE("periodicity") {
    BoundaryCurve c = make_ellipse({0.2, -0.4}, 2.0, 0.7, 0.5);
    CHECK((c.position(0.0) - c.position(kTwoPi)).norm() < 1e-14);
  }
}

TEST_CASE("fourier curve factory") {
  SUBCASE("single coefficient gives a circle") {
    RadialFourierSpec spec;
    spec.base = 0.25;
    BoundaryCurve c = make_fourier_curve(spec);
    for (int i = 0; i < 16; ++i) {
      CHECK(c.position(kTwoPi * i / 16).norm() == doctest::Approx(0.25));
      CHECK(c.curvature(kTwoPi * i / 16) == doctest::Approx(4.0));
    }
  }
  SUBCASE("flower-like target is regular and closes") {
    RadialFourierSpec spec;
    spec.base = 0.05;
    spec.cos_coeffs = {0.0, 0.0, 0.05 * 0.3};
    BoundaryCurve c = make_fourier_curve(spec);
    for (int i = 0; i < 10000; ++i) {
      CHECK(c.speed(kTwoPi * i / 10000) > 0.0);
    }
    CHECK((c.position(0.0) - c.position(kTwoPi)).norm() < 1e-14);
  }
  SUBCASE("all-zero coefficients rejected") {
    CHECK_THROWS_AS(make_fourier_curve(RadialFourierSpec{}), InvalidGeometryError);
    CHECK_THROWS_AS(make_fourier_curve(CoordinateFourierSpec{}), InvalidGeometryError);
  }
  SUBCASE("coordinate form: circle and a self-intersecting limaçon") {
    CoordinateFourierSpec circ;
    circ.x_cos = {1.0};
    circ.y_sin = {1.0};
    BoundaryCurve c = make_fourier_curve(circ);
    CHECK(c.position(0.5).norm() == doctest::Approx(1.0));

    // Inner-loop limaçon traced as x = cos t + 0.8 cos 2t, y = sin t + 0.8 sin 2t.
    CoordinateFourierSpec bad;
    bad.x_cos = {1.0, 0.8};
    bad.y_sin = {1.0, 0.8};
    CHECK_THROWS_AS(make_fourier_curve(bad), InvalidGeometryError);
  }
}

TEST_CASE("discretize") {
  SUBCASE("unit circle weights sum to 2π") {
    CurveMesh m = discretize(make_ellipse({0, 0}, 1, 1), 256, ElementKind::P0Panels);
    CHECK(std::abs(m.perimeter() - kTwoPi) < 1e-10);
  }
  SUBCASE("ellipse perimeter matches adaptive quadrature of |X'|") {
    BoundaryCurve c = make_ellipse({0, 0}, 1.0, 0.3);
    CurveMesh m = discretize(c, 256);
    const double oracle = test::adaptive_simpson(
        [&](double t) { return c.speed(t); }, 0.0, kTwoPi, 1e-13);
    CHECK(std::abs(m.perimeter() - oracle) / oracle < 1e-8);
  }
  SUBCASE("too-small node count refused") {
    CHECK_THROWS_WITH_AS(discretize(make_ellipse({0, 0}, 1, 1), 8),
                         doctest::Contains("fewer than 16"), InvalidGeometryError);
  }
  SUBCASE("node frame: unit outward normals orthogonal to tangents") {
    CurveMesh m = discretize(make_ellipse({0.3, 0.1}, 1.0, 0.3, 0.7), 64);
    Vec2 centroid = m.nodes.rowwise().mean();
    for (int i = 0; i < m.size(); ++i) {
      CHECK(std::abs(m.normals.col(i).norm() - 1.0) < 1e-14);
      CHECK(std::abs(m.normals.col(i).dot(m.tangents.col(i))) < 1e-14);
      CHECK(m.normals.col(i).dot(m.nodes.col(i) - centroid) > 0.0);
    }
  }
}

TEST_CASE("geometry invariants") {
  SUBCASE("perimeter and area invariant under rotation+translation") {
    const double a = 1.0, b = 0.3;
    CurveMesh m0 = discretize(make_ellipse({0, 0}, a, b, 0.0), 256);
    CurveMesh m1 = discretize(make_ellipse({2.5, -1.75}, a, b, 1.234), 256);
    CHECK(std::abs(m0.perimeter() - m1.perimeter()) / m0.perimeter() < 1e-8);
    CHECK(std::abs(m0.enclosed_area() - m1.enclosed_area()) / m0.enclosed_area() < 1e-8);
  }
  SUBCASE("circle curvature equals 1/R at every node") {
    for (double radius : {0.05, 1.0, 3.0}) {
      CurveMesh m = discretize(make_ellipse({0.4, 0.2}, radius, radius), 64);
      for (int i = 0; i < m.size(); ++i) {
        CHECK(std::abs(m.curvatures[i] - 1.0 / radius) < 1e-10 / radius);
      }
    }
  }
  SUBCASE("divergence-theorem area matches πab") {
    CurveMesh m = discretize(make_ellipse({0, 0}, 1.0, 0.3, 0.4), 256);
    CHECK(std::abs(m.enclosed_area() - kPi * 0.3) / (kPi * 0.3) < 1e-6);
  }
  SUBCASE("orientation normalized to counterclockwise") {
    // A clockwise parametrization comes out with outward normals anyway.
    BoundaryCurve cw(
        [](double t) { return Vec2(std::cos(-t), std::sin(-t)); },
        [](double t) { return Vec2(std::sin(-t), -std::cos(-t)); },
        [](double t) { return Vec2(-std::cos(-t), -std::sin(-t)); });
    CurveMesh m = discretize(cw, 32);
    for (int i = 0; i < m.size(); ++i) {
      CHECK(m.normals.col(i).dot(m.nodes.col(i)) > 0.9);
    }
    CHECK(m.enclosed_area() > 0.0);
  }
}

TEST_CASE("point queries") {
  BoundaryCurve body = make_ellipse({0, 0}, 1.0, 0.3);
  CHECK(point_inside(body, {0.7, 0.0}));
  CHECK(point_inside(body, {-0.9, 0.05}));
  CHECK(!point_inside(body, {1.2, 0.0}));
  CHECK(!point_inside(body, {0.75, 1.299}));
  CHECK(distance_to_curve(body, {2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(distance_to_curve(body, {0.0, 1.0}) == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("fish body validation and sensors") {
  FishBody fish;
  fish.body = make_ellipse({0, 0}, 1.0, 0.3);
  fish.validate();

  FishBody bad = fish;
  bad.dipole_position = {1.4, 0.0};
  CHECK_THROWS_AS(bad.validate(), InvalidConfigurationError);
  bad = fish;
  bad.skin_impedance = -0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidConfigurationError);

  CurveMesh m = discretize(fish.body, 256);
  auto idx = sensor_node_indices(m, 64);
  CHECK(idx.size() == 64);
  CHECK(idx[1] == 4);
  CHECK_THROWS_AS(sensor_node_indices(m, 66), InvalidConfigurationError);
}
