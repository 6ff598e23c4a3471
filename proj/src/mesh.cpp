#include "efish/mesh.hpp"

namespace efish {

double CurveMesh::enclosed_area() const {
  double area = 0.0;
  for (int i = 0; i < size(); ++i) {
    area += 0.5 * weights[i] * nodes.col(i).dot(normals.col(i));
  }
  return area;
}

CurveMesh discretize(const BoundaryCurve& curve, int count, ElementKind kind) {
  if (count < 16) {
    throw InvalidGeometryError(
        "refusing to discretize with fewer than 16 nodes (got " +
        std::to_string(count) + ")");
  }
  CurveMesh mesh;
  mesh.curve = curve;
  mesh.kind = kind;
  const double h = kTwoPi / count;
  const double offset = (kind == ElementKind::P0Panels) ? 0.5 * h : 0.0;
  mesh.params.resize(count);
  mesh.nodes.resize(2, count);
  mesh.normals.resize(2, count);
  mesh.tangents.resize(2, count);
  mesh.curvatures.resize(count);
  mesh.speeds.resize(count);
  mesh.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    const double t = offset + i * h;
    mesh.params[i] = t;
    mesh.nodes.col(i) = curve.position(t);
    mesh.normals.col(i) = curve.outward_normal(t);
    mesh.tangents.col(i) = curve.tangent(t);
    mesh.curvatures[i] = curve.curvature(t);
    mesh.speeds[i] = curve.speed(t);
    mesh.weights[i] = mesh.speeds[i] * h;
  }
  return mesh;
}

void FishBody::validate() const {
  if (!body.valid()) throw InvalidGeometryError("fish body curve not set");
  if (skin_impedance < 0.0) {
    throw InvalidConfigurationError("skin impedance must be nonnegative");
  }
  if (!point_inside(body, dipole_position)) {
    throw InvalidConfigurationError("electric-organ dipole must lie strictly inside the body");
  }
  if (sensor_count < 1) {
    throw InvalidConfigurationError("at least one sensor is required");
  }
}

std::vector<int> sensor_node_indices(const CurveMesh& mesh, int sensor_count) {
  const int n = mesh.size();
  if (sensor_count < 1 || n % sensor_count != 0) {
    throw InvalidConfigurationError(
        "sensor count must divide the body mesh node count (" +
        std::to_string(sensor_count) + " vs " + std::to_string(n) + ")");
  }
  std::vector<int> idx(sensor_count);
  const int stride = n / sensor_count;
  for (int l = 0; l < sensor_count; ++l) idx[l] = l * stride;
  return idx;
}

}  // namespace efish
