#pragma once

#include <memory>

#include "efish/curve.hpp"

namespace efish {

enum class ElementKind { P0Panels, P1Nodes };

/// Node data derived from a curve: uniform-in-parameter placement, exact
/// normals/curvatures from the parametrization, trapezoid/midpoint arclength
/// weights w_i = |X'(t_i)|·Δt. P1 nodes sit at t_i = iΔt, P0 panel midpoints
/// at t_i = (i+1/2)Δt. Immutable after construction.
struct CurveMesh {
  BoundaryCurve curve;
  ElementKind kind = ElementKind::P1Nodes;
  Eigen::ArrayXd params;
  Eigen::Matrix2Xd nodes;
  Eigen::Matrix2Xd normals;
  Eigen::Matrix2Xd tangents;
  Eigen::ArrayXd curvatures;
  Eigen::ArrayXd speeds;
  Eigen::ArrayXd weights;

  int size() const { return static_cast<int>(params.size()); }
  double spacing() const { return kTwoPi / size(); }
  double perimeter() const { return weights.sum(); }
  double max_panel_length() const { return speeds.maxCoeff() * spacing(); }
  double enclosed_area() const;
};

CurveMesh discretize(const BoundaryCurve& curve, int count,
                     ElementKind kind = ElementKind::P1Nodes);

/// Fish model: body curve, effective skin impedance, electric-organ dipole,
/// and the number of equidistant-in-parameter skin sensors.
struct FishBody {
  BoundaryCurve body;
  double skin_impedance = 0.1;
  Vec2 dipole_position{0.7, 0.0};
  Vec2 dipole_moment{1.0, 0.0};
  int sensor_count = 64;

  void validate() const;
};

/// Mesh-node indices of the L sensors; requires L to divide the node count.
std::vector<int> sensor_node_indices(const CurveMesh& mesh, int sensor_count);

}  // namespace efish
