#include "efish/scaling.hpp"

#include <cmath>

namespace efish {

void PhysicalParams::validate() const {
  for (double v : {voltage, body_length, fundamental_freq, water_conductivity,
                   organ_current, body_conductivity, skin_surface_conductivity,
                   skin_thickness, permeability, permittivity}) {
    if (!(v > 0.0)) {
      throw InvalidConfigurationError("physical parameters must be strictly positive");
    }
  }
}

DimensionlessGroups nondimensionalize(const PhysicalParams& p) {
  p.validate();
  DimensionlessGroups g;
  g.body_conductivity = p.body_conductivity / p.water_conductivity;
  g.skin_conductivity =
      p.skin_thickness * p.skin_surface_conductivity / p.water_conductivity;
  g.skin_thickness = p.skin_thickness / p.body_length;
  g.effective_impedance = g.skin_thickness / g.skin_conductivity;
  return g;
}

QuasistaticCheck eqs_validity(const PhysicalParams& p, double max_length,
                              double max_freq) {
  if (max_length < 0.0 || max_freq < 0.0) {
    throw InvalidConfigurationError("EQS check needs nonnegative bounds");
  }
  const double ratio =
      max_length * max_freq * std::sqrt(p.permeability * p.permittivity);
  return {ratio, ratio < 0.01};
}

}  // namespace efish
