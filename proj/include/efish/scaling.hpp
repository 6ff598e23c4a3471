#pragma once

#include "efish/common.hpp"

namespace efish {

/// Physical quantities in SI units.
struct PhysicalParams {
  double voltage = 10e-3;                  // organ discharge voltage [V]
  double body_length = 0.1;                // [m]
  double fundamental_freq = 1e3;           // [Hz]
  double water_conductivity = 1e-2;        // [S/m]
  double organ_current = 1e-3;             // [A]
  double body_conductivity = 1.0;          // [S/m]
  double skin_surface_conductivity = 1.0;  // [S/m^2]
  double skin_thickness = 100e-6;          // [m]
  double permeability = 1.25663706143592e-6;      // [H/m]
  double permittivity = 80 * 8.8541878128e-12;    // [F/m]

  void validate() const;
};

struct DimensionlessGroups {
  double body_conductivity;      // σ_b/σ_0
  double skin_conductivity;      // hΣ/σ_0
  double skin_thickness;         // h/L
  double effective_impedance;    // (h/L)/(hΣ/σ_0)
};

DimensionlessGroups nondimensionalize(const PhysicalParams& p);

struct QuasistaticCheck {
  double ratio;  // L_max · ω_max · sqrt(με)
  bool pass;     // ratio < 0.01
};

QuasistaticCheck eqs_validity(const PhysicalParams& p, double max_length,
                              double max_freq);

}  // namespace efish
