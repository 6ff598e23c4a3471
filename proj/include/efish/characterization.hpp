#pragma once

#include "efish/imaging.hpp"

namespace efish {

struct CharacterizationResult {
  double size_a = 0.0;   // disk radius, or major semi-axis
  double size_b = 0.0;
  double angle = 0.0;
  double conductivity = 0.0;
  double permittivity = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Per-frequency least-squares estimates of α²(k_n-1)/(k_n+1) from a located
/// disk target: each SFR column is fitted against the 2π-scaled model vector
/// ∇U(z)ᵀ ∇_z(∂G/∂ν_x)(x_l, z).
std::vector<Cplx> estimate_tau_disk(const SfrMatrix& sfr, Vec2 z, Vec2 grad_u);

/// Damped Gauss-Newton minimization of Σ_n |α²(k_n-1)/(k_n+1) - τ_n|² over
/// (α, k, ε), log-transformed to stay positive; analytic Jacobian.
CharacterizationResult fit_disk(const std::vector<Cplx>& taus,
                                const std::vector<double>& harmonics,
                                double omega0, double alpha0 = 0.01,
                                double k0 = 1.0, double eps0 = 1.0);

/// Least-squares extraction of the complex symmetric polarization tensor per
/// frequency from measurements at two target positions (in the fish frame).
/// Requires the two background gradients to be non-parallel.
std::vector<PolarizationTensor> estimate_pt_two_positions(
    const SfrMatrix& sfr1, const SfrMatrix& sfr2, Vec2 z1, Vec2 z2,
    Vec2 grad_u1, Vec2 grad_u2);

struct SemiAxes {
  double a = 0.0, b = 0.0, angle = 0.0;
};

/// Semi-axis estimates from the high-frequency limit of the polarization
/// tensor: a = τ1/√(π(τ1+τ2)), b = τ2/√(π(τ1+τ2)), eigenvalues ordered by
/// |Re| descending.
SemiAxes semiaxes_from_pt(const PolarizationTensor& tensor,
                          double limit_quality = 1e30);

struct MaterialEstimate {
  double conductivity = 0.0;
  double permittivity = 0.0;
};

/// Material parameters from the per-frequency tensors and estimated axes:
/// with μ_n = τ_{n,1}/(π a b (a+b)), k is averaged from Re((1+aμ)/(1-bμ))
/// over the lowest three harmonics and ε from Im(...)/(ω0 n) over all.
MaterialEstimate material_from_pt(const std::vector<PolarizationTensor>& tensors,
                                  double a_est, double b_est, double omega0,
                                  const std::vector<double>& harmonics);

/// Cross-check route: joint Gauss-Newton fit of (a, b, k, ε) against the
/// per-frequency tensor eigenvalue pairs.
CharacterizationResult fit_ellipse_eigenvalues(
    const std::vector<PolarizationTensor>& tensors,
    const std::vector<double>& harmonics, double omega0, double a0, double b0,
    double k0, double eps0);

}  // namespace efish
