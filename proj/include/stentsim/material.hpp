#pragma once

#include "stentsim/types.hpp"

namespace stentsim {

// Anisotropic hyperelastic material: compressible Neo-Hooke base plus two
// exponential fiber families plus a convex volumetric penalty,
//   Psi = G/2 (I1 - 3) - G ln J
//       + sum_f k1_f/(2 k2_f) [exp(k2_f (I_f - 1)^2) - 1]
//       + kappa_vol/4 (J^2 - 1 - 2 ln J).
// Fiber families act only in tension (I_f > 1) when tension_only is set.
// All stress quantities are second Piola-Kirchhoff unless noted.
struct HyperelasticParams {
  double E = 0.0;   // Young's modulus [MPa]
  double nu = 0.0;  // Poisson ratio, [0, 0.5)
  double k1[2] = {0.0, 0.0}; // fiber stiffness per family [MPa]
  double k2[2] = {1.0, 1.0}; // fiber exponent per family [-]
  double kappa_vol = 0.0;    // volumetric penalty modulus [MPa]
  double eta_visc = 0.0;     // pseudo-time dissipation [MPa * step]
  bool tension_only = true;

  double G() const { return E / (2.0 * (1.0 + nu)); }

  // kappa_vol defaults to the first Lame parameter so the small-strain limit
  // reproduces (E, nu) exactly; nu = 0 then carries no volumetric penalty.
  static HyperelasticParams make(double E, double nu, double k1a, double k2a,
                                 double k1b, double k2b, bool tension_only = true);
  static HyperelasticParams make_isotropic(double E, double nu);
};

// Voigt order is 11, 22, 33, 12, 23, 13 with engineering shear strain
// (gamma = 2 E_offdiag), so tangent entries are plain tensor components.
Vec6 to_voigt_stress(const Mat3& s);
Mat3 from_voigt_stress(const Vec6& v);
Vec6 to_voigt_strain(const Mat3& e);

double strain_energy(const Mat3& C, const HyperelasticParams& p, const Vec3& Ma,
                     const Vec3& Mb);
Mat3 pk2_stress(const Mat3& C, const HyperelasticParams& p, const Vec3& Ma, const Vec3& Mb);
// dS/dE_GL as a Voigt 6x6 (major and minor symmetric).
Mat6 material_tangent(const Mat3& C, const HyperelasticParams& p, const Vec3& Ma,
                      const Vec3& Mb);

Mat3 cauchy_from_pk2(const Mat3& F, const Mat3& S);

} // namespace stentsim
