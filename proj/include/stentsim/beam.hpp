#pragma once

#include "stentsim/meshes.hpp"
#include "stentsim/types.hpp"

// Two-node geometrically exact beam with a circular solid cross-section.
// Axial, shear, and torsional responses are elastic; bending is rate-
// independent elastoplastic with linear isotropic hardening, integrated by a
// radial return on the bending-moment vector. The element interpolates the
// relative rotation vector between the node triads (frame-indifferent by
// construction) and evaluates the constitutive terms at one midpoint station.
//
// Degree-of-freedom order of all 12-vectors/matrices:
//   [r1 (3 translations), w1 (3 spatial rotation increments), r2, w2].
// Rotation dofs are multiplicative: a solver applies q <- exp(w) * q, and the
// tangent returned here is consistent with exactly that update.

namespace stentsim {

struct BeamSectionParams {
  double young = 0.0;         // Young's modulus
  double poisson = 0.0;       // Poisson ratio (sets the shear modulus)
  double radius = 0.0;        // section radius
  double yield_moment = 0.0;  // initial bending yield moment; <= 0 keeps bending elastic
  double hardening = 0.0;     // hardening modulus of the uniaxial law
  double shear_correction = 0.75;

  double shear_modulus() const { return young / (2.0 * (1.0 + poisson)); }
  double area() const;           // pi r^2
  double second_moment() const;  // pi r^4 / 4, any transverse axis
  double polar_moment() const { return 2.0 * second_moment(); }

  Mat3 force_stiffness() const;           // diag(EA, GA_s, GA_s)
  Mat3 elastic_moment_stiffness() const;  // diag(GJ, EI, EI)
};

// Internal variables of the bending return map at one integration point.
struct SectionState {
  Vec2 plastic_curvature = Vec2::Zero();  // bending axes (2, 3)
  double accumulated = 0.0;               // accumulated plastic curvature
};

struct MomentResult {
  Vec3 moment;   // section moment conjugate to the material curvature
  Mat3 tangent;  // consistent d(moment)/d(curvature)
};

// Moment update at fixed committed state `sn`; the trial-updated internal
// variables are written to `out` when provided (commit happens by copying).
MomentResult moment_update(const Vec3& curvature, const SectionState& sn,
                           const BeamSectionParams& p, SectionState* out = nullptr);

struct BeamStrains {
  Vec3 gamma;  // material stretch/shear strain relative to the reference
  Vec3 kappa;  // material curvature relative to the reference
};

BeamStrains beam_strains(const BeamElement& e, const Vec3& x1, const Quat& q1,
                         const Vec3& x2, const Quat& q2);

struct BeamResult {
  Vec12 f;  // internal force
  Mat12 k;  // consistent tangent (unsymmetric away from equilibrium)
};

BeamResult beam_internal(const BeamElement& e, const Vec3& x1, const Quat& q1,
                         const Vec3& x2, const Quat& q2, const BeamSectionParams& p,
                         const SectionState& sn, SectionState* out = nullptr);

}  // namespace stentsim
