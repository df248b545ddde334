#pragma once

#include "stentsim/material.hpp"
#include "stentsim/types.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace stentsim {


// Thrown when det F <= 0 at a Gauss point; carries the offending element.
struct ElementDiverged : std::runtime_error {
  explicit ElementDiverged(int id)
      : std::runtime_error("element " + std::to_string(id) +
                           " diverged: non-positive deformation Jacobian"),
        element_id(id) {}
  int element_id;
};

struct Hex8Result {
  Vec24 f = Vec24::Zero();
  Mat24 k = Mat24::Zero();
};

struct FacetResult {
  Vec12 f = Vec12::Zero();  // force exerted on the body
  Mat12 k = Mat12::Zero();  // for pressure: df/du; for springs: c_c * mass matrix
};

// Total-Lagrangian internal force and consistent stiffness of one element
// (2x2x2 Gauss). Displacements are node-major [u0x u0y u0z u1x ...]. When
// params.eta_visc > 0, a pseudo-time Kelvin-Voigt term
// eta*(E - E_prev)/dtau_pseudo is added to the stress (stabilization only;
// E_prev per Gauss point is the strain committed at the last accepted step).
Hex8Result hex8_internal(const std::array<Vec3, 8>& X, const Vec24& u,
                         const HyperelasticParams& p, const Vec3& Ma, const Vec3& Mb,
                         const std::array<Mat3, 8>* E_prev = nullptr,
                         double dtau_pseudo = 1.0, int elem_id = -1);

// Green-Lagrange strain at the 8 Gauss points (for viscous history commits).
std::array<Mat3, 8> hex8_green_strains(const std::array<Vec3, 8>& X, const Vec24& u,
                                       int elem_id = -1);

// Constitutive Cauchy stress at the 8 Gauss points (viscous stabilization
// excluded: reported stresses are the hyperelastic response).
std::array<Mat3, 8> hex8_cauchy(const std::array<Vec3, 8>& X, const Vec24& u,
                                const HyperelasticParams& p, const Vec3& Ma, const Vec3& Mb,
                                int elem_id = -1);

// Follower pressure on a bilinear facet with outward-from-solid reference
// orientation: p > 0 pushes along the negated current normal (inflates the
// cavity the outward normal points into). Returns the current-configuration
// load and its exact (unsymmetric) linearization df/du. Facet displacements
// are node-major 12-vectors.
FacetResult follower_pressure(const std::array<Vec3, 4>& X, const Vec12& u, double p);

// Distributed restoring springs: traction -c_c * u integrated over the
// reference facet. f = -c_c M u with M the facet mass-like matrix; k = c_c M.
FacetResult spring_boundary(const std::array<Vec3, 4>& X, const Vec12& u, double c_c);

} // namespace stentsim
