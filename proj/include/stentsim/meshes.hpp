#pragma once

#include "stentsim/types.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace stentsim {

// --- beam side -------------------------------------------------------------

// Two-node geometrically exact beam element. The element keeps per-node
// material offsets q_off so that its effective triads L~_i = L_i * R(q_off_i)
// coincide with a common axis-aligned frame in the reference configuration;
// gamma_ref / phi_ref make the stored reference state exactly stress-free
// (also after warping, where l_ref is deliberately NOT recomputed).
struct BeamElement {
  std::array<int, 2> n{};
  double l_ref = 0.0;
  Quat q_off[2] = {Quat::Identity(), Quat::Identity()};
  Vec3 gamma_ref = Vec3::UnitX();
  Vec3 phi_ref = Vec3::Zero();
};

enum class BeamNodeKind { ApexBottom, ApexTop, StrutInterior, ConnectorInterior };

struct BeamMesh {
  std::vector<Vec3> x;
  std::vector<Quat> q;
  std::vector<BeamElement> elements;

  // generator metadata consumed by scenarios/metrics
  std::vector<int> ring;    // ring index, -1 for connector interiors
  std::vector<double> theta; // angular position at generation [rad]
  std::vector<BeamNodeKind> kind;
  double axis_length = 0.0;
};

// Recompute per-element reference data (aligned frames, offsets, strain
// offsets) from current node positions/triads; declares the current
// configuration stress-free. Element l_ref values are preserved if already
// set (> 0), otherwise initialized to the chord length.
void reset_reference(BeamMesh& mesh);

// --- solid side ------------------------------------------------------------

struct Facet {
  std::array<int, 4> n{};
  int owner = -1; // owning hex element
};

struct SolidMesh {
  std::vector<Vec3> x;
  std::vector<std::array<int, 8>> hex;
  std::vector<int> layer;   // material layer tag per element
  std::vector<Mat3> frame;  // tube frame per element: columns radial|circ|axial
  std::vector<Vec3> fiber_a, fiber_b; // unit fiber directions per element
  std::map<std::string, std::vector<Facet>> surfaces; // oriented outward-from-solid
  int n_layers = 1;
};

} // namespace stentsim
