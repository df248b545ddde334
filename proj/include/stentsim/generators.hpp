#pragma once

#include "stentsim/meshes.hpp"
#include "stentsim/spline.hpp"

#include <vector>

namespace stentsim {

// --- stent -----------------------------------------------------------------

// Zigzag ring stent on a cylinder. Rings are stacked along z with bottom
// apices of ring i at z = i * ring_pitch; each ring has crowns_per_ring
// bottom apices (and as many top apices, offset by half an apex spacing),
// i.e. 2*crowns_per_ring struts per ring. Adjacent rings are bridged by
// straight axial connector struts between same-angle bottom apices; the
// connector angles alternate between gaps. All nodes lie exactly on the
// cylinder of the given initial diameter.
struct StentDesign {
  double initial_diameter = 0.0; // [mm]
  int n_rings = 0;
  int crowns_per_ring = 0;       // bottom apices per ring
  double crown_height = 0.0;     // axial extent of one ring [mm]
  double crown_distance = 0.0;   // circumferential apex spacing [mm]
  double ring_pitch = 0.0;       // axial distance between ring bases [mm]
  int connectors_per_gap = 0;
  int elements_per_strut = 1;
  double strut_radius = 0.0;     // [mm], used for self-intersection check
};

BeamMesh generate_stent(const StentDesign& d);

// --- tube ------------------------------------------------------------------

// Structured hex8 tube. layer_split holds one wall-thickness fraction per
// material layer, ordered inner -> outer; fractions must sum to 1. Radial
// elements are distributed over the layers proportionally (at least one
// each). If a centerline is given the tube is swept along it with
// rotation-minimizing frames, starting at arclength 0.
struct TubeSpec {
  double length = 0.0;          // [mm], along the (possibly curved) axis
  double outer_diameter = 0.0;  // [mm]
  double wall_thickness = 0.0;  // [mm]
  int n_circ = 0;
  int n_radial = 0;
  int n_axial = 0;
  std::vector<double> layer_split = {1.0};
  const SplineCurve* centerline = nullptr; // optional, not owned
};

SolidMesh generate_tube(const TubeSpec& spec);

// Assign two unit fiber families per element from angles measured against
// the local circumferential direction, in the circumferential-axial tangent
// plane. The symmetric variant uses +/-phi per material layer; the general
// variant takes explicit per-layer angle pairs (degrees). Requires tube
// frames on the mesh.
struct FiberAngles {
  double a_deg = 0.0;
  double b_deg = 0.0;
};

void assign_fibers(SolidMesh& mesh, const std::vector<double>& phi_per_layer_deg);
void assign_fibers(SolidMesh& mesh, const std::vector<FiberAngles>& per_layer);

// --- warp ------------------------------------------------------------------

// Map a straight stent (axis = z, starting at z = 0) onto a curved
// centerline: node axial coordinate becomes arclength along the curve, the
// in-plane offset is carried by the rotation-minimizing frame, and nodal
// triads are rotated accordingly. Element reference lengths are preserved
// bit-for-bit; the warped configuration is re-declared stress-free.
BeamMesh warp_stent(const BeamMesh& straight, const SplineCurve& curve);

} // namespace stentsim
