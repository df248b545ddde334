#pragma once

#include "stentsim/material.hpp"
#include "stentsim/meshes.hpp"

#include <string>
#include <vector>

// Post-processing quantities: stent diameter and per-ring diameters from the
// beam node metadata, centerline curvature of the ring-centroid polyline,
// recoil, and principal Cauchy stress extrema over solid meshes.

namespace stentsim {

// Twice the mean distance of all beam nodes from a straight axis through
// `origin` along `direction`.
double stent_diameter(const BeamMesh& mesh, const std::vector<Vec3>& x,
                      const Vec3& origin, const Vec3& direction);

// Twice the mean distance of all beam nodes from a polyline centerline
// (closest point over all segments; a single-point centerline measures
// plain point distance).
double stent_diameter(const BeamMesh& mesh, const std::vector<Vec3>& x,
                      const std::vector<Vec3>& centerline);

struct Recoil {
  double absolute = 0.0; // mm
  double percent = 0.0;  // 100 * absolute / d_max
};

// Elastic recoil between the maximum-pressure and final diameters.
Recoil recoil(double d_max, double d_final);

// Centroid of each ring's nodes (connector interiors excluded), indexed by
// ring id.
std::vector<Vec3> ring_centroids(const BeamMesh& mesh, const std::vector<Vec3>& x);

// Per-ring diameter: twice the mean distance of the ring's nodes from the
// ring centroid, measured perpendicular to the local axis. The local axis
// follows the centroid polyline (central differences, one-sided at the
// ends; a single-ring mesh falls back to the z axis).
std::vector<double> ring_diameters(const BeamMesh& mesh, const std::vector<Vec3>& x);

// Mean Menger curvature over interior triples of the centroid polyline;
// zero when fewer than three points are given.
double mean_centerline_curvature(const std::vector<Vec3>& centroids);

// Largest principal Cauchy stress of each element, taken over its Gauss
// points (viscous stabilization excluded).
std::vector<double> element_sigma1(const SolidMesh& mesh, const std::vector<Vec3>& x,
                                   const std::vector<HyperelasticParams>& materials);

// Largest principal Cauchy stress per material layer, taken over all Gauss
// points of the layer's elements.
std::vector<double> max_principal_stress_per_layer(
    const SolidMesh& mesh, const std::vector<Vec3>& x,
    const std::vector<HyperelasticParams>& materials);

// Largest principal Cauchy stress over the elements owning the facets of a
// named surface set.
double max_principal_stress_on_surface(const SolidMesh& mesh, const std::vector<Vec3>& x,
                                       const std::vector<HyperelasticParams>& materials,
                                       const std::string& surface);

}  // namespace stentsim
