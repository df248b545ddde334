#pragma once

#include "stentsim/beam.hpp"
#include "stentsim/generators.hpp"
#include "stentsim/material.hpp"

#include <optional>
#include <string>
#include <vector>

// Scenario configuration. A scenario is described by a single JSON document
// (schema documented in docs/config.md); parsing fills benchmark defaults
// for omitted fields, rejects unknown keys, and reports errors with the path
// of the offending field. The unit system is fixed to mm / N / MPa.

namespace stentsim {

enum class ScenarioKind { FreeExpansion, VesselDeployment };

// Pressure unit constants. 13 atm is stored as 1.3172 MPa in the shipped
// configs; 85 mmHg as 0.011332 MPa.
inline constexpr double kMPaPerAtm = 0.101325;
inline constexpr double kMPaPerMmHg = 0.000133322;

struct BeamMaterialConfig {
  double young = 240000.0;                // MPa
  double poisson = 0.3;
  double yield_moment = 0.0943;           // N mm, initial bending yield
  double elastoplastic_modulus = 64000.0; // MPa, post-yield tangent modulus
  double shear_correction = 0.75;

  // Linear-hardening section parameters; the hardening modulus follows from
  // the elasto-plastic tangent modulus via H = E Eep / (E - Eep).
  BeamSectionParams section(double radius) const;

  bool operator==(const BeamMaterialConfig&) const = default;
};

struct FiberFamilyConfig {
  double k1 = 0.0;        // MPa
  double k2 = 1.0;        // dimensionless exponent
  double angle_deg = 0.0; // from the local circumferential direction

  bool operator==(const FiberFamilyConfig&) const = default;
};

struct SolidMaterialConfig {
  double young = 0.0; // MPa
  double poisson = 0.0;
  FiberFamilyConfig fiber_a, fiber_b;
  bool fibers_tension_only = true;
  double viscous_factor = 0.0; // eta_visc = factor * shear modulus

  HyperelasticParams params() const;
  FiberAngles angles() const { return {fiber_a.angle_deg, fiber_b.angle_deg}; }

  bool operator==(const SolidMaterialConfig&) const = default;

  static SolidMaterialConfig balloon_default();
  static SolidMaterialConfig media_default();
  static SolidMaterialConfig adventitia_default();
};

struct StentConfig {
  // initial_diameter <= 0 selects the closed-ring value
  // crowns_per_ring * crown_distance / pi.
  double initial_diameter = 0.0;
  int rings = 4;
  int crowns_per_ring = 8;
  double crown_height = 1.5;   // mm
  double crown_distance = 0.45; // mm
  double ring_pitch = 1.5;     // mm
  int connectors_per_gap = 2;
  int elements_per_strut = 3;
  double strut_radius = 0.06;  // mm
  BeamMaterialConfig material;

  double diameter() const;
  StentDesign design() const;
  double length() const { return rings * ring_pitch; }

  bool operator==(const StentConfig&) const = default;
};

struct BalloonConfig {
  double length = 8.4;          // mm
  double outer_diameter = 0.98; // mm
  double wall_thickness = 0.04; // mm
  int n_circ = 29;
  int n_axial = 39;
  int n_radial = 1;
  double end_spring_stiffness = 100.0; // MPa/mm (0.1 GPa)
  double pressure_max = 13.0 * kMPaPerAtm;
  SolidMaterialConfig material = SolidMaterialConfig::balloon_default();

  bool operator==(const BalloonConfig&) const = default;
};

struct VesselLayerConfig {
  std::string name;
  double thickness_fraction = 0.0; // of the wall, ordered inner -> outer
  SolidMaterialConfig material;

  bool operator==(const VesselLayerConfig&) const = default;
};

struct VesselConfig {
  double length = 10.0;        // mm
  double outer_diameter = 2.8; // mm
  double wall_thickness = 0.6; // mm
  int n_circ = 16;
  int n_radial = 3;
  int n_axial = 12;
  double end_spring_stiffness = 1000.0; // MPa/mm (1 GPa)
  double prestress_pressure = 85.0 * kMPaPerMmHg; // diastolic, on the lumen
  std::vector<VesselLayerConfig> layers = default_layers(); // media + adventitia

  std::vector<double> layer_split() const;
  std::vector<HyperelasticParams> layer_materials() const;
  std::vector<FiberAngles> layer_angles() const;

  bool operator==(const VesselConfig&) const = default;

  static std::vector<VesselLayerConfig> default_layers();
};

struct ContactConfig {
  double beam_penalty = 10.0;   // N/mm^2, stent vs. balloon/vessel surfaces
  double surface_penalty = 5.0; // N/mm^2, balloon vs. vessel

  bool operator==(const ContactConfig&) const = default;
};

struct CenterlineConfig {
  std::string file;        // whitespace-separated x y z per line, mm
  double zeta = 4.0;       // smoothing-spline residual target
  double eps_zeta = 0.001; // relative band around zeta

  bool operator==(const CenterlineConfig&) const = default;
};

struct OutputConfig {
  std::string metrics_path = "metrics.csv";
  std::string summary_path = "summary.json";
  std::string fields_dir = "fields";
  int field_interval = 0; // every N committed steps; 0 = phase ends only

  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::FreeExpansion;
  int steps = 100; // total committed steps over all phases
  ContactConfig contact;
  OutputConfig output;
  StentConfig stent;
  BalloonConfig balloon;
  std::optional<VesselConfig> vessel;        // deployment only
  std::optional<CenterlineConfig> centerline; // curved free expansion only

  bool operator==(const ScenarioConfig&) const = default;
};

// Parse a config file / document. Throws std::runtime_error with a
// path-to-field message on schema violations.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

// Serialize with every field explicit; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& c);

// Load a centerline point file: one "x y z" triple per line (mm); '#'
// starts a comment. Throws on unreadable files or malformed lines.
std::vector<Vec3> load_centerline_points(const std::string& path);

}  // namespace stentsim
