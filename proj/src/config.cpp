#include "stentsim/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stentsim {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::runtime_error("config: " + (path.empty() ? "" : path + ": ") + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known) fail(path, "unknown key '" + item.key() + "'");
  }
}

double get_num(const json& j, const std::string& path, const char* key, double def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& path, const char* key, int def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& j, const std::string& path, const char* key, bool def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    const std::string& def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

FiberFamilyConfig parse_fiber(const json& j, const std::string& path,
                              const FiberFamilyConfig& def) {
  expect_object(j, path);
  check_keys(j, path, {"k1", "k2", "angle_deg"});
  FiberFamilyConfig f;
  f.k1 = get_num(j, path, "k1", def.k1);
  f.k2 = get_num(j, path, "k2", def.k2);
  f.angle_deg = get_num(j, path, "angle_deg", def.angle_deg);
  return f;
}

SolidMaterialConfig parse_solid_material(const json& j, const std::string& path,
                                         const SolidMaterialConfig& def) {
  expect_object(j, path);
  check_keys(j, path,
             {"young", "poisson", "fiber_a", "fiber_b", "fibers_tension_only",
              "viscous_factor"});
  SolidMaterialConfig m;
  m.young = get_num(j, path, "young", def.young);
  m.poisson = get_num(j, path, "poisson", def.poisson);
  m.fiber_a = j.contains("fiber_a")
                  ? parse_fiber(j.at("fiber_a"), join(path, "fiber_a"), def.fiber_a)
                  : def.fiber_a;
  m.fiber_b = j.contains("fiber_b")
                  ? parse_fiber(j.at("fiber_b"), join(path, "fiber_b"), def.fiber_b)
                  : def.fiber_b;
  m.fibers_tension_only =
      get_bool(j, path, "fibers_tension_only", def.fibers_tension_only);
  m.viscous_factor = get_num(j, path, "viscous_factor", def.viscous_factor);
  return m;
}

BeamMaterialConfig parse_beam_material(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path,
             {"young", "poisson", "yield_moment", "elastoplastic_modulus",
              "shear_correction"});
  BeamMaterialConfig d, m;
  m.young = get_num(j, path, "young", d.young);
  m.poisson = get_num(j, path, "poisson", d.poisson);
  m.yield_moment = get_num(j, path, "yield_moment", d.yield_moment);
  m.elastoplastic_modulus =
      get_num(j, path, "elastoplastic_modulus", d.elastoplastic_modulus);
  m.shear_correction = get_num(j, path, "shear_correction", d.shear_correction);
  return m;
}

StentConfig parse_stent(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path,
             {"initial_diameter", "rings", "crowns_per_ring", "crown_height",
              "crown_distance", "ring_pitch", "connectors_per_gap",
              "elements_per_strut", "strut_radius", "material"});
  StentConfig d, s;
  s.initial_diameter = get_num(j, path, "initial_diameter", d.initial_diameter);
  s.rings = get_int(j, path, "rings", d.rings);
  s.crowns_per_ring = get_int(j, path, "crowns_per_ring", d.crowns_per_ring);
  s.crown_height = get_num(j, path, "crown_height", d.crown_height);
  s.crown_distance = get_num(j, path, "crown_distance", d.crown_distance);
  s.ring_pitch = get_num(j, path, "ring_pitch", d.ring_pitch);
  s.connectors_per_gap = get_int(j, path, "connectors_per_gap", d.connectors_per_gap);
  s.elements_per_strut = get_int(j, path, "elements_per_strut", d.elements_per_strut);
  s.strut_radius = get_num(j, path, "strut_radius", d.strut_radius);
  if (j.contains("material"))
    s.material = parse_beam_material(j.at("material"), join(path, "material"));
  return s;
}

BalloonConfig parse_balloon(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path,
             {"length", "outer_diameter", "wall_thickness", "n_circ", "n_axial",
              "n_radial", "end_spring_stiffness", "pressure_max", "material"});
  BalloonConfig d, b;
  b.length = get_num(j, path, "length", d.length);
  b.outer_diameter = get_num(j, path, "outer_diameter", d.outer_diameter);
  b.wall_thickness = get_num(j, path, "wall_thickness", d.wall_thickness);
  b.n_circ = get_int(j, path, "n_circ", d.n_circ);
  b.n_axial = get_int(j, path, "n_axial", d.n_axial);
  b.n_radial = get_int(j, path, "n_radial", d.n_radial);
  b.end_spring_stiffness =
      get_num(j, path, "end_spring_stiffness", d.end_spring_stiffness);
  b.pressure_max = get_num(j, path, "pressure_max", d.pressure_max);
  if (j.contains("material"))
    b.material =
        parse_solid_material(j.at("material"), join(path, "material"), d.material);
  return b;
}

VesselConfig parse_vessel(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path,
             {"length", "outer_diameter", "wall_thickness", "n_circ", "n_radial",
              "n_axial", "end_spring_stiffness", "prestress_pressure", "layers"});
  VesselConfig d, v;
  v.length = get_num(j, path, "length", d.length);
  v.outer_diameter = get_num(j, path, "outer_diameter", d.outer_diameter);
  v.wall_thickness = get_num(j, path, "wall_thickness", d.wall_thickness);
  v.n_circ = get_int(j, path, "n_circ", d.n_circ);
  v.n_radial = get_int(j, path, "n_radial", d.n_radial);
  v.n_axial = get_int(j, path, "n_axial", d.n_axial);
  v.end_spring_stiffness =
      get_num(j, path, "end_spring_stiffness", d.end_spring_stiffness);
  v.prestress_pressure = get_num(j, path, "prestress_pressure", d.prestress_pressure);
  if (!j.contains("layers")) {
    v.layers = VesselConfig::default_layers();
  } else {
    const json& arr = j.at("layers");
    const std::string lpath = join(path, "layers");
    if (!arr.is_array() || arr.empty()) fail(lpath, "expected a non-empty array");
    v.layers.clear();
    const auto defaults = VesselConfig::default_layers();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ipath = lpath + "[" + std::to_string(i) + "]";
      const json& lj = arr.at(i);
      expect_object(lj, ipath);
      check_keys(lj, ipath, {"name", "thickness_fraction", "material"});
      VesselLayerConfig layer;
      const VesselLayerConfig& def =
          i < defaults.size() ? defaults[i] : defaults.back();
      layer.name = get_str(lj, ipath, "name", def.name);
      layer.thickness_fraction =
          get_num(lj, ipath, "thickness_fraction", def.thickness_fraction);
      layer.material =
          lj.contains("material")
              ? parse_solid_material(lj.at("material"), join(ipath, "material"),
                                     def.material)
              : def.material;
      v.layers.push_back(layer);
    }
  }
  return v;
}

ContactConfig parse_contact(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"beam_penalty", "surface_penalty"});
  ContactConfig d, c;
  c.beam_penalty = get_num(j, path, "beam_penalty", d.beam_penalty);
  c.surface_penalty = get_num(j, path, "surface_penalty", d.surface_penalty);
  return c;
}

CenterlineConfig parse_centerline(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"file", "zeta", "eps_zeta"});
  CenterlineConfig d, c;
  c.file = get_str(j, path, "file", d.file);
  c.zeta = get_num(j, path, "zeta", d.zeta);
  c.eps_zeta = get_num(j, path, "eps_zeta", d.eps_zeta);
  return c;
}

OutputConfig parse_output(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"metrics_path", "summary_path", "fields_dir", "field_interval"});
  OutputConfig d, o;
  o.metrics_path = get_str(j, path, "metrics_path", d.metrics_path);
  o.summary_path = get_str(j, path, "summary_path", d.summary_path);
  o.fields_dir = get_str(j, path, "fields_dir", d.fields_dir);
  o.field_interval = get_int(j, path, "field_interval", d.field_interval);
  return o;
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) fail(path, "must be positive");
}

void require_non_negative(double v, const std::string& path) {
  if (!(v >= 0.0)) fail(path, "must be non-negative");
}

void validate_solid_material(const SolidMaterialConfig& m, const std::string& path) {
  require_positive(m.young, join(path, "young"));
  if (!(m.poisson >= 0.0 && m.poisson < 0.5))
    fail(join(path, "poisson"), "must be in [0, 0.5)");
  require_non_negative(m.fiber_a.k1, join(path, "fiber_a.k1"));
  require_non_negative(m.fiber_b.k1, join(path, "fiber_b.k1"));
  require_positive(m.fiber_a.k2, join(path, "fiber_a.k2"));
  require_positive(m.fiber_b.k2, join(path, "fiber_b.k2"));
  require_non_negative(m.viscous_factor, join(path, "viscous_factor"));
}

void validate(const ScenarioConfig& c) {
  if (c.steps < 1) fail("steps", "must be at least 1");

  require_positive(c.contact.beam_penalty, "contact.beam_penalty");
  require_positive(c.contact.surface_penalty, "contact.surface_penalty");

  if (c.output.field_interval < 0) fail("output.field_interval", "must be >= 0");
  if (c.output.metrics_path.empty()) fail("output.metrics_path", "must not be empty");
  if (c.output.summary_path.empty()) fail("output.summary_path", "must not be empty");

  const StentConfig& s = c.stent;
  if (s.rings < 1) fail("stent.rings", "must be at least 1");
  if (s.crowns_per_ring < 2) fail("stent.crowns_per_ring", "must be at least 2");
  if (s.elements_per_strut < 1) fail("stent.elements_per_strut", "must be at least 1");
  if (s.connectors_per_gap < 0) fail("stent.connectors_per_gap", "must be >= 0");
  require_positive(s.crown_height, "stent.crown_height");
  require_positive(s.crown_distance, "stent.crown_distance");
  require_positive(s.ring_pitch, "stent.ring_pitch");
  require_positive(s.strut_radius, "stent.strut_radius");
  require_positive(s.diameter(), "stent.initial_diameter");
  require_positive(s.material.young, "stent.material.young");
  if (!(s.material.poisson >= 0.0 && s.material.poisson < 0.5))
    fail("stent.material.poisson", "must be in [0, 0.5)");
  require_positive(s.material.shear_correction, "stent.material.shear_correction");
  if (s.material.yield_moment > 0.0 &&
      !(s.material.elastoplastic_modulus > 0.0 &&
        s.material.elastoplastic_modulus < s.material.young))
    fail("stent.material.elastoplastic_modulus", "must lie in (0, young)");

  const BalloonConfig& b = c.balloon;
  require_positive(b.length, "balloon.length");
  require_positive(b.outer_diameter, "balloon.outer_diameter");
  require_positive(b.wall_thickness, "balloon.wall_thickness");
  if (!(b.wall_thickness < 0.5 * b.outer_diameter))
    fail("balloon.wall_thickness", "must be smaller than the outer radius");
  if (b.n_circ < 3) fail("balloon.n_circ", "must be at least 3");
  if (b.n_axial < 1) fail("balloon.n_axial", "must be at least 1");
  if (b.n_radial < 1) fail("balloon.n_radial", "must be at least 1");
  require_non_negative(b.end_spring_stiffness, "balloon.end_spring_stiffness");
  require_non_negative(b.pressure_max, "balloon.pressure_max");
  validate_solid_material(b.material, "balloon.material");

  if (c.vessel) {
    const VesselConfig& v = *c.vessel;
    require_positive(v.length, "vessel.length");
    require_positive(v.outer_diameter, "vessel.outer_diameter");
    require_positive(v.wall_thickness, "vessel.wall_thickness");
    if (!(v.wall_thickness < 0.5 * v.outer_diameter))
      fail("vessel.wall_thickness", "must be smaller than the outer radius");
    if (v.n_circ < 3) fail("vessel.n_circ", "must be at least 3");
    if (v.n_axial < 1) fail("vessel.n_axial", "must be at least 1");
    if (v.layers.empty()) fail("vessel.layers", "expected a non-empty array");
    if (v.n_radial < int(v.layers.size()))
      fail("vessel.n_radial", "needs at least one radial element per layer");
    require_non_negative(v.end_spring_stiffness, "vessel.end_spring_stiffness");
    require_non_negative(v.prestress_pressure, "vessel.prestress_pressure");
    double sum = 0.0;
    for (std::size_t i = 0; i < v.layers.size(); ++i) {
      const std::string path = "vessel.layers[" + std::to_string(i) + "]";
      if (v.layers[i].name.empty()) fail(join(path, "name"), "must not be empty");
      require_positive(v.layers[i].thickness_fraction,
                       join(path, "thickness_fraction"));
      validate_solid_material(v.layers[i].material, join(path, "material"));
      sum += v.layers[i].thickness_fraction;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      fail("vessel.layers", "thickness fractions must sum to 1");
  }

  if (c.centerline) {
    if (c.centerline->file.empty()) fail("centerline.file", "must not be empty");
    require_positive(c.centerline->zeta, "centerline.zeta");
    if (!(c.centerline->eps_zeta > 0.0 && c.centerline->eps_zeta < 1.0))
      fail("centerline.eps_zeta", "must be in (0, 1)");
  }
}

json fiber_to_json(const FiberFamilyConfig& f) {
  return json{{"k1", f.k1}, {"k2", f.k2}, {"angle_deg", f.angle_deg}};
}

json solid_material_to_json(const SolidMaterialConfig& m) {
  return json{{"young", m.young},
              {"poisson", m.poisson},
              {"fiber_a", fiber_to_json(m.fiber_a)},
              {"fiber_b", fiber_to_json(m.fiber_b)},
              {"fibers_tension_only", m.fibers_tension_only},
              {"viscous_factor", m.viscous_factor}};
}

}  // namespace

BeamSectionParams BeamMaterialConfig::section(double radius) const {
  BeamSectionParams p;
  p.young = young;
  p.poisson = poisson;
  p.radius = radius;
  p.yield_moment = yield_moment;
  p.hardening = yield_moment > 0.0
                    ? young * elastoplastic_modulus / (young - elastoplastic_modulus)
                    : 0.0;
  p.shear_correction = shear_correction;
  return p;
}

HyperelasticParams SolidMaterialConfig::params() const {
  HyperelasticParams p =
      HyperelasticParams::make(young, poisson, fiber_a.k1, fiber_a.k2, fiber_b.k1,
                               fiber_b.k2, fibers_tension_only);
  p.eta_visc = viscous_factor * p.G();
  return p;
}

SolidMaterialConfig SolidMaterialConfig::balloon_default() {
  SolidMaterialConfig m;
  m.young = 17.0;
  m.poisson = 0.0;
  m.fiber_a = {1000.0, 0.01, 90.0}; // longitudinal
  m.fiber_b = {1.5e-7, 0.35, 0.0};  // circumferential
  m.fibers_tension_only = false;
  m.viscous_factor = 1e-3;
  return m;
}

SolidMaterialConfig SolidMaterialConfig::media_default() {
  SolidMaterialConfig m;
  m.young = 0.1566;
  m.poisson = 0.45;
  m.fiber_a = {6.4e-4, 3.54, 0.0};
  m.fiber_b = {6.4e-4, 3.54, 0.0};
  return m;
}

SolidMaterialConfig SolidMaterialConfig::adventitia_default() {
  SolidMaterialConfig m;
  m.young = 0.01566;
  m.poisson = 0.45;
  m.fiber_a = {5.1e-3, 15.4, 40.0};
  m.fiber_b = {5.1e-3, 15.4, -40.0};
  return m;
}

double StentConfig::diameter() const {
  return initial_diameter > 0.0
             ? initial_diameter
             : crowns_per_ring * crown_distance / std::acos(-1.0);
}

StentDesign StentConfig::design() const {
  StentDesign d;
  d.initial_diameter = diameter();
  d.n_rings = rings;
  d.crowns_per_ring = crowns_per_ring;
  d.crown_height = crown_height;
  d.crown_distance = crown_distance;
  d.ring_pitch = ring_pitch;
  d.connectors_per_gap = connectors_per_gap;
  d.elements_per_strut = elements_per_strut;
  d.strut_radius = strut_radius;
  return d;
}

std::vector<VesselLayerConfig> VesselConfig::default_layers() {
  return {{"media", 2.0 / 3.0, SolidMaterialConfig::media_default()},
          {"adventitia", 1.0 / 3.0, SolidMaterialConfig::adventitia_default()}};
}

std::vector<double> VesselConfig::layer_split() const {
  std::vector<double> f;
  f.reserve(layers.size());
  for (const auto& l : layers) f.push_back(l.thickness_fraction);
  return f;
}

std::vector<HyperelasticParams> VesselConfig::layer_materials() const {
  std::vector<HyperelasticParams> m;
  m.reserve(layers.size());
  for (const auto& l : layers) m.push_back(l.material.params());
  return m;
}

std::vector<FiberAngles> VesselConfig::layer_angles() const {
  std::vector<FiberAngles> a;
  a.reserve(layers.size());
  for (const auto& l : layers) a.push_back(l.material.angles());
  return a;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }
  expect_object(j, "");
  check_keys(j, "",
             {"scenario", "steps", "contact", "output", "stent", "balloon", "vessel",
              "centerline"});

  ScenarioConfig c;
  const std::string kind = get_str(j, "", "scenario", "");
  if (kind == "free_expansion")
    c.kind = ScenarioKind::FreeExpansion;
  else if (kind == "vessel_deployment")
    c.kind = ScenarioKind::VesselDeployment;
  else if (kind.empty())
    fail("scenario", "required ('free_expansion' or 'vessel_deployment')");
  else
    fail("scenario", "unknown scenario '" + kind + "'");

  c.steps = get_int(j, "", "steps", c.steps);
  if (j.contains("contact")) c.contact = parse_contact(j.at("contact"), "contact");
  if (j.contains("output")) c.output = parse_output(j.at("output"), "output");

  const bool deployment = c.kind == ScenarioKind::VesselDeployment;
  if (deployment) {
    for (const char* block : {"stent", "balloon", "vessel"})
      if (!j.contains(block))
        fail("", std::string("missing '") + block +
                     "' block (required for the vessel_deployment scenario)");
  }
  if (j.contains("stent")) c.stent = parse_stent(j.at("stent"), "stent");
  if (j.contains("balloon")) c.balloon = parse_balloon(j.at("balloon"), "balloon");
  if (j.contains("vessel")) {
    if (!deployment)
      fail("vessel", "only used by the vessel_deployment scenario");
    c.vessel = parse_vessel(j.at("vessel"), "vessel");
  }
  if (j.contains("centerline")) {
    if (deployment)
      fail("centerline", "only used by free_expansion scenarios");
    c.centerline = parse_centerline(j.at("centerline"), "centerline");
  }

  validate(c);
  return c;
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["scenario"] =
      c.kind == ScenarioKind::FreeExpansion ? "free_expansion" : "vessel_deployment";
  j["steps"] = c.steps;
  j["contact"] = {{"beam_penalty", c.contact.beam_penalty},
                  {"surface_penalty", c.contact.surface_penalty}};
  j["output"] = {{"metrics_path", c.output.metrics_path},
                 {"summary_path", c.output.summary_path},
                 {"fields_dir", c.output.fields_dir},
                 {"field_interval", c.output.field_interval}};
  j["stent"] = {{"initial_diameter", c.stent.initial_diameter},
                {"rings", c.stent.rings},
                {"crowns_per_ring", c.stent.crowns_per_ring},
                {"crown_height", c.stent.crown_height},
                {"crown_distance", c.stent.crown_distance},
                {"ring_pitch", c.stent.ring_pitch},
                {"connectors_per_gap", c.stent.connectors_per_gap},
                {"elements_per_strut", c.stent.elements_per_strut},
                {"strut_radius", c.stent.strut_radius},
                {"material",
                 {{"young", c.stent.material.young},
                  {"poisson", c.stent.material.poisson},
                  {"yield_moment", c.stent.material.yield_moment},
                  {"elastoplastic_modulus", c.stent.material.elastoplastic_modulus},
                  {"shear_correction", c.stent.material.shear_correction}}}};
  j["balloon"] = {{"length", c.balloon.length},
                  {"outer_diameter", c.balloon.outer_diameter},
                  {"wall_thickness", c.balloon.wall_thickness},
                  {"n_circ", c.balloon.n_circ},
                  {"n_axial", c.balloon.n_axial},
                  {"n_radial", c.balloon.n_radial},
                  {"end_spring_stiffness", c.balloon.end_spring_stiffness},
                  {"pressure_max", c.balloon.pressure_max},
                  {"material", solid_material_to_json(c.balloon.material)}};
  if (c.vessel) {
    json layers = json::array();
    for (const auto& l : c.vessel->layers)
      layers.push_back({{"name", l.name},
                        {"thickness_fraction", l.thickness_fraction},
                        {"material", solid_material_to_json(l.material)}});
    j["vessel"] = {{"length", c.vessel->length},
                   {"outer_diameter", c.vessel->outer_diameter},
                   {"wall_thickness", c.vessel->wall_thickness},
                   {"n_circ", c.vessel->n_circ},
                   {"n_radial", c.vessel->n_radial},
                   {"n_axial", c.vessel->n_axial},
                   {"end_spring_stiffness", c.vessel->end_spring_stiffness},
                   {"prestress_pressure", c.vessel->prestress_pressure},
                   {"layers", layers}};
  }
  if (c.centerline)
    j["centerline"] = {{"file", c.centerline->file},
                       {"zeta", c.centerline->zeta},
                       {"eps_zeta", c.centerline->eps_zeta}};
  return j.dump(2) + "\n";
}

std::vector<Vec3> load_centerline_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("centerline: cannot open '" + path + "'");
  std::vector<Vec3> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x)) continue; // blank or comment-only line
    if (!(ss >> y >> z))
      throw std::runtime_error("centerline: line " + std::to_string(lineno) +
                               ": expected three numbers");
    std::string extra;
    if (ss >> extra)
      throw std::runtime_error("centerline: line " + std::to_string(lineno) +
                               ": trailing text '" + extra + "'");
    pts.emplace_back(x, y, z);
  }
  if (pts.size() < 2)
    throw std::runtime_error("centerline: need at least two points in '" + path + "'");
  return pts;
}

}  // namespace stentsim
