#include "stentsim/scenarios.hpp"

#include "stentsim/metrics.hpp"
#include "stentsim/vtk_writer.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <stdexcept>

namespace stentsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct StentPin {
  int node = -1;
  double theta = 0.0;
  double axial = 0.0; // z before warping = arclength station on the curve
};

// The four fixation nodes: bottom apices of the middle ring closest to the
// quarter angles. They keep radial displacement (and all rotations) free,
// which removes the six rigid modes without restraining the expansion.
std::vector<StentPin> pick_fixation_nodes(const BeamMesh& mesh, int n_rings) {
  const int mid_ring = n_rings / 2;
  std::vector<StentPin> pins;
  for (int k = 0; k < 4; ++k) {
    const double target = 0.5 * kPi * k;
    StentPin best;
    double best_err = 1e300;
    for (std::size_t i = 0; i < mesh.x.size(); ++i) {
      if (mesh.ring[i] != mid_ring || mesh.kind[i] != BeamNodeKind::ApexBottom)
        continue;
      const double err = std::abs(std::remainder(mesh.theta[i] - target, 2.0 * kPi));
      if (err < best_err) {
        best_err = err;
        best = {int(i), mesh.theta[i], mesh.x[i].z()};
      }
    }
    if (best.node < 0)
      throw std::runtime_error("scenario: middle stent ring has no bottom apices");
    for (const StentPin& p : pins)
      if (p.node == best.node)
        throw std::runtime_error(
            "scenario: need at least four crowns per ring to fix the stent");
    pins.push_back(best);
  }
  return pins;
}

SolidMesh make_tube(double length, double outer_diameter, double wall, int n_circ,
                    int n_radial, int n_axial, const std::vector<double>& split,
                    const std::vector<FiberAngles>& angles, double z_shift,
                    const SplineCurve* centerline) {
  TubeSpec spec;
  spec.length = length;
  spec.outer_diameter = outer_diameter;
  spec.wall_thickness = wall;
  spec.n_circ = n_circ;
  spec.n_radial = n_radial;
  spec.n_axial = n_axial;
  spec.layer_split = split;
  spec.centerline = centerline;
  SolidMesh mesh = generate_tube(spec);
  if (!centerline && z_shift != 0.0)
    for (Vec3& p : mesh.x) p.z() += z_shift;
  assign_fibers(mesh, angles);
  return mesh;
}

void append_csv_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

LoadProgram make_program(const ScenarioConfig& c, int total_steps) {
  LoadProgram prog;
  const double p_max = c.balloon.pressure_max;
  if (c.kind == ScenarioKind::FreeExpansion) {
    if (total_steps < 2)
      throw std::runtime_error("scenario: free expansion needs at least 2 steps");
    const int n_up = (total_steps + 1) / 2;
    prog.phases.push_back({n_up, {{0.0, p_max}}});
    prog.phases.push_back({total_steps - n_up, {{p_max, 0.0}}});
  } else {
    if (total_steps < 3)
      throw std::runtime_error("scenario: vessel deployment needs at least 3 steps");
    const double p_d = c.vessel->prestress_pressure;
    int n_pre = int(std::lround(0.1 * total_steps));
    n_pre = std::max(1, std::min(n_pre, total_steps - 2));
    const int rest = total_steps - n_pre;
    const int n_up = (rest + 1) / 2;
    // load order: balloon first, vessel lumen second (as registered)
    prog.phases.push_back({n_pre, {{0.0, 0.0}, {0.0, p_d}}});
    prog.phases.push_back({n_up, {{0.0, p_max}, {p_d, p_d}}});
    prog.phases.push_back({rest - n_up, {{p_max, 0.0}, {p_d, p_d}}});
  }
  return prog;
}

Scenario build_scenario(const ScenarioConfig& config, const std::string& base_dir) {
  Scenario s;
  s.config = config;

  const double stent_length = config.stent.length();
  const BalloonConfig& bc = config.balloon;

  // --- stent ---------------------------------------------------------------
  BeamMesh stent_mesh = generate_stent(config.stent.design());
  std::vector<StentPin> pins = pick_fixation_nodes(stent_mesh, config.stent.rings);

  if (config.centerline) {
    const std::filesystem::path file(config.centerline->file);
    const std::filesystem::path resolved =
        file.is_absolute() ? file : std::filesystem::path(base_dir) / file;
    const std::vector<Vec3> pts = load_centerline_points(resolved.string());
    const std::vector<double> weights(pts.size(), 1.0);
    s.centerline = SplineCurve::fit(pts, weights, config.centerline->zeta,
                                    config.centerline->eps_zeta);
    if (s.centerline->total_length() < bc.length)
      throw std::runtime_error(
          "scenario: centerline (length " +
          std::to_string(s.centerline->total_length()) +
          " mm) is shorter than the balloon (" + std::to_string(bc.length) + " mm)");
    const double s0 = 0.5 * (bc.length - stent_length);
    if (s0 < 0.0)
      throw std::runtime_error(
          "scenario: the balloon must be at least as long as the stent on a curved "
          "centerline");
    for (Vec3& p : stent_mesh.x) p.z() += s0;
    for (StentPin& p : pins) p.axial += s0;
    stent_mesh = warp_stent(stent_mesh, *s.centerline);
  }

  s.stent = s.model.add_beam_part(
      stent_mesh, config.stent.material.section(config.stent.strut_radius));

  // --- balloon ---------------------------------------------------------------
  const FiberAngles balloon_angles = bc.material.angles();
  SolidMesh balloon_mesh =
      make_tube(bc.length, bc.outer_diameter, bc.wall_thickness, bc.n_circ,
                bc.n_radial, bc.n_axial, {1.0}, {balloon_angles},
                0.5 * (stent_length - bc.length),
                s.centerline ? &*s.centerline : nullptr);
  s.balloon = s.model.add_solid_part(balloon_mesh, {bc.material.params()});
  s.balloon_load = s.model.add_pressure(s.balloon, "inner");
  s.model.add_springs(s.balloon, "end_start", bc.end_spring_stiffness);
  s.model.add_springs(s.balloon, "end_end", bc.end_spring_stiffness);

  // --- vessel ----------------------------------------------------------------
  if (config.vessel) {
    const VesselConfig& vc = *config.vessel;
    SolidMesh vessel_mesh =
        make_tube(vc.length, vc.outer_diameter, vc.wall_thickness, vc.n_circ,
                  vc.n_radial, vc.n_axial, vc.layer_split(), vc.layer_angles(),
                  0.5 * (stent_length - vc.length), nullptr);
    s.vessel = s.model.add_solid_part(vessel_mesh, vc.layer_materials());
    s.vessel_load = s.model.add_pressure(s.vessel, "inner");
    s.model.add_springs(s.vessel, "end_start", vc.end_spring_stiffness);
    s.model.add_springs(s.vessel, "end_end", vc.end_spring_stiffness);
    for (const auto& layer : vc.layers) s.stress_groups.push_back(layer.name);
  }
  s.stress_groups.push_back("balloon");

  // --- contact ---------------------------------------------------------------
  s.model.add_beam_surface_contact(s.stent, s.balloon, "outer",
                                   config.contact.beam_penalty);
  if (s.vessel >= 0) {
    s.model.add_beam_surface_contact(s.stent, s.vessel, "inner",
                                     config.contact.beam_penalty);
    s.model.add_surface_surface_contact(s.balloon, "outer", s.vessel, "inner",
                                        config.contact.surface_penalty);
  }

  // --- stent fixation ----------------------------------------------------------
  for (const StentPin& pin : pins) {
    Mat3 frame;
    if (s.centerline) {
      const Vec3 axis = s.centerline->tangent_at_arclength(pin.axial);
      const Vec3 on_curve = s.centerline->position_at_arclength(pin.axial);
      const BeamMesh& m = s.model.beam(s.stent).mesh;
      Vec3 radial = m.x[pin.node] - on_curve;
      radial -= radial.dot(axis) * axis;
      radial.normalize();
      frame.col(0) = radial;
      frame.col(1) = axis.cross(radial);
      frame.col(2) = axis;
    } else {
      const Vec3 radial(std::cos(pin.theta), std::sin(pin.theta), 0.0);
      frame.col(0) = radial;
      frame.col(1) = Vec3::UnitZ().cross(radial);
      frame.col(2) = Vec3::UnitZ();
    }
    s.model.constrain_beam_node(s.stent, pin.node, frame,
                                {false, true, true, false, false, false});
  }

  s.model.finalize();
  s.program = make_program(config, config.steps);
  return s;
}

MetricsRow measure(const Scenario& s) {
  MetricsRow row;
  const BeamPart& bp = s.model.beam(s.stent);
  const std::vector<Vec3> centroids = ring_centroids(bp.mesh, bp.x);
  row.curvature = mean_centerline_curvature(centroids);
  if (s.centerline) {
    // The end rings overhang their centroids by up to half a ring, so extend
    // the measurement polyline tangentially; otherwise the clamped projection
    // would inflate the end-node distances.
    std::vector<Vec3> line = centroids;
    if (line.size() >= 2) {
      const double pad = s.config.stent.crown_height;
      const Vec3 head = line[1] - line.front();
      const Vec3 tail = line.back() - line[line.size() - 2];
      if (head.norm() > 1e-12 && tail.norm() > 1e-12) {
        line.insert(line.begin(), line.front() - pad * head.normalized());
        line.push_back(line.back() + pad * tail.normalized());
      }
    }
    row.diameter = stent_diameter(bp.mesh, bp.x, line);
  } else {
    row.diameter = stent_diameter(bp.mesh, bp.x, Vec3::Zero(), Vec3::UnitZ());
  }

  const std::vector<double> rd = ring_diameters(bp.mesh, bp.x);
  row.diameter_end = rd.size() > 1 ? 0.5 * (rd.front() + rd.back()) : rd.front();
  if (rd.size() > 2) {
    double sum = 0.0;
    for (std::size_t r = 1; r + 1 < rd.size(); ++r) sum += rd[r];
    row.diameter_mid = sum / double(rd.size() - 2);
  } else {
    double sum = 0.0;
    for (double v : rd) sum += v;
    row.diameter_mid = sum / double(rd.size());
  }

  if (s.vessel >= 0) {
    const SolidPart& vp = s.model.solid(s.vessel);
    row.sigma1 = max_principal_stress_per_layer(vp.mesh, vp.x, vp.materials);
    row.sigma1_endothelial =
        max_principal_stress_on_surface(vp.mesh, vp.x, vp.materials, "inner");
  }
  const SolidPart& bl = s.model.solid(s.balloon);
  row.sigma1.push_back(
      max_principal_stress_per_layer(bl.mesh, bl.x, bl.materials).front());
  return row;
}

namespace {

void export_fields(const Scenario& s, int step, const std::string& output_dir) {
  char tag[16];
  std::snprintf(tag, sizeof(tag), "%05d", step);
  const std::filesystem::path base =
      std::filesystem::path(output_dir) / s.config.output.fields_dir;

  const BeamPart& bp = s.model.beam(s.stent);
  std::vector<double> plastic(bp.mesh.elements.size());
  for (std::size_t e = 0; e < plastic.size(); ++e)
    plastic[e] = bp.state[e].accumulated;
  write_text_file((base / ("stent_" + std::string(tag) + ".vtk")).string(),
                  beam_vtk_text(bp.mesh, bp.x, plastic));

  const auto write_solid = [&](int part, const std::string& name) {
    const SolidPart& sp = s.model.solid(part);
    write_text_file(
        (base / (name + "_" + std::string(tag) + ".vtk")).string(),
        solid_vtk_text(sp.mesh, sp.x, element_sigma1(sp.mesh, sp.x, sp.materials)));
  };
  write_solid(s.balloon, "balloon");
  if (s.vessel >= 0) write_solid(s.vessel, "vessel");
}

}  // namespace

ScenarioResult run_scenario(Scenario& s, const SolverSettings& settings,
                            const RunOptions& options) {
  SolverSettings effective = settings;
  effective.check_tangent = settings.check_tangent || options.check_tangent;
  const int total = options.steps_override > 0 ? options.steps_override : s.config.steps;
  const LoadProgram program = make_program(s.config, total);
  const int field_interval = options.field_interval >= 0
                                 ? options.field_interval
                                 : s.config.output.field_interval;
  const bool writing = !options.output_dir.empty();

  ScenarioResult res;
  res.initial = measure(s);
  if (writing) export_fields(s, 0, options.output_dir);

  const int inflate_phase = s.vessel >= 0 ? 1 : 0;
  const auto t0 = std::chrono::steady_clock::now();

  const StepCallback on_step = [&](const StepRecord& rec) {
    MetricsRow row = measure(s);
    row.step = int(res.rows.size()) + 1;
    row.phase = rec.phase;
    row.lambda = rec.lambda;
    row.pressure = rec.pressures[s.balloon_load];
    row.active_contacts = rec.active_contacts;
    row.newton_iterations = rec.newton_iterations;
    res.rows.push_back(row);

    if (options.progress) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "step %d/%d  phase %d  lambda %.3f  p %.4f MPa  d %.4f mm  "
                    "contacts %d  newton %d\n",
                    row.step, total, row.phase, row.lambda, row.pressure,
                    row.diameter, row.active_contacts, row.newton_iterations);
      (*options.progress) << line << std::flush;
    }

    const bool phase_end = rec.step == program.phases[rec.phase].steps;
    if (s.vessel >= 0 && rec.phase == 0 && phase_end) res.after_prestress = row;
    if (rec.phase == inflate_phase && phase_end) res.at_max_pressure = row;
    if (writing &&
        (phase_end || (field_interval > 0 && row.step % field_interval == 0)))
      export_fields(s, row.step, options.output_dir);
  };

  res.solver = run_program(s.model, program, effective, on_step);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  res.final_state = res.rows.back();
  const Recoil rc = recoil(res.at_max_pressure.diameter, res.final_state.diameter);
  res.recoil_absolute = rc.absolute;
  res.recoil_percent = rc.percent;
  if (!(rc.percent >= 0.0 && rc.percent <= 100.0)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg), "recoil percent outside [0, 100]: %.6g",
                  rc.percent);
    res.anomalies.emplace_back(msg);
    std::fprintf(stderr, "anomaly: %s\n", msg);
  }

  if (writing) {
    const std::filesystem::path dir(options.output_dir);
    write_text_file((dir / s.config.output.metrics_path).string(),
                    format_metrics_csv(res.rows, s.stress_groups));
    write_text_file((dir / s.config.output.summary_path).string(),
                    format_run_summary(s, res));
  }
  return res;
}

std::string format_metrics_csv(const std::vector<MetricsRow>& rows,
                               const std::vector<std::string>& groups) {
  std::string out = "# metrics schema 1\n";
  out += "step,phase,lambda,pressure_mpa,diameter_mm,diameter_end_mm,diameter_mid_mm,"
         "curvature_per_mm";
  for (const std::string& g : groups) out += ",sigma1_" + g + "_mpa";
  out += ",sigma1_endothelial_mpa,active_contacts,newton_iterations\n";
  for (const MetricsRow& r : rows) {
    if (r.sigma1.size() != groups.size())
      throw std::invalid_argument("metrics: row group count does not match header");
    out += std::to_string(r.step) + ',' + std::to_string(r.phase) + ',';
    append_csv_num(out, r.lambda);
    out += ',';
    append_csv_num(out, r.pressure);
    out += ',';
    append_csv_num(out, r.diameter);
    out += ',';
    append_csv_num(out, r.diameter_end);
    out += ',';
    append_csv_num(out, r.diameter_mid);
    out += ',';
    append_csv_num(out, r.curvature);
    for (double v : r.sigma1) {
      out += ',';
      append_csv_num(out, v);
    }
    out += ',';
    append_csv_num(out, r.sigma1_endothelial);
    out += ',' + std::to_string(r.active_contacts) + ',' +
           std::to_string(r.newton_iterations) + '\n';
  }
  return out;
}

std::string format_run_summary(const Scenario& s, const ScenarioResult& r) {
  nlohmann::json j;
  j["scenario"] = s.config.kind == ScenarioKind::FreeExpansion ? "free_expansion"
                                                               : "vessel_deployment";
  j["curved"] = s.centerline.has_value();
  j["steps"] = int(r.rows.size());
  j["diameter_initial_mm"] = r.initial.diameter;
  j["diameter_at_max_pressure_mm"] = r.at_max_pressure.diameter;
  j["diameter_final_mm"] = r.final_state.diameter;
  j["recoil_absolute_mm"] = r.recoil_absolute;
  j["recoil_percent"] = r.recoil_percent;
  j["curvature_initial_per_mm"] = r.initial.curvature;
  j["curvature_at_max_pressure_per_mm"] = r.at_max_pressure.curvature;
  j["curvature_final_per_mm"] = r.final_state.curvature;

  const auto stress_block = [&](const MetricsRow& row) {
    nlohmann::json b;
    for (std::size_t g = 0; g < s.stress_groups.size(); ++g)
      b[s.stress_groups[g]] = row.sigma1[g];
    return b;
  };
  if (r.after_prestress) j["sigma1_prestress_mpa"] = stress_block(*r.after_prestress);
  j["sigma1_at_max_pressure_mpa"] = stress_block(r.at_max_pressure);
  j["sigma1_final_mpa"] = stress_block(r.final_state);
  if (s.vessel >= 0) {
    double endo = 0.0;
    for (const MetricsRow& row : r.rows)
      endo = std::max(endo, row.sigma1_endothelial);
    j["sigma1_endothelial_max_mpa"] = endo;
    j["sigma1_endothelial_final_mpa"] = r.final_state.sigma1_endothelial;
  }
  j["active_contacts_final"] = r.final_state.active_contacts;
  j["total_newton"] = r.solver.total_newton;
  j["total_bisections"] = r.solver.total_bisections;
  j["max_tangent_rel_error"] = r.solver.max_tangent_rel_error;
  j["anomalies"] = r.anomalies;
  j["wall_seconds"] = r.wall_seconds;
  return j.dump(2) + "\n";
}

}  // namespace stentsim
