#pragma once

#include "stentsim/config.hpp"
#include "stentsim/model.hpp"
#include "stentsim/solver.hpp"
#include "stentsim/spline.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Benchmark scenarios: model construction from a ScenarioConfig (free
// expansion of the stenting device, straight or curved, and deployment into
// a generic layered vessel), the load program, per-step metrics, and the
// run driver that writes metrics/summary/field files.

namespace stentsim {

// One row per committed load step.
struct MetricsRow {
  int step = 0;    // global committed step index, 1-based
  int phase = 0;   // program phase the step belongs to
  double lambda = 0.0;        // load factor within the phase, (0, 1]
  double pressure = 0.0;      // balloon pressure [MPa]
  double diameter = 0.0;      // stent diameter [mm]
  double diameter_end = 0.0;  // mean of the two end-ring diameters [mm]
  double diameter_mid = 0.0;  // mean of the interior-ring diameters [mm]
  double curvature = 0.0;     // mean centerline curvature [1/mm]
  std::vector<double> sigma1; // max principal Cauchy stress per group [MPa]
  double sigma1_endothelial = 0.0; // deployment only [MPa]
  int active_contacts = 0;
  int newton_iterations = 0;
};

struct Scenario {
  ScenarioConfig config;
  Model model;
  LoadProgram program;

  int stent = 0;    // beam part id
  int balloon = 0;  // solid part id
  int vessel = -1;  // solid part id, -1 when absent
  int balloon_load = -1; // pressure load ids
  int vessel_load = -1;

  // stress reporting groups: vessel layer names (if any), then "balloon"
  std::vector<std::string> stress_groups;
  std::optional<SplineCurve> centerline; // curved free expansion only
};

// Build the scene: meshes, materials, springs, contact pairs, the four-node
// stent fixation, and the phase program. Relative centerline file paths are
// resolved against base_dir. Throws std::runtime_error on inconsistent
// setups (e.g. a centerline shorter than the balloon).
Scenario build_scenario(const ScenarioConfig& config, const std::string& base_dir = ".");

// Phase schedule for a total committed-step budget: free expansion splits
// inflate/deflate evenly; deployment spends a tenth on prestress first.
LoadProgram make_program(const ScenarioConfig& config, int total_steps);

// Metrics of the model's current state (step/lambda/pressure/iteration
// fields are left for the caller).
MetricsRow measure(const Scenario& s);

struct RunOptions {
  std::string output_dir; // empty: write no files
  int steps_override = 0;     // > 0 replaces config.steps
  int field_interval = -1;    // >= 0 replaces output.field_interval
  bool check_tangent = false; // per-step finite-difference tangent audit
  std::ostream* progress = nullptr; // one line per committed step
};

struct ScenarioResult {
  std::vector<MetricsRow> rows; // one per committed step
  RunSummary solver;

  MetricsRow initial;  // reference state (step 0, not part of rows)
  MetricsRow at_max_pressure; // last step of the inflation phase
  MetricsRow final_state;     // last committed step
  std::optional<MetricsRow> after_prestress; // deployment only

  double recoil_absolute = 0.0; // mm
  double recoil_percent = 0.0;
  std::vector<std::string> anomalies; // logged invariant violations
  double wall_seconds = 0.0;
};

// Run the program, collect metrics, and (with an output directory) write
// the metrics CSV, the run summary JSON, and legacy-VTK field snapshots at
// phase ends plus every field_interval committed steps.
ScenarioResult run_scenario(Scenario& s, const SolverSettings& settings = {},
                            const RunOptions& options = {});

// Deterministic text renderings (also what run_scenario writes to disk).
std::string format_metrics_csv(const std::vector<MetricsRow>& rows,
                               const std::vector<std::string>& groups);
std::string format_run_summary(const Scenario& s, const ScenarioResult& r);

}  // namespace stentsim
