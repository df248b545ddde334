#pragma once

#include "stentsim/model.hpp"

#include <functional>
#include <utility>
#include <vector>

// Quasi-static incremental solver. Loads follow a phase program (each phase
// ramps every pressure load linearly between its start and end amplitude over
// a fixed number of scheduled steps); each step is solved by a full Newton
// iteration on the consistent tangent, with automatic load bisection on
// failure and an optional freeze of the contact active set late in the
// iteration to suppress chattering.

namespace stentsim {

// Sparse LU direct solve; throws std::runtime_error when the factorization
// or solve fails.
VecX solve_linear(const Eigen::SparseMatrix<double>& a, const VecX& b);

struct SolverSettings {
  double tol_residual = 1e-6;       // infinity norm of the residual [N]
  double tol_increment = 1e-8;      // infinity norm of the Newton increment [mm]
  int max_iterations = 25;
  int freeze_active_set_after = 15; // iterations; later ones keep the set fixed
  int max_bisections = 6;           // halving depth before giving up
  bool check_tangent = false;       // finite-difference tangent verification
  double check_tolerance = 1e-4;
  int check_max_dofs = 2000;        // guard: FD check only for small systems
};

struct LoadProgram {
  struct Phase {
    int steps = 100;
    // one (start, end) amplitude per registered pressure load [MPa]
    std::vector<std::pair<double, double>> pressure;
  };
  std::vector<Phase> phases;
};

struct StepRecord {
  int phase = 0;
  int step = 0;                   // scheduled step within the phase, 1-based
  double lambda = 0.0;            // phase load factor in [0, 1]
  std::vector<double> pressures;  // amplitude per load at this record
  int newton_iterations = 0;      // iterations of the final (accepted) substep
  int bisections = 0;             // halvings spent inside this scheduled step
  int active_contacts = 0;
};

using StepCallback = std::function<void(const StepRecord&)>;

struct RunSummary {
  int total_steps = 0;
  int total_newton = 0;
  int total_bisections = 0;
  double max_tangent_rel_error = 0.0;  // populated when check_tangent is set
};

// Runs all phases; the callback fires after every scheduled step (converged
// and committed). Throws std::runtime_error when a step cannot be completed
// within the bisection budget.
RunSummary run_program(Model& model, const LoadProgram& program, const SolverSettings& s,
                       const StepCallback& on_step = {});

// Maximum entry error between the assembled tangent and central finite
// differences of the residual, relative to the largest tangent entry. The
// contact active set is held frozen around the base state so the comparison
// is made on a smooth branch of the residual.
double verify_tangent(Model& model, const std::vector<double>& amplitudes, double dtau,
                      double h = 1e-7);

}  // namespace stentsim
