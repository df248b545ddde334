#include "stentsim/solver.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace stentsim {

namespace {

// Set STENTSIM_NEWTON_LOG=1 to trace every iteration on stderr.
bool newton_log() {
  static const bool on = std::getenv("STENTSIM_NEWTON_LOG") != nullptr;
  return on;
}

}  // namespace

VecX solve_linear(const Eigen::SparseMatrix<double>& a, const VecX& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("linear solve: dimension mismatch");
  if (a.rows() == 0) return VecX();
  Eigen::SparseMatrix<double> m = a;
  m.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("linear solve: factorization failed");
  VecX x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw std::runtime_error("linear solve: back-solve failed");
  return x;
}

namespace {

struct Attempt {
  bool converged = false;
  int iterations = 0;
  int active_contacts = 0;
};

double inf_norm(const VecX& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// One Newton solve toward the given amplitudes. Leaves the model at the
// converged state on success; the caller reverts on failure.
Attempt newton_attempt(Model& model, const std::vector<double>& amps, double dtau,
                       const SolverSettings& s) {
  Attempt at;
  double prev_increment = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= s.max_iterations + 1; ++it) {
    const bool freeze = it > s.freeze_active_set_after;
    Model::Assembly a;
    try {
      a = model.assemble(amps, dtau, freeze);
    } catch (const ElementDiverged& e) {
      if (newton_log()) std::fprintf(stderr, "  newton it %d: element %d diverged\n", it, e.element_id);
      return at;
    }
    if (!a.residual.allFinite()) {
      if (newton_log()) std::fprintf(stderr, "  newton it %d: residual not finite\n", it);
      return at;
    }
    at.active_contacts = a.active_contacts;

    const double res = inf_norm(a.residual);
    if (newton_log())
      std::fprintf(stderr, "  newton it %d: res %.3e inc %.3e contacts %d%s\n", it, res,
                   prev_increment, a.active_contacts, freeze ? " [frozen]" : "");
    if (res < s.tol_residual &&
        (prev_increment < s.tol_increment || res < 1e-3 * s.tol_residual)) {
      at.converged = true;
      return at;
    }
    if (it > s.max_iterations) return at;  // exhausted without convergence

    VecX du;
    try {
      du = solve_linear(a.tangent, VecX(-a.residual));
    } catch (const std::runtime_error&) {
      return at;
    }
    if (!du.allFinite()) return at;
    model.apply_increment(du);
    prev_increment = inf_norm(du);
    ++at.iterations;
  }
  return at;
}

std::vector<double> amplitudes_at(const LoadProgram::Phase& ph, double lambda) {
  std::vector<double> amps(ph.pressure.size());
  for (std::size_t i = 0; i < ph.pressure.size(); ++i)
    amps[i] = ph.pressure[i].first + (ph.pressure[i].second - ph.pressure[i].first) * lambda;
  return amps;
}

}  // namespace

RunSummary run_program(Model& model, const LoadProgram& program, const SolverSettings& s,
                       const StepCallback& on_step) {
  RunSummary sum;
  for (std::size_t pi = 0; pi < program.phases.size(); ++pi) {
    const LoadProgram::Phase& ph = program.phases[pi];
    if (int(ph.pressure.size()) != model.n_pressure_loads())
      throw std::invalid_argument("load program: one amplitude pair per pressure load");
    if (ph.steps < 1) throw std::invalid_argument("load program: steps must be >= 1");

    for (int k = 1; k <= ph.steps; ++k) {
      const double lam_start = double(k - 1) / ph.steps;
      const double lam_end = double(k) / ph.steps;
      double lam = lam_start;
      double dl = lam_end - lam_start;
      int depth = 0, step_bisections = 0, final_iters = 0, final_active = 0;

      while (lam < lam_end - 1e-15) {
        dl = std::min(dl, lam_end - lam);
        const std::vector<double> amps = amplitudes_at(ph, lam + dl);
        const Attempt at = newton_attempt(model, amps, dl, s);
        sum.total_newton += at.iterations;
        if (at.converged) {
          model.commit();
          lam += dl;
          final_iters = at.iterations;
          final_active = at.active_contacts;
          if (depth > 0) {
            --depth;
            dl *= 2.0;
          }
        } else {
          model.revert();
          ++depth;
          ++step_bisections;
          ++sum.total_bisections;
          if (depth > s.max_bisections)
            throw std::runtime_error("load step failed: phase " + std::to_string(pi) +
                                     ", step " + std::to_string(k) + " did not converge after " +
                                     std::to_string(s.max_bisections) + " bisections");
          dl *= 0.5;
        }
      }

      if (s.check_tangent && model.n_free() <= s.check_max_dofs) {
        const double err =
            verify_tangent(model, amplitudes_at(ph, lam_end), std::max(dl, 1e-12));
        sum.max_tangent_rel_error = std::max(sum.max_tangent_rel_error, err);
        if (err > s.check_tolerance)
          throw std::runtime_error("tangent verification failed: relative error " +
                                   std::to_string(err));
      }

      ++sum.total_steps;
      if (on_step) {
        StepRecord rec;
        rec.phase = int(pi);
        rec.step = k;
        rec.lambda = lam_end;
        rec.pressures = amplitudes_at(ph, lam_end);
        rec.newton_iterations = final_iters;
        rec.bisections = step_bisections;
        rec.active_contacts = final_active;
        on_step(rec);
      }
    }
  }
  return sum;
}

double verify_tangent(Model& model, const std::vector<double>& amplitudes, double dtau,
                      double h) {
  // fresh assembly pins the contact active set at the base state
  const Model::Assembly base = model.assemble(amplitudes, dtau, false);
  const int n = model.n_free();
  if (n == 0) return 0.0;
  const MatX k_dense = MatX(base.tangent);
  const double scale = std::max(k_dense.cwiseAbs().maxCoeff(), 1e-12);

  double worst = 0.0;
  VecX du = VecX::Zero(n);
  for (int d = 0; d < n; ++d) {
    du[d] = h;
    model.apply_increment(du);
    const VecX rp = model.assemble(amplitudes, dtau, true).residual;
    du[d] = -2.0 * h;
    model.apply_increment(du);
    const VecX rm = model.assemble(amplitudes, dtau, true).residual;
    du[d] = h;
    model.apply_increment(du);
    du[d] = 0.0;

    const VecX fd = (rp - rm) / (2.0 * h);
    worst = std::max(worst, (fd - k_dense.col(d)).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace stentsim
