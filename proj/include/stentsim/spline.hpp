#pragma once

#include "stentsim/types.hpp"

#include <stdexcept>
#include <vector>

namespace stentsim {

// Univariate cubic smoothing spline (clamped B-spline basis).
//
// fit_smoothing_spline balances least-squares data fit against the curvature
// seminorm integral(f'')^2 so that the weighted residual
//     ssr = sum_i ( w_i * (y_i - f(t_i)) )^2
// lands inside |ssr - zeta| < eps_zeta * zeta. Knots are added (doubling,
// placed at data quantiles) until the band is reachable, then the penalty
// weight lambda is root-found; ssr(lambda) is monotone.
struct SmoothingFit {
  std::vector<double> knots; // clamped cubic knot vector, size n_coef + 4
  VecX coef;
  double residual = 0.0; // achieved weighted SSR
  double lambda = 0.0;
  bool degenerate = false; // data too clean to reach zeta; minimal LS kept

  double eval(double t, int deriv = 0) const;
};

SmoothingFit fit_smoothing_spline(const std::vector<double>& t,
                                  const std::vector<double>& y,
                                  const std::vector<double>& w,
                                  double zeta, double eps_zeta);

// Orthonormal moving frame along a curve; t = unit tangent.
struct Frame {
  Vec3 t, n1, n2;
};

// Space curve built from three per-coordinate smoothing fits over a shared
// chord-length parameter, with an arclength lookup table.
class SplineCurve {
public:
  static SplineCurve fit(const std::vector<Vec3>& points,
                         const std::vector<double>& weights,
                         double zeta, double eps_zeta);

  Vec3 position(double t) const;
  Vec3 derivative(double t, int order = 1) const;

  double param_begin() const { return t0_; }
  double param_end() const { return t1_; }
  double total_length() const { return length_; }
  double param_at_arclength(double s) const;
  Vec3 position_at_arclength(double s) const { return position(param_at_arclength(s)); }
  Vec3 tangent_at_arclength(double s) const;

  double residual(int coord) const { return fits_[coord].residual; }

  // Rotation-minimizing frames (double-reflection transport) at the given
  // arclength stations; seed_normal fixes the frame at s = stations.front().
  std::vector<Frame> rotation_minimizing_frames(const std::vector<double>& stations,
                                                const Vec3& seed_normal) const;

private:
  SmoothingFit fits_[3];
  double t0_ = 0.0, t1_ = 1.0, length_ = 0.0;
  std::vector<double> arc_t_, arc_s_; // cumulative arclength table
  void build_arc_table();
};

} // namespace stentsim
