#include "stentsim/spline.hpp"

#include <algorithm>
#include <cmath>

namespace stentsim {

namespace {

// Clamped cubic knot vector with interior knots at data-site quantiles.
std::vector<double> make_knots(const std::vector<double>& t, int n_interior)
{
  const int m = static_cast<int>(t.size());
  std::vector<double> knots;
  for (int i = 0; i < 4; ++i) knots.push_back(t.front());
  for (int k = 1; k <= n_interior; ++k) {
    const double f = static_cast<double>(k) / (n_interior + 1);
    const double pos = f * (m - 1);
    const int i0 = static_cast<int>(pos);
    const double a = pos - i0;
    double v = (i0 + 1 < m) ? (1.0 - a) * t[i0] + a * t[i0 + 1] : t[i0];
    if (v <= knots.back()) v = std::nextafter(knots.back(), t.back());
    knots.push_back(v);
  }
  for (int i = 0; i < 4; ++i) knots.push_back(t.back());
  return knots;
}

int find_span(const std::vector<double>& u, int n_coef, double t)
{
  const int lo = 3, hi = n_coef; // valid spans: [3, n_coef - 1]
  if (t >= u[n_coef]) return n_coef - 1;
  if (t <= u[lo]) return lo;
  auto it = std::upper_bound(u.begin() + lo, u.begin() + hi, t);
  return static_cast<int>(it - u.begin()) - 1;
}

// Cubic basis values and derivatives up to order nd (<= 2) at t; ders[d][k]
// belongs to coefficient (span - 3 + k).
void basis_ders(const std::vector<double>& u, int span, double t, int nd,
                double ders[3][4])
{
  constexpr int p = 3;
  double ndu[p + 1][p + 1], left[p + 1], right[p + 1];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = t - u[span + 1 - j];
    right[j] = u[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
  if (nd == 0) return;

  for (int r = 0; r <= p; ++r) {
    double a[2][p + 1];
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double f = p;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= p; ++j) ders[k][j] *= f;
    f *= (p - k);
  }
}

struct LsSystem {
  MatX a;        // m x n basis matrix
  MatX penalty;  // n x n curvature Gram matrix
  VecX wsq;      // squared weights
  VecX y;
};

LsSystem assemble(const std::vector<double>& t, const std::vector<double>& y,
                  const std::vector<double>& w, const std::vector<double>& knots)
{
  const int m = static_cast<int>(t.size());
  const int n = static_cast<int>(knots.size()) - 4;
  LsSystem sys;
  sys.a = MatX::Zero(m, n);
  sys.penalty = MatX::Zero(n, n);
  sys.wsq = VecX(m);
  sys.y = VecX(m);
  double ders[3][4];
  for (int i = 0; i < m; ++i) {
    const int span = find_span(knots, n, t[i]);
    basis_ders(knots, span, t[i], 0, ders);
    for (int k = 0; k < 4; ++k) sys.a(i, span - 3 + k) = ders[0][k];
    sys.wsq[i] = w[i] * w[i];
    sys.y[i] = y[i];
  }
  // integral of f'' products; f'' is piecewise linear so 2-pt Gauss is exact
  const double gp[2] = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
  for (int j = 3; j < n; ++j) {
    const double ta = knots[j], tb = knots[j + 1];
    if (tb <= ta) continue;
    for (double g : gp) {
      const double tg = 0.5 * (ta + tb) + 0.5 * (tb - ta) * g;
      const double wg = 0.5 * (tb - ta);
      basis_ders(knots, j, tg, 2, ders);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          sys.penalty(j - 3 + r, j - 3 + c) += wg * ders[2][r] * ders[2][c];
    }
  }
  return sys;
}

VecX solve_for(const LsSystem& sys, double lambda)
{
  const MatX atw = sys.a.transpose() * sys.wsq.asDiagonal();
  const MatX mm = atw * sys.a + lambda * sys.penalty;
  return (mm).ldlt().solve(atw * sys.y);
}

double ssr_of(const LsSystem& sys, const VecX& coef)
{
  const VecX r = sys.y - sys.a * coef;
  return (sys.wsq.array() * r.array().square()).sum();
}

double line_ssr(const std::vector<double>& t, const std::vector<double>& y,
                const std::vector<double>& w)
{
  // weighted least-squares straight line, the smoothest reachable fit
  double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    const double ww = w[i] * w[i];
    sw += ww;
    st += ww * t[i];
    sy += ww * y[i];
    stt += ww * t[i] * t[i];
    sty += ww * t[i] * y[i];
  }
  const double det = sw * stt - st * st;
  double a0, a1;
  if (std::abs(det) < 1e-300) {
    a0 = sy / sw;
    a1 = 0.0;
  } else {
    a1 = (sw * sty - st * sy) / det;
    a0 = (sy - a1 * st) / sw;
  }
  double ssr = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - a0 - a1 * t[i];
    ssr += w[i] * w[i] * r * r;
  }
  return ssr;
}

} // namespace

double SmoothingFit::eval(double t, int deriv) const
{
  const int n = static_cast<int>(knots.size()) - 4;
  double tc = std::clamp(t, knots.front(), knots.back());
  const int span = find_span(knots, n, tc);
  double ders[3][4];
  basis_ders(knots, span, tc, deriv, ders);
  double v = 0;
  for (int k = 0; k < 4; ++k) v += ders[deriv][k] * coef[span - 3 + k];
  return v;
}

SmoothingFit fit_smoothing_spline(const std::vector<double>& t,
                                  const std::vector<double>& y,
                                  const std::vector<double>& w,
                                  double zeta, double eps_zeta)
{
  const int m = static_cast<int>(t.size());
  if (m < 4) throw std::invalid_argument("smoothing fit needs at least 4 points");
  if (y.size() != t.size() || w.size() != t.size())
    throw std::invalid_argument("smoothing fit: size mismatch");
  for (int i = 1; i < m; ++i)
    if (!(t[i] > t[i - 1]))
      throw std::invalid_argument("smoothing fit: parameter not strictly increasing");
  if (!(zeta > 0) || !(eps_zeta > 0))
    throw std::invalid_argument("smoothing fit: zeta and eps_zeta must be positive");

  const double lo = zeta * (1.0 - eps_zeta), hi = zeta * (1.0 + eps_zeta);

  SmoothingFit fit;
  // Data smoother than the target band: keep the minimal-knot LS fit.
  if (line_ssr(t, y, w) < lo) {
    fit.knots = make_knots(t, 0);
    const LsSystem sys = assemble(t, y, w, fit.knots);
    fit.coef = solve_for(sys, 0.0);
    fit.residual = ssr_of(sys, fit.coef);
    fit.degenerate = true;
    return fit;
  }

  const int q_max = std::max(0, m - 4);
  int q = 0;
  while (true) {
    fit.knots = make_knots(t, q);
    const LsSystem sys = assemble(t, y, w, fit.knots);
    VecX c0 = solve_for(sys, 0.0);
    const double ssr0 = ssr_of(sys, c0);
    if (ssr0 > lo && ssr0 < hi) { // landed in the band without smoothing
      fit.coef = c0;
      fit.residual = ssr0;
      return fit;
    }
    if (ssr0 <= lo) {
      // Band reachable: grow lambda until ssr >= zeta, then bisect in log space.
      double lam_hi = 1e-12 * std::max(1.0, sys.penalty.trace());
      lam_hi = std::max(lam_hi, 1e-300);
      double s_hi = ssr0;
      int guard = 0;
      while (s_hi < zeta && guard++ < 200) {
        lam_hi *= 10.0;
        s_hi = ssr_of(sys, solve_for(sys, lam_hi));
      }
      double lam_lo = lam_hi / 10.0;
      for (int it = 0; it < 200; ++it) {
        const double lam = std::sqrt(lam_lo * lam_hi);
        const VecX c = solve_for(sys, lam);
        const double s = ssr_of(sys, c);
        if (s > lo && s < hi) {
          fit.coef = c;
          fit.residual = s;
          fit.lambda = lam;
          return fit;
        }
        (s < zeta ? lam_lo : lam_hi) = lam;
      }
      throw std::runtime_error("smoothing fit: penalty search failed to converge");
    }
    if (q >= q_max)
      throw std::runtime_error("smoothing condition unreachable at maximal knot count");
    q = std::min(q == 0 ? 1 : 2 * q, q_max);
  }
}

// ---------------------------------------------------------------------------

SplineCurve SplineCurve::fit(const std::vector<Vec3>& points,
                             const std::vector<double>& weights,
                             double zeta, double eps_zeta)
{
  const int m = static_cast<int>(points.size());
  if (m < 4) throw std::invalid_argument("centerline fit needs at least 4 points");
  std::vector<double> w = weights;
  if (w.empty()) w.assign(m, 1.0);
  if (static_cast<int>(w.size()) != m)
    throw std::invalid_argument("centerline fit: weight count mismatch");

  std::vector<double> t(m, 0.0);
  for (int i = 1; i < m; ++i) {
    const double d = (points[i] - points[i - 1]).norm();
    if (d <= 0.0)
      throw std::invalid_argument("centerline fit: coincident points give a non-monotone parameter");
    t[i] = t[i - 1] + d;
  }

  SplineCurve c;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> yk(m);
    for (int i = 0; i < m; ++i) yk[i] = points[i][k];
    c.fits_[k] = fit_smoothing_spline(t, yk, w, zeta, eps_zeta);
  }
  c.t0_ = t.front();
  c.t1_ = t.back();
  c.build_arc_table();
  return c;
}

Vec3 SplineCurve::position(double t) const
{
  return Vec3(fits_[0].eval(t), fits_[1].eval(t), fits_[2].eval(t));
}

Vec3 SplineCurve::derivative(double t, int order) const
{
  return Vec3(fits_[0].eval(t, order), fits_[1].eval(t, order), fits_[2].eval(t, order));
}

void SplineCurve::build_arc_table()
{
  const int nseg = 2048;
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  arc_t_.resize(nseg + 1);
  arc_s_.resize(nseg + 1);
  arc_t_[0] = t0_;
  arc_s_[0] = 0.0;
  double s = 0.0;
  for (int i = 0; i < nseg; ++i) {
    const double ta = t0_ + (t1_ - t0_) * i / nseg;
    const double tb = t0_ + (t1_ - t0_) * (i + 1) / nseg;
    double ds = 0.0;
    for (int g = 0; g < 5; ++g) {
      const double tg = 0.5 * (ta + tb) + 0.5 * (tb - ta) * gx[g];
      ds += gw[g] * derivative(tg).norm();
    }
    s += 0.5 * (tb - ta) * ds;
    arc_t_[i + 1] = tb;
    arc_s_[i + 1] = s;
  }
  length_ = s;
}

double SplineCurve::param_at_arclength(double s) const
{
  s = std::clamp(s, 0.0, length_);
  auto it = std::upper_bound(arc_s_.begin(), arc_s_.end(), s);
  int i = std::clamp(static_cast<int>(it - arc_s_.begin()) - 1, 0,
                     static_cast<int>(arc_s_.size()) - 2);
  const double f = (arc_s_[i + 1] > arc_s_[i])
                       ? (s - arc_s_[i]) / (arc_s_[i + 1] - arc_s_[i])
                       : 0.0;
  double t = arc_t_[i] + f * (arc_t_[i + 1] - arc_t_[i]);
  // Newton polish on arclength(t) - s using 5-pt Gauss from the table node
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  for (int it2 = 0; it2 < 3; ++it2) {
    double seg = 0.0;
    for (int g = 0; g < 5; ++g) {
      const double tg = 0.5 * (arc_t_[i] + t) + 0.5 * (t - arc_t_[i]) * gx[g];
      seg += gw[g] * derivative(tg).norm();
    }
    const double f_val = arc_s_[i] + 0.5 * (t - arc_t_[i]) * seg - s;
    const double f_der = derivative(t).norm();
    if (f_der <= 0.0) break;
    t -= f_val / f_der;
    t = std::clamp(t, t0_, t1_);
  }
  return t;
}

Vec3 SplineCurve::tangent_at_arclength(double s) const
{
  return derivative(param_at_arclength(s)).normalized();
}

std::vector<Frame> SplineCurve::rotation_minimizing_frames(
    const std::vector<double>& stations, const Vec3& seed_normal) const
{
  if (stations.empty()) return {};
  for (size_t i = 1; i < stations.size(); ++i)
    if (stations[i] < stations[i - 1])
      throw std::invalid_argument("rmf stations must be ascending");

  // refine transport path so the double-reflection error stays negligible
  const double span = stations.back() - stations.front();
  const int substeps = std::max(400, static_cast<int>(stations.size()) * 4);
  std::vector<double> path;
  path.push_back(stations.front());
  size_t next = 0;
  for (int i = 1; i <= substeps; ++i) {
    const double s = stations.front() + span * i / substeps;
    while (next < stations.size() && stations[next] <= s + 1e-14) {
      if (stations[next] > path.back() + 1e-14) path.push_back(stations[next]);
      ++next;
    }
    if (s > path.back() + 1e-14) path.push_back(s);
  }

  Frame f;
  f.t = tangent_at_arclength(path.front());
  Vec3 n = seed_normal - seed_normal.dot(f.t) * f.t;
  if (n.norm() < 1e-10)
    throw std::invalid_argument("rmf seed normal parallel to tangent");
  f.n1 = n.normalized();
  f.n2 = f.t.cross(f.n1);

  std::vector<Frame> out;
  size_t want = 0;
  auto emit = [&](double s, const Frame& fr) {
    while (want < stations.size() && std::abs(stations[want] - s) < 1e-12) {
      out.push_back(fr);
      ++want;
    }
  };
  emit(path.front(), f);

  Vec3 x_prev = position_at_arclength(path.front());
  for (size_t i = 1; i < path.size(); ++i) {
    const Vec3 x = position_at_arclength(path[i]);
    const Vec3 tn = tangent_at_arclength(path[i]);
    const Vec3 v1 = x - x_prev;
    const double c1 = v1.squaredNorm();
    Vec3 n_l = f.n1, t_l = f.t;
    if (c1 > 1e-28) {
      n_l -= (2.0 / c1) * v1.dot(f.n1) * v1;
      t_l -= (2.0 / c1) * v1.dot(f.t) * v1;
    }
    const Vec3 v2 = tn - t_l;
    const double c2 = v2.squaredNorm();
    Vec3 n_next = n_l;
    if (c2 > 1e-28) n_next -= (2.0 / c2) * v2.dot(n_l) * v2;
    f.t = tn;
    f.n2 = f.t.cross(n_next).normalized();
    f.n1 = f.n2.cross(f.t);
    emit(path[i], f);
    x_prev = x;
  }
  // stations may repeat the final value
  while (want < stations.size() && std::abs(stations[want] - path.back()) < 1e-9) {
    out.push_back(f);
    ++want;
  }
  if (out.size() != stations.size())
    throw std::logic_error("rmf: station bookkeeping failed");
  return out;
}

} // namespace stentsim
