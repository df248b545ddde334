#include "stentsim/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stentsim {

namespace {

void facet_shape(const Vec2& xi, double n[4], double dxi[4], double deta[4]) {
  static const double sx[4] = {-1, 1, 1, -1};
  static const double se[4] = {-1, -1, 1, 1};
  for (int a = 0; a < 4; ++a) {
    n[a] = 0.25 * (1 + sx[a] * xi[0]) * (1 + se[a] * xi[1]);
    dxi[a] = 0.25 * sx[a] * (1 + se[a] * xi[1]);
    deta[a] = 0.25 * se[a] * (1 + sx[a] * xi[0]);
  }
}

// second mixed parameter derivative of the bilinear map (the only nonzero one)
Vec3 facet_dxieta(const std::array<Vec3, 4>& xs) {
  return 0.25 * (xs[0] - xs[1] + xs[2] - xs[3]);
}

Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  return s;
}

}  // namespace

FacetProjection project_point_to_facet(const Vec3& p, const std::array<Vec3, 4>& xs) {
  // Stage 1: unconstrained Gauss-Newton toward the stationary point of the
  // squared distance. The Gauss-Newton matrix t^T t is positive definite for
  // any non-degenerate facet, so the iteration is a descent method with a
  // fixed point exactly at a zero of the distance gradient.
  Vec2 xi = Vec2::Zero();
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    double n[4], dxi[4], deta[4];
    facet_shape(xi, n, dxi, deta);
    Vec3 x = Vec3::Zero(), txi = Vec3::Zero(), teta = Vec3::Zero();
    for (int a = 0; a < 4; ++a) {
      x += n[a] * xs[a];
      txi += dxi[a] * xs[a];
      teta += deta[a] * xs[a];
    }
    const Vec3 q = p - x;
    Mat2 m;
    m(0, 0) = txi.dot(txi);
    m(1, 1) = teta.dot(teta);
    m(0, 1) = m(1, 0) = txi.dot(teta);
    const double reg = 1e-14 * (1.0 + m.trace());
    m(0, 0) += reg;
    m(1, 1) += reg;
    const Vec2 step = m.ldlt().solve(Vec2(txi.dot(q), teta.dot(q)));
    if (!step.allFinite()) break;
    xi += step;
    xi[0] = std::clamp(xi[0], -4.0, 4.0);
    xi[1] = std::clamp(xi[1], -4.0, 4.0);
    if (step.norm() < 1e-14) {
      converged = true;
      break;
    }
  }
  constexpr double kEdge = 1e-9;
  const bool inside = std::abs(xi[0]) < 1.0 - kEdge && std::abs(xi[1]) < 1.0 - kEdge;

  if (!(converged && inside)) {
    // Stage 2: the constrained minimum lies on the boundary. Each boundary
    // edge of a bilinear patch is a straight segment, so the edge minimizers
    // are closed-form; take the best of the four.
    struct Edge {
      int c0, c1;   // corner indices
      int free;     // which parameter varies along the edge
      double fixed; // value of the other parameter
    };
    static const Edge edges[4] = {
        {0, 1, 0, -1.0}, {1, 2, 1, 1.0}, {3, 2, 0, 1.0}, {0, 3, 1, -1.0}};
    double best = std::numeric_limits<double>::infinity();
    Vec2 best_xi = Vec2::Zero();
    for (const Edge& e : edges) {
      const Vec3 a = xs[e.c0], b = xs[e.c1];
      const double len2 = (b - a).squaredNorm();
      const double t =
          len2 > 0.0 ? std::clamp((p - a).dot(b - a) / len2, 0.0, 1.0) : 0.0;
      const double d2 = (p - (a + t * (b - a))).squaredNorm();
      if (d2 < best) {
        best = d2;
        Vec2 cand;
        cand[e.free] = 2.0 * t - 1.0;
        cand[1 - e.free] = e.fixed;
        best_xi = cand;
      }
    }
    xi = best_xi;
  }

  FacetProjection r;
  r.xi = xi;
  double n[4], dxi[4], deta[4];
  facet_shape(xi, n, dxi, deta);
  Vec3 txi = Vec3::Zero(), teta = Vec3::Zero();
  r.foot = Vec3::Zero();
  for (int a = 0; a < 4; ++a) {
    r.foot += n[a] * xs[a];
    txi += dxi[a] * xs[a];
    teta += deta[a] * xs[a];
  }
  const Vec3 nrm = txi.cross(teta);
  const double len = nrm.norm();
  if (len < 1e-14) throw std::invalid_argument("contact: degenerate facet");
  r.normal = nrm / len;
  constexpr double kEdgeTol = 1e-9;
  r.interior = std::abs(xi[0]) < 1.0 - kEdgeTol && std::abs(xi[1]) < 1.0 - kEdgeTol;
  // Interior: residual is parallel to the normal, so the normal projection is
  // the distance. Clamped: the residual keeps a tangential part; use the true
  // distance to the foot, signed by which side of the surface the point is on
  // (otherwise a point far beside the facet but level with its edge would
  // masquerade as a near-surface point).
  const double dn = r.normal.dot(p - r.foot);
  r.signed_distance = r.interior ? dn : (dn >= 0.0 ? 1.0 : -1.0) * (p - r.foot).norm();
  return r;
}

ContactPointResult point_facet_penalty(const Vec3& p, const std::array<Vec3, 4>& xs,
                                       double radius, double penalty, double weight,
                                       double deep_cap, const FacetProjection* precomputed,
                                       bool force_active) {
  if (!(penalty > 0.0) || !(weight > 0.0))
    throw std::invalid_argument("contact: penalty and weight must be positive");

  ContactPointResult r;
  r.proj = precomputed ? *precomputed : project_point_to_facet(p, xs);
  r.gap = r.proj.signed_distance - radius;
  if ((r.gap >= 0.0 && !force_active) || r.gap <= -deep_cap) return r;
  r.active = true;

  const Vec2& xi = r.proj.xi;
  const Vec3& nh = r.proj.normal;
  double n[4], dxi[4], deta[4];
  facet_shape(xi, n, dxi, deta);
  Vec3 txi = Vec3::Zero(), teta = Vec3::Zero();
  for (int a = 0; a < 4; ++a) {
    txi += dxi[a] * xs[a];
    teta += deta[a] * xs[a];
  }

  // gradient of the gap: interior projections penalize the normal distance
  // (residual parallel to the normal); clamped projections penalize the true
  // distance to the frozen foot, so the gradient follows the offset direction.
  Vec3 dir = nh;
  if (!r.proj.interior) {
    const Vec3 q = p - r.proj.foot;
    const double qn = q.norm();
    if (qn > 1e-12) dir = (r.proj.signed_distance >= 0.0 ? 1.0 : -1.0) * q / qn;
  }
  Vec15 dg = Vec15::Zero();
  dg.segment<3>(0) = dir;
  for (int a = 0; a < 4; ++a) dg.segment<3>(3 + 3 * a) = -n[a] * dir;

  const double ew = penalty * weight;
  r.f = ew * r.gap * dg;
  r.k = ew * dg * dg.transpose();

  if (!r.proj.interior) {
    // Boundary-clamped projection: point-to-segment (edge) or point-to-point
    // (corner) contact. The force above is already the exact gradient (the
    // clamped parameter minimizes the distance along the straight edge), and
    // the curvature of the distance function follows the classic
    // point-segment linearization: a transverse projector plus a Schur
    // correction for the sliding of the minimizer along the edge.
    const Vec3 q = p - r.proj.foot;
    const double qn = q.norm();
    if (qn < 1e-10) return r;  // point on the edge itself: keep the rank-one part
    const double side = r.proj.signed_distance >= 0.0 ? 1.0 : -1.0;
    const Vec3 qh = q / qn;

    // dq = dp - sum_a N_a dx_a with the clamped parameters frozen
    using Mat315 = Eigen::Matrix<double, 3, 15>;
    Mat315 jq = Mat315::Zero();
    jq.block<3, 3>(0, 0) = Mat3::Identity();
    for (int a = 0; a < 4; ++a) jq.block<3, 3>(0, 3 + 3 * a) = -n[a] * Mat3::Identity();

    const Mat3 proj_t = (Mat3::Identity() - qh * qh.transpose()) / qn;
    Mat15 hess = jq.transpose() * proj_t * jq;

    constexpr double kEdgeTol = 1e-9;
    const bool c0 = std::abs(xi[0]) >= 1.0 - kEdgeTol;
    const bool c1 = std::abs(xi[1]) >= 1.0 - kEdgeTol;
    if (!(c0 && c1)) {
      // edge-interior minimizer: eliminate the free edge parameter
      const Vec3 evec = 2.0 * (c0 ? teta : txi);  // straight-edge direction
      const double* dsh = c0 ? deta : dxi;
      Vec15 u = -(jq.transpose() * evec) / qn;
      for (int a = 0; a < 4; ++a) u.segment<3>(3 + 3 * a) -= 2.0 * dsh[a] * q / qn;
      const double f_tt = evec.squaredNorm() / qn;
      hess -= u * u.transpose() / f_tt;
    }
    r.k += ew * r.gap * side * hess;
    return r;
  }

  // interior projection: add the consistent geometric terms
  const double gt = r.proj.signed_distance;
  const Vec3 w = facet_dxieta(xs);
  Mat2 a_mat;
  a_mat(0, 0) = txi.dot(txi);
  a_mat(1, 1) = teta.dot(teta);
  a_mat(0, 1) = a_mat(1, 0) = txi.dot(teta) - gt * nh.dot(w);
  const Mat2 a_inv = a_mat.inverse();

  using Mat215 = Eigen::Matrix<double, 2, 15>;
  using Mat315 = Eigen::Matrix<double, 3, 15>;
  Mat215 b = Mat215::Zero();
  const Vec3 tvec[2] = {txi, teta};
  const double* dsh[2] = {dxi, deta};
  for (int al = 0; al < 2; ++al) {
    b.block<1, 3>(al, 0) = tvec[al].transpose();
    for (int a = 0; a < 4; ++a)
      b.block<1, 3>(al, 3 + 3 * a) =
          (-n[a] * tvec[al] + gt * dsh[al][a] * nh).transpose();
  }
  const Mat215 d_xi = a_inv * b;

  Mat315 d_txi = w * d_xi.row(1);
  Mat315 d_teta = w * d_xi.row(0);
  for (int a = 0; a < 4; ++a) {
    d_txi.block<3, 3>(0, 3 + 3 * a) += dxi[a] * Mat3::Identity();
    d_teta.block<3, 3>(0, 3 + 3 * a) += deta[a] * Mat3::Identity();
  }

  const double nlen = txi.cross(teta).norm();
  const Mat315 d_nh =
      (Mat3::Identity() - nh * nh.transpose()) * (-skew(teta) * d_txi + skew(txi) * d_teta) /
      nlen;

  // d(grad g): point rows get d_nh, facet rows -N_a d_nh - nh (dN_a . d_xi)
  Mat15 ddg = Mat15::Zero();
  ddg.block<3, 15>(0, 0) = d_nh;
  for (int a = 0; a < 4; ++a)
    ddg.block<3, 15>(3 + 3 * a, 0) =
        -n[a] * d_nh - nh * (dxi[a] * d_xi.row(0) + deta[a] * d_xi.row(1));

  r.k += ew * r.gap * ddg;
  return r;
}

BestFacet pick_best_facet(const Vec3& p, const std::vector<std::array<Vec3, 4>>& facets,
                          const std::vector<int>& candidates, double radius, double deep_cap) {
  // Order candidates by a cheap AABB distance lower bound and stop once the
  // bound cannot beat the best |gap| seen: the exact projection (iterative)
  // then runs for only a handful of facets per station. The bound is sound
  // for both signs of the signed distance, since |gap| >= |dist| - radius
  // on the near side and |gap| = dist + radius on the penetrating side.
  struct Ranked {
    double lower;
    int fid;
  };
  std::vector<Ranked> order;
  order.reserve(candidates.size());
  for (const int fid : candidates) {
    const std::array<Vec3, 4>& f = facets[fid];
    Vec3 lo = f[0], hi = f[0];
    for (int a = 1; a < 4; ++a) {
      lo = lo.cwiseMin(f[a]);
      hi = hi.cwiseMax(f[a]);
    }
    const Vec3 d = (lo - p).cwiseMax(Vec3::Zero()).cwiseMax(p - hi);
    order.push_back({d.norm(), fid});
  }
  std::sort(order.begin(), order.end(), [](const Ranked& a, const Ranked& b) {
    return a.lower != b.lower ? a.lower < b.lower : a.fid < b.fid;
  });

  BestFacet best;
  double best_abs = std::numeric_limits<double>::infinity();
  for (const Ranked& c : order) {
    if (c.lower - radius > best_abs + 1e-12) break;
    const FacetProjection proj = project_point_to_facet(p, facets[c.fid]);
    const double gap = proj.signed_distance - radius;
    if (gap <= -deep_cap) continue;
    const double a = std::abs(gap);
    if (a < best_abs - 1e-14 || (a < best_abs + 1e-14 && c.fid < best.facet)) {
      best_abs = a;
      best.facet = c.fid;
      best.gap = gap;
      best.proj = proj;
    }
  }
  return best;
}

FacetGrid::FacetGrid(const std::vector<std::array<Vec3, 4>>& facets, double margin) {
  if (margin <= 0.0) throw std::invalid_argument("contact grid: margin must be positive");
  double max_extent = 1e-3;
  for (const auto& f : facets) {
    Vec3 lo = f[0], hi = f[0];
    for (int a = 1; a < 4; ++a) {
      lo = lo.cwiseMin(f[a]);
      hi = hi.cwiseMax(f[a]);
    }
    max_extent = std::max(max_extent, (hi - lo).maxCoeff());
  }
  cell_ = max_extent + 2.0 * margin;

  const auto key = [this](int ix, int iy, int iz) {
    const auto h = [](int v) { return std::uint64_t(std::uint32_t(v + 0x40000000)); };
    return (h(ix) << 42) ^ (h(iy) << 21) ^ h(iz);
  };
  for (std::size_t i = 0; i < facets.size(); ++i) {
    Vec3 lo = facets[i][0], hi = facets[i][0];
    for (int a = 1; a < 4; ++a) {
      lo = lo.cwiseMin(facets[i][a]);
      hi = hi.cwiseMax(facets[i][a]);
    }
    lo.array() -= margin;
    hi.array() += margin;
    const int lx = int(std::floor(lo.x() / cell_)), hx = int(std::floor(hi.x() / cell_));
    const int ly = int(std::floor(lo.y() / cell_)), hy = int(std::floor(hi.y() / cell_));
    const int lz = int(std::floor(lo.z() / cell_)), hz = int(std::floor(hi.z() / cell_));
    for (int ix = lx; ix <= hx; ++ix)
      for (int iy = ly; iy <= hy; ++iy)
        for (int iz = lz; iz <= hz; ++iz)
          cells_[key(ix, iy, iz)].push_back(int(i));
  }
}

void FacetGrid::query(const Vec3& p, std::vector<int>& out) const {
  out.clear();
  const auto h = [](int v) { return std::uint64_t(std::uint32_t(v + 0x40000000)); };
  const std::uint64_t k = (h(int(std::floor(p.x() / cell_))) << 42) ^
                          (h(int(std::floor(p.y() / cell_))) << 21) ^
                          (h(int(std::floor(p.z() / cell_))));
  const auto it = cells_.find(k);
  if (it != cells_.end()) out = it->second;
}

}  // namespace stentsim
