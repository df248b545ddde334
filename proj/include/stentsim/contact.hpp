#pragma once

#include "stentsim/types.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

// Penalty contact between a point (optionally carrying a radius, e.g. a beam
// centerline station) and a bilinear four-node facet. The same kernel serves
// beam-to-surface and surface-to-surface contact; in the latter case the
// "point" is a quadrature station of the slave facet with radius zero.
//
// Sign conventions: the facet normal is t_xi x t_eta (normalized); the signed
// gap is  g = normal . (p - foot) - radius. Contact is active for
// -deep_cap < g < 0; anything deeper than deep_cap is treated as a far-side
// artifact and skipped. The returned force is the gradient of the penalty
// energy 1/2 * penalty * weight * g^2, i.e. the contribution to the residual
// (internal-force side). The force applied on the point is its negative.

namespace stentsim {

using Vec15 = Eigen::Matrix<double, 15, 1>;
using Mat15 = Eigen::Matrix<double, 15, 15>;

struct FacetProjection {
  Vec2 xi = Vec2::Zero();        // parameter coordinates of the foot point
  Vec3 foot = Vec3::Zero();
  Vec3 normal = Vec3::Zero();    // unit normal at the foot point
  // Distance to the foot point, signed by the side of the surface the point
  // lies on. Interior feet: normal . (p - foot). Boundary-clamped feet: the
  // full Euclidean distance (the residual keeps a tangential component).
  double signed_distance = 0.0;
  bool interior = false;         // foot strictly inside the parameter box
};

// Closest-point projection onto the (possibly warped) bilinear facet: an
// unconstrained stationary-point search first, then closed-form minimization
// over the four straight boundary edges when the minimizer is clamped.
FacetProjection project_point_to_facet(const Vec3& p, const std::array<Vec3, 4>& xs);

struct ContactPointResult {
  bool active = false;
  double gap = 0.0;
  FacetProjection proj;
  Vec15 f = Vec15::Zero();  // residual gradient; dof order [point, facet nodes 0..3]
  Mat15 k = Mat15::Zero();  // consistent tangent (interior) / gap-gradient outer
                            // product (boundary-clamped projections)
};

// `force_active` keeps the penalty applied even at non-negative gaps (used
// while a solver holds the active set frozen); the deep cap still applies.
ContactPointResult point_facet_penalty(const Vec3& p, const std::array<Vec3, 4>& xs,
                                       double radius, double penalty, double weight,
                                       double deep_cap = 0.3,
                                       const FacetProjection* precomputed = nullptr,
                                       bool force_active = false);

struct BestFacet {
  int facet = -1;  // -1: nothing within the deep cap
  double gap = 0.0;
  FacetProjection proj;
};

// Among the candidate facets, pick the one with the smallest |gap| that is not
// beyond the deep cap; ties resolve to the smallest facet id.
BestFacet pick_best_facet(const Vec3& p, const std::vector<std::array<Vec3, 4>>& facets,
                          const std::vector<int>& candidates, double radius,
                          double deep_cap = 0.3);

// Uniform-grid broad phase over facet bounding boxes inflated by `margin`.
// Guarantee: every facet whose surface lies within `margin` of the query point
// appears among the candidates (a superset; narrow phase prunes the rest).
class FacetGrid {
 public:
  FacetGrid(const std::vector<std::array<Vec3, 4>>& facets, double margin);
  void query(const Vec3& p, std::vector<int>& out) const;
  double cell_size() const { return cell_; }

 private:
  double cell_ = 1.0;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace stentsim
