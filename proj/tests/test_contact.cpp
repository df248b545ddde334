#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stentsim/contact.hpp"
#include "stentsim/generators.hpp"

#include <cmath>
#include <random>

using namespace stentsim;

namespace {

std::array<Vec3, 4> flat_unit_facet() {
  return {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
}

std::array<Vec3, 4> warped_facet() {
  return {Vec3(0, 0, 0), Vec3(1.1, 0, 0.05), Vec3(1, 1, -0.04), Vec3(0, 1.05, 0.03)};
}

std::array<Vec3, 4> random_facet(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-0.15, 0.15);
  auto xs = flat_unit_facet();
  for (auto& x : xs) x += Vec3(d(rng), d(rng), d(rng));
  return xs;
}

Vec3 facet_point(const std::array<Vec3, 4>& xs, double xi, double eta) {
  const double sx[4] = {-1, 1, 1, -1}, se[4] = {-1, -1, 1, 1};
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < 4; ++a)
    x += 0.25 * (1 + sx[a] * xi) * (1 + se[a] * eta) * xs[a];
  return x;
}

// split the 15 dofs into point position and facet corners
struct State {
  Vec3 p;
  std::array<Vec3, 4> xs;
};

State apply(const State& s, const Vec15& du) {
  State o = s;
  o.p += du.segment<3>(0);
  for (int a = 0; a < 4; ++a) o.xs[a] += du.segment<3>(3 + 3 * a);
  return o;
}

double penalty_energy(const State& s, double radius, double eps, double w) {
  const FacetProjection proj = project_point_to_facet(s.p, s.xs);
  const double g = proj.signed_distance - radius;
  return g < 0.0 ? 0.5 * eps * w * g * g : 0.0;
}

}  // namespace

TEST_CASE("projection: flat facet analytic foot point, normal, and distance") {
  const auto xs = flat_unit_facet();
  const FacetProjection pr = project_point_to_facet(Vec3(0.3, 0.4, 0.25), xs);
  CHECK((pr.foot - Vec3(0.3, 0.4, 0)).norm() < 1e-12);
  CHECK((pr.normal - Vec3(0, 0, 1)).norm() < 1e-12);
  CHECK(std::abs(pr.signed_distance - 0.25) < 1e-12);
  CHECK(std::abs(pr.xi[0] - (-0.4)) < 1e-10);
  CHECK(std::abs(pr.xi[1] - (-0.2)) < 1e-10);
  CHECK(pr.interior);

  // below the facet: negative signed distance
  const FacetProjection pb = project_point_to_facet(Vec3(0.3, 0.4, -0.1), xs);
  CHECK(std::abs(pb.signed_distance + 0.1) < 1e-12);

  // beyond an edge: clamped, foot on the boundary
  const FacetProjection pc = project_point_to_facet(Vec3(1.5, 0.5, 0.2), xs);
  CHECK(!pc.interior);
  CHECK(std::abs(pc.xi[0] - 1.0) < 1e-12);
  CHECK((pc.foot - Vec3(1.0, 0.5, 0)).norm() < 1e-10);
}

TEST_CASE("projection beats a dense parameter sweep on warped facets") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dp(-0.4, 1.4), dz(-0.5, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto xs = random_facet(rng);
    const Vec3 p(dp(rng), dp(rng), dz(rng));
    const FacetProjection pr = project_point_to_facet(p, xs);
    const double dist = (p - pr.foot).norm();

    double best = 1e30;
    const int n = 160;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double xi = -1.0 + 2.0 * i / n, eta = -1.0 + 2.0 * j / n;
        best = std::min(best, (p - facet_point(xs, xi, eta)).norm());
      }
    CHECK(dist <= best + 1e-6);

    if (pr.interior) {
      // stationarity: residual orthogonal to both tangents
      const double h = 1e-7;
      const Vec3 txi =
          (facet_point(xs, pr.xi[0] + h, pr.xi[1]) - facet_point(xs, pr.xi[0] - h, pr.xi[1])) /
          (2 * h);
      const Vec3 teta =
          (facet_point(xs, pr.xi[0], pr.xi[1] + h) - facet_point(xs, pr.xi[0], pr.xi[1] - h)) /
          (2 * h);
      CHECK(std::abs(txi.dot(p - pr.foot)) < 1e-8);
      CHECK(std::abs(teta.dot(p - pr.foot)) < 1e-8);
    }
  }
}

TEST_CASE("penalty activity window and exact flat-facet force") {
  const auto xs = flat_unit_facet();
  const double radius = 0.1, eps = 10.0, w = 0.02;

  // separated: + gap, inactive
  CHECK(!point_facet_penalty(Vec3(0.5, 0.5, 0.3), xs, radius, eps, w).active);
  // touching from outside the radius: still inactive at g = 0+
  CHECK(!point_facet_penalty(Vec3(0.5, 0.5, 0.100001), xs, radius, eps, w).active);
  // beyond the deep cap: far side, skipped
  CHECK(!point_facet_penalty(Vec3(0.5, 0.5, -0.45), xs, radius, eps, w).active);

  // penetrating: g = 0.04 - 0.1 = -0.06
  const auto r = point_facet_penalty(Vec3(0.5, 0.5, 0.04), xs, radius, eps, w);
  CHECK(r.active);
  CHECK(std::abs(r.gap + 0.06) < 1e-13);
  // residual gradient on the point: eps*w*g*n (downhill of the energy)
  CHECK((r.f.segment<3>(0) - Vec3(0, 0, eps * w * r.gap)).norm() < 1e-14);
  // action-reaction: facet rows sum to the negative of the point row
  Vec3 sum = Vec3::Zero();
  for (int a = 0; a < 4; ++a) sum += r.f.segment<3>(3 + 3 * a);
  CHECK((sum + r.f.segment<3>(0)).norm() < 1e-14);
}

TEST_CASE("penalty force is the gradient of the penalty energy") {
  State s{Vec3(0.45, 0.52, 0.02), warped_facet()};
  const double radius = 0.1, eps = 7.0, w = 0.013;
  const auto r = point_facet_penalty(s.p, s.xs, radius, eps, w);
  REQUIRE(r.active);
  REQUIRE(r.proj.interior);

  const double h = 1e-7;
  for (int d = 0; d < 15; ++d) {
    Vec15 e = Vec15::Zero();
    e[d] = h;
    const double fd =
        (penalty_energy(apply(s, e), radius, eps, w) - penalty_energy(apply(s, -e), radius, eps, w)) /
        (2 * h);
    CHECK(std::abs(r.f[d] - fd) < 1e-6 * (1.0 + r.f.norm()));
  }
}

TEST_CASE("penalty tangent matches finite differences (interior projections)") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dp(0.35, 0.65), dz(-0.01, 0.06);
  const double radius = 0.1, eps = 12.0, w = 0.02, h = 1e-7;

  int tested = 0;
  for (int trial = 0; trial < 12 && tested < 6; ++trial) {
    State s{Vec3(dp(rng), dp(rng), dz(rng)), random_facet(rng)};
    const auto r = point_facet_penalty(s.p, s.xs, radius, eps, w);
    if (!r.active || !r.proj.interior) continue;
    ++tested;

    Mat15 kfd;
    for (int d = 0; d < 15; ++d) {
      Vec15 e = Vec15::Zero();
      e[d] = h;
      const State sp = apply(s, e), sm = apply(s, -e);
      kfd.col(d) = (point_facet_penalty(sp.p, sp.xs, radius, eps, w).f -
                    point_facet_penalty(sm.p, sm.xs, radius, eps, w).f) /
                   (2 * h);
    }
    CHECK((r.k - kfd).norm() < 1e-5 * kfd.norm());
    CHECK((r.k - r.k.transpose()).norm() < 1e-9 * r.k.norm());
  }
  CHECK(tested == 6);
}

TEST_CASE("points beside a facet do not masquerade as near-surface points") {
  const auto xs = flat_unit_facet();

  // far past the +xi edge, barely above the facet plane: the normal-projected
  // distance would be 0.02, but the true distance to the clamped foot is 0.5
  const Vec3 p(1.5, 0.5, 0.02);
  const FacetProjection pr = project_point_to_facet(p, xs);
  CHECK(!pr.interior);
  CHECK(std::abs(pr.signed_distance - std::hypot(0.5, 0.02)) < 1e-12);
  const auto r = point_facet_penalty(p, xs, 0.05, 5.0, 0.1);
  CHECK(!r.active);

  // below the plane and beside the facet: distance is signed negative
  const FacetProjection pr2 = project_point_to_facet(Vec3(1.5, 0.5, -0.02), xs);
  CHECK(std::abs(pr2.signed_distance + std::hypot(0.5, 0.02)) < 1e-12);

  // a best-facet pick must prefer the true facet underneath the point over a
  // neighboring facet whose edge is level with the point
  std::vector<std::array<Vec3, 4>> facets;
  facets.push_back(xs); // spans [0,1]^2 at z = 0
  std::array<Vec3, 4> beside = xs;
  for (Vec3& x : beside) x += Vec3(2.0, 0.0, 0.09);
  facets.push_back(beside); // spans x in [2,3] at z = 0.09
  const BestFacet b = pick_best_facet(Vec3(0.5, 0.5, 0.1), facets, {0, 1}, 0.0);
  CHECK(b.facet == 0);
  CHECK(std::abs(b.gap - 0.1) < 1e-12);
}

TEST_CASE("boundary-clamped contact is consistent point-segment contact") {
  const auto flat = flat_unit_facet();
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);

  // edge-clamped (past +xi), corner-clamped (past two edges), warped variants
  const Vec3 probes[] = {Vec3(1.2, 0.5, 0.05), Vec3(1.15, -0.12, 0.08)};
  int tested = 0;
  for (int warp = 0; warp < 2; ++warp) {
    auto xs = flat;
    if (warp) for (auto& x : xs) x += Vec3(jitter(rng), jitter(rng), jitter(rng));
    for (const Vec3& p0 : probes) {
      const auto r = point_facet_penalty(p0, xs, 0.3, 5.0, 0.1);
      REQUIRE(r.active);
      CHECK(!r.proj.interior);

      // action equals reaction
      Vec3 sum = Vec3::Zero();
      for (int a = 0; a < 4; ++a) sum += r.f.segment<3>(3 + 3 * a);
      CHECK((sum + r.f.segment<3>(0)).norm() < 1e-13);
      CHECK((r.k - r.k.transpose()).norm() < 1e-12 * r.k.norm());

      // the tangent matches finite differences of the force across all 15 dofs
      const double h = 1e-6;
      const double scale = r.k.cwiseAbs().maxCoeff();
      for (int d = 0; d < 15; ++d) {
        auto eval = [&](double s) {
          Vec3 p = p0;
          auto xd = xs;
          if (d < 3)
            p[d] += s;
          else
            xd[(d - 3) / 3][(d - 3) % 3] += s;
          return point_facet_penalty(p, xd, 0.3, 5.0, 0.1).f;
        };
        const Vec15 fd = (eval(h) - eval(-h)) / (2.0 * h);
        CHECK((fd - r.k.col(d)).cwiseAbs().maxCoeff() < 2e-5 * scale);
      }
      ++tested;
    }
  }
  CHECK(tested == 4);
}

TEST_CASE("best-facet pick: nearest wins, ties resolve to the lower id") {
  std::vector<std::array<Vec3, 4>> facets;
  facets.push_back(flat_unit_facet()); // z = 0
  auto high = flat_unit_facet();
  for (auto& x : high) x.z() = 0.08;
  facets.push_back(high);              // z = 0.08

  const std::vector<int> all = {0, 1};
  // point between the layers, closer to the upper facet
  const BestFacet b1 = pick_best_facet(Vec3(0.5, 0.5, 0.06), facets, all, 0.0);
  CHECK(b1.facet == 1);
  CHECK(std::abs(b1.gap + 0.02) < 1e-12);

  // exactly mid-way: tie, lower id wins
  const BestFacet b2 = pick_best_facet(Vec3(0.5, 0.5, 0.04), facets, all, 0.0);
  CHECK(b2.facet == 0);

  // nothing within the deep cap
  std::vector<std::array<Vec3, 4>> far = {flat_unit_facet()};
  const BestFacet b3 = pick_best_facet(Vec3(0.5, 0.5, -5.0), far, {0}, 0.0, 0.3);
  CHECK(b3.facet == -1);
}

TEST_CASE("broad phase returns a superset of everything within the margin") {
  TubeSpec spec;
  spec.length = 10.0;
  spec.outer_diameter = 2.8;
  spec.wall_thickness = 0.6;
  spec.n_circ = 8;
  spec.n_radial = 1;
  spec.n_axial = 10;
  const SolidMesh tube = generate_tube(spec);

  std::vector<std::array<Vec3, 4>> facets;
  for (const Facet& f : tube.surfaces.at("inner"))
    facets.push_back({tube.x[f.n[0]], tube.x[f.n[1]], tube.x[f.n[2]], tube.x[f.n[3]]});

  const double margin = 0.3;
  const FacetGrid grid(facets, margin);

  std::mt19937 rng(41);
  std::uniform_real_distribution<double> dr(0.0, 1.0), dth(0.0, 2.0 * M_PI), dz(0.0, 10.0);
  std::vector<int> cand;
  for (int trial = 0; trial < 200; ++trial) {
    const double rad = 0.4 + 0.6 * dr(rng), th = dth(rng);
    const Vec3 p(rad * std::cos(th), rad * std::sin(th), dz(rng));
    grid.query(p, cand);

    for (std::size_t i = 0; i < facets.size(); ++i) {
      const FacetProjection pr = project_point_to_facet(p, facets[i]);
      if ((p - pr.foot).norm() <= margin) {
        CHECK(std::count(cand.begin(), cand.end(), int(i)) == 1);
      }
    }

    std::vector<int> again;
    grid.query(p, again);
    CHECK(again == cand);
  }
}

TEST_CASE("degenerate facets are rejected") {
  const std::array<Vec3, 4> line = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)};
  CHECK_THROWS(project_point_to_facet(Vec3(0.5, 0.4, 0.3), line));
  CHECK_THROWS(point_facet_penalty(Vec3(0.5, 0.5, 0.0), flat_unit_facet(), 0.1, -1.0, 1.0));
}
