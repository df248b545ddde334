#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stentsim/generators.hpp"
#include "stentsim/hex_shape.hpp"
#include "stentsim/meshes.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

using namespace stentsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

StentDesign paper_stent(int n_rings) {
  StentDesign d;
  d.initial_diameter = 8.0 * 0.45 / kPi; // so that 8 crowns * 0.45 mm close the ring
  d.n_rings = n_rings;
  d.crowns_per_ring = 8;
  d.crown_height = 1.5;
  d.crown_distance = 0.45;
  d.ring_pitch = 1.5;
  d.connectors_per_gap = 2;
  d.elements_per_strut = 3;
  d.strut_radius = 0.06;
  return d;
}

double min_det_jacobian(const SolidMesh& m) {
  double dmin = 1e300;
  for (const auto& h : m.hex) {
    auto node = [&](int a) { return m.x[h[a]]; };
    for (const Vec3& gp : hex_gauss_points())
      dmin = std::min(dmin, hex_jacobian(node, gp).determinant());
  }
  return dmin;
}

SplineCurve near_interpolating_curve(const std::vector<Vec3>& pts) {
  std::vector<double> w(pts.size(), 1.0);
  return SplineCurve::fit(pts, w, 1e-10, 0.5);
}

// Looser target for strongly oscillatory sample sets, where pushing the
// smoothing residual to 1e-10 is numerically out of reach.
SplineCurve smooth_curve(const std::vector<Vec3>& pts) {
  std::vector<double> w(pts.size(), 1.0);
  return SplineCurve::fit(pts, w, 1e-6, 0.9);
}

// |angle| the frame rotates about the tangent between consecutive stations,
// accumulated; the tangent change itself is removed by a minimal rotation.
double accumulated_twist(const std::vector<Frame>& fr) {
  double tw = 0.0;
  for (std::size_t i = 0; i + 1 < fr.size(); ++i) {
    const Quat align = Quat::FromTwoVectors(fr[i].t, fr[i + 1].t);
    const Vec3 n_t = align * fr[i].n1;
    tw += std::acos(std::clamp(n_t.dot(fr[i + 1].n1), -1.0, 1.0));
  }
  return tw;
}

std::vector<Frame> frenet_frames(const SplineCurve& c, const std::vector<double>& s) {
  std::vector<Frame> out;
  for (double si : s) {
    const double t = c.param_at_arclength(si);
    const Vec3 d1 = c.derivative(t, 1), d2 = c.derivative(t, 2);
    Frame f;
    f.t = d1.normalized();
    f.n1 = (d2 - d2.dot(f.t) * f.t).normalized();
    f.n2 = f.t.cross(f.n1);
    out.push_back(f);
  }
  return out;
}

} // namespace

TEST_CASE("stent generator: published element counts and lengths") {
  {
    BeamMesh m = generate_stent(paper_stent(4));
    CHECK(m.elements.size() == 210);
    CHECK(m.x.size() == 204);
    CHECK(m.axis_length == doctest::Approx(6.0).epsilon(1e-12));
  }
  {
    BeamMesh m = generate_stent(paper_stent(11));
    CHECK(m.elements.size() == 588);
    CHECK(m.axis_length == doctest::Approx(16.5).epsilon(1e-12));
  }
  {
    StentDesign d = paper_stent(1);
    d.connectors_per_gap = 0; // irrelevant without gaps
    BeamMesh m = generate_stent(d);
    CHECK(m.elements.size() == 48);
  }
}

TEST_CASE("stent generator: nodes on cylinder, unit triads, tangent-aligned directors") {
  StentDesign d = paper_stent(4);
  BeamMesh m = generate_stent(d);
  const double r = 0.5 * d.initial_diameter;
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    CHECK(std::abs(std::hypot(m.x[i].x(), m.x[i].y()) - r) < 1e-12);
    CHECK(std::abs(m.q[i].norm() - 1.0) < 1e-12);
  }
  // Interior nodes have an unambiguous strut tangent: the strut is a straight
  // line in the unrolled (r*theta, z) plane, i.e. a helix segment in space
  // with tangent (-r sin(th) dth, r cos(th) dth, dz). Verify the stored first
  // director against that analytic direction, taking endpoint angles from the
  // node metadata (principal-value angle difference handles the seam).
  std::vector<std::vector<int>> elems_of_node(m.x.size());
  for (std::size_t e = 0; e < m.elements.size(); ++e) {
    elems_of_node[m.elements[e].n[0]].push_back(int(e));
    elems_of_node[m.elements[e].n[1]].push_back(int(e));
  }
  int checked = 0;
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    if (m.kind[i] != BeamNodeKind::StrutInterior && m.kind[i] != BeamNodeKind::ConnectorInterior)
      continue;
    const auto& e = m.elements[elems_of_node[i][0]];
    double dth = m.theta[e.n[1]] - m.theta[e.n[0]];
    while (dth > kPi) dth -= 2.0 * kPi;
    while (dth < -kPi) dth += 2.0 * kPi;
    const double dz = m.x[e.n[1]].z() - m.x[e.n[0]].z();
    const double th = m.theta[i];
    const Vec3 t_analytic =
        Vec3(-r * std::sin(th) * dth, r * std::cos(th) * dth, dz).normalized();
    const Vec3 d1 = m.q[i].toRotationMatrix().col(0);
    CHECK(std::abs(std::abs(d1.dot(t_analytic)) - 1.0) < 1e-12);
    ++checked;
  }
  CHECK(checked > 100);
  // connectivity references valid nodes
  for (const auto& e : m.elements) {
    CHECK(e.n[0] >= 0);
    CHECK(e.n[1] >= 0);
    CHECK(e.n[0] < int(m.x.size()));
    CHECK(e.n[1] < int(m.x.size()));
    CHECK(e.n[0] != e.n[1]);
  }
}

TEST_CASE("stent generator: reference state is stress-free by construction") {
  BeamMesh m = generate_stent(paper_stent(4));
  for (const auto& e : m.elements) {
    const Mat3 eff1 = (m.q[e.n[0]] * e.q_off[0]).toRotationMatrix();
    const Mat3 eff2 = (m.q[e.n[1]] * e.q_off[1]).toRotationMatrix();
    CHECK((eff1 - eff2).norm() < 1e-12); // relative rotation vanishes
    CHECK(e.phi_ref.norm() == 0.0);
    const Vec3 d = m.x[e.n[1]] - m.x[e.n[0]];
    CHECK(std::abs(e.l_ref - d.norm()) < 1e-12);
    CHECK((e.gamma_ref - Vec3::UnitX()).norm() < 1e-12); // aligned frame: pure axial chord
    CHECK((eff1.transpose() * d / e.l_ref - e.gamma_ref).norm() < 1e-12);
  }
}

TEST_CASE("stent generator: rejections") {
  StentDesign d = paper_stent(4);
  d.strut_radius = 0.2; // apex half spacing 0.225 < 0.4
  CHECK_THROWS(generate_stent(d));

  d = paper_stent(4);
  d.crown_distance = 0.6; // breaks circumference consistency
  CHECK_THROWS(generate_stent(d));

  d = paper_stent(4);
  d.initial_diameter = -1.0;
  CHECK_THROWS(generate_stent(d));
}

TEST_CASE("stent generator: count formulas hold over random valid designs") {
  std::mt19937 rng(42);
  auto randint = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto randreal = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  for (int trial = 0; trial < 40; ++trial) {
    StentDesign d;
    d.n_rings = randint(1, 6);
    d.crowns_per_ring = randint(2, 12);
    d.elements_per_strut = randint(1, 4);
    d.connectors_per_gap = randint(1, 4);
    d.crown_height = randreal(0.3, 3.0);
    d.ring_pitch = d.crown_height * randreal(1.0, 1.5);
    d.initial_diameter = randreal(0.5, 6.0);
    d.crown_distance = kPi * d.initial_diameter / d.crowns_per_ring;
    d.strut_radius = 0.0;
    BeamMesh m = generate_stent(d);
    const int gaps = d.n_rings - 1;
    const std::size_t want_elems = std::size_t(d.n_rings) * 2 * d.crowns_per_ring * d.elements_per_strut +
                                   std::size_t(gaps) * d.connectors_per_gap * d.elements_per_strut;
    const std::size_t want_nodes = std::size_t(d.n_rings) * 2 * d.crowns_per_ring * d.elements_per_strut +
                                   std::size_t(gaps) * d.connectors_per_gap * (d.elements_per_strut - 1);
    CHECK(m.elements.size() == want_elems);
    CHECK(m.x.size() == want_nodes);
    const double want_len = gaps * d.ring_pitch + d.crown_height;
    CHECK(m.axis_length == doctest::Approx(want_len).epsilon(1e-12));
  }
}

TEST_CASE("tube generator: structured counts and surface sets") {
  TubeSpec s;
  s.length = 10.0;
  s.outer_diameter = 2.8;
  s.wall_thickness = 0.6;
  s.n_circ = 8;
  s.n_radial = 1;
  s.n_axial = 10;
  SolidMesh m = generate_tube(s);
  CHECK(m.hex.size() == 80);
  CHECK(m.x.size() == 176); // n_circ * (n_radial+1) * (n_axial+1)
  CHECK(m.surfaces.at("inner").size() == 80);
  CHECK(m.surfaces.at("outer").size() == 80);
  CHECK(m.surfaces.at("end_start").size() == 8);
  CHECK(m.surfaces.at("end_end").size() == 8);
  // every facet belongs to exactly one element — its owner
  for (const auto& [name, facets] : m.surfaces) {
    for (const auto& f : facets) {
      REQUIRE(f.owner >= 0);
      REQUIRE(f.owner < int(m.hex.size()));
      const auto& h = m.hex[f.owner];
      for (int a : f.n) CHECK(std::count(h.begin(), h.end(), a) == 1);
    }
  }
  CHECK(min_det_jacobian(m) > 0.0);
}

TEST_CASE("tube generator: balloon resolution matches published element count") {
  TubeSpec s;
  s.length = 8.4;
  s.outer_diameter = 0.98;
  s.wall_thickness = 0.04;
  s.n_circ = 29;
  s.n_radial = 1;
  s.n_axial = 39;
  SolidMesh m = generate_tube(s);
  CHECK(m.hex.size() == 1131);
  CHECK(min_det_jacobian(m) > 0.0);
}

TEST_CASE("tube generator: two-layer artery wall split 2/3 - 1/3") {
  TubeSpec s;
  s.length = 10.0;
  s.outer_diameter = 2.8;
  s.wall_thickness = 0.6;
  s.n_circ = 12;
  s.n_radial = 3;
  s.n_axial = 10;
  s.layer_split = {2.0 / 3.0, 1.0 / 3.0};
  SolidMesh m = generate_tube(s);
  CHECK(m.n_layers == 2);
  int n0 = 0, n1 = 0;
  for (int t : m.layer) (t == 0 ? n0 : n1)++;
  CHECK(n0 == 2 * 12 * 10); // media: two radial elements
  CHECK(n1 == 1 * 12 * 10); // adventitia: one
  // media occupies the inner 0.4 mm of wall
  for (std::size_t e = 0; e < m.hex.size(); ++e) {
    Vec3 c = Vec3::Zero();
    for (int a : m.hex[e]) c += m.x[a];
    c /= 8.0;
    const double rad = std::hypot(c.x(), c.y());
    if (m.layer[e] == 0)
      CHECK(rad < 0.8 + 0.4);
    else
      CHECK(rad > 0.8 + 0.4);
  }
  CHECK(min_det_jacobian(m) > 0.0);
}

TEST_CASE("tube generator: random specs keep positive Jacobians and the node formula") {
  std::mt19937 rng(7);
  auto randint = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto randreal = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  for (int trial = 0; trial < 30; ++trial) {
    TubeSpec s;
    s.length = randreal(1.0, 30.0);
    s.outer_diameter = randreal(0.5, 20.0);
    s.wall_thickness = randreal(0.05, 0.45) * s.outer_diameter;
    s.n_circ = randint(3, 20);
    s.n_radial = randint(1, 5);
    s.n_axial = randint(1, 10);
    const int L = randint(1, std::min(3, s.n_radial));
    s.layer_split.assign(L, 0.0);
    double sum = 0.0;
    for (int j = 0; j < L; ++j) sum += (s.layer_split[j] = randreal(0.2, 1.0));
    for (int j = 0; j < L; ++j) s.layer_split[j] /= sum;
    SolidMesh m = generate_tube(s);
    CHECK(m.hex.size() == std::size_t(s.n_circ) * s.n_radial * s.n_axial);
    CHECK(m.x.size() == std::size_t(s.n_circ) * (s.n_radial + 1) * (s.n_axial + 1));
    CHECK(min_det_jacobian(m) > 0.0);
  }
}

TEST_CASE("tube generator: curved sweep places sections normal to the tangent") {
  // gentle arc of radius 40 in the x-z plane
  std::vector<Vec3> pts;
  for (int i = 0; i <= 100; ++i) {
    const double a = 0.5 * i / 100.0;
    pts.push_back(Vec3(40.0 * (1.0 - std::cos(a)), 0.0, 40.0 * std::sin(a)));
  }
  SplineCurve curve = near_interpolating_curve(pts);
  TubeSpec s;
  s.length = 10.0;
  s.outer_diameter = 2.8;
  s.wall_thickness = 0.6;
  s.n_circ = 12;
  s.n_radial = 2;
  s.n_axial = 10;
  s.layer_split = {0.5, 0.5};
  s.centerline = &curve;
  SolidMesh m = generate_tube(s);
  CHECK(min_det_jacobian(m) > 0.0);
  const int per_section = s.n_circ * (s.n_radial + 1);
  for (int l = 0; l <= s.n_axial; ++l) {
    const double sl = s.length * l / s.n_axial;
    const Vec3 c = curve.position_at_arclength(sl);
    const Vec3 t = curve.tangent_at_arclength(sl);
    for (int k = 0; k < per_section; ++k) {
      const Vec3& p = m.x[l * per_section + k];
      CHECK(std::abs((p - c).dot(t)) < 1e-7);
    }
  }
}

TEST_CASE("tube generator: rejections") {
  TubeSpec s;
  s.length = 10.0;
  s.outer_diameter = 2.8;
  s.wall_thickness = 1.5; // >= half the diameter
  s.n_circ = 8;
  s.n_radial = 1;
  s.n_axial = 4;
  CHECK_THROWS(generate_tube(s));

  s.wall_thickness = 0.6;
  s.layer_split = {0.5, 0.4}; // does not sum to 1
  CHECK_THROWS(generate_tube(s));

  s.layer_split = {0.5, 0.5};
  s.n_radial = 1; // fewer radial elements than layers
  CHECK_THROWS(generate_tube(s));

  // curvature radius below the outer diameter
  std::vector<Vec3> pts;
  for (int i = 0; i <= 80; ++i) {
    const double a = 2.0 * i / 80.0;
    pts.push_back(Vec3(1.2 * std::cos(a), 1.2 * std::sin(a), 0.0));
  }
  SplineCurve tight = near_interpolating_curve(pts);
  s.layer_split = {1.0};
  s.n_radial = 1;
  s.centerline = &tight;
  CHECK_THROWS(generate_tube(s));
}

TEST_CASE("fiber assignment: analytic cylinder frame oracle") {
  TubeSpec s;
  s.length = 10.0;
  s.outer_diameter = 2.8;
  s.wall_thickness = 0.6;
  s.n_circ = 16;
  s.n_radial = 3;
  s.n_axial = 6;
  s.layer_split = {2.0 / 3.0, 1.0 / 3.0};
  SolidMesh m = generate_tube(s);

  SUBCASE("zero angle gives the circumferential direction, e_y at theta=0") {
    assign_fibers(m, std::vector<double>{0.0, 0.0});
    for (std::size_t e = 0; e < m.hex.size(); ++e) {
      Vec3 c = Vec3::Zero();
      for (int a : m.hex[e]) c += m.x[a];
      c /= 8.0;
      const double th = std::atan2(c.y(), c.x());
      const Vec3 radial(std::cos(th), std::sin(th), 0.0);
      const Vec3 circ(-std::sin(th), std::cos(th), 0.0);
      CHECK((m.fiber_a[e] - circ).norm() < 1e-9);
      CHECK((m.fiber_b[e] - circ).norm() < 1e-9);
      CHECK(std::abs(m.fiber_a[e].dot(radial)) < 1e-10);
    }
    // right-hand rule at theta -> 0: circumferential tends to +e_y
    const Vec3 circ0(-std::sin(kPi / s.n_circ), std::cos(kPi / s.n_circ), 0.0);
    CHECK((m.fiber_a[0] - circ0).norm() < 1e-9);
    CHECK(m.fiber_a[0].dot(Vec3::UnitY()) > 0.9);
  }

  SUBCASE("plus-minus 40 degrees: family dot product is cos(80), radial-orthogonal, unit") {
    assign_fibers(m, std::vector<double>{40.0, 40.0});
    for (std::size_t e = 0; e < m.hex.size(); ++e) {
      CHECK(std::abs(m.fiber_a[e].norm() - 1.0) < 1e-12);
      CHECK(std::abs(m.fiber_b[e].norm() - 1.0) < 1e-12);
      CHECK(m.fiber_a[e].dot(m.fiber_b[e]) ==
            doctest::Approx(std::cos(80.0 * kPi / 180.0)).epsilon(1e-9));
      CHECK(std::abs(m.fiber_a[e].dot(m.frame[e].col(0))) < 1e-10);
      CHECK(std::abs(m.fiber_b[e].dot(m.frame[e].col(0))) < 1e-10);
    }
  }

  SUBCASE("per-family angles support longitudinal plus circumferential pairs") {
    assign_fibers(m, std::vector<FiberAngles>{{90.0, 0.0}, {90.0, 0.0}});
    for (std::size_t e = 0; e < m.hex.size(); ++e) {
      CHECK(std::abs(m.fiber_a[e].dot(Vec3::UnitZ())) > 1.0 - 1e-9); // longitudinal
      CHECK(std::abs(m.fiber_b[e].dot(Vec3::UnitZ())) < 1e-9);      // circumferential
    }
  }

  SUBCASE("wrong angle count and missing parameterization fail") {
    CHECK_THROWS(assign_fibers(m, std::vector<double>{40.0}));
    SolidMesh bare;
    bare.x = m.x;
    bare.hex = m.hex;
    bare.layer = m.layer;
    bare.n_layers = 2;
    CHECK_THROWS(assign_fibers(bare, std::vector<double>{0.0, 0.0}));
  }
}

TEST_CASE("warp: coincident straight centerline is the identity") {
  BeamMesh stent = generate_stent(paper_stent(4));
  std::vector<Vec3> pts;
  for (int i = 0; i <= 40; ++i) pts.push_back(Vec3(0, 0, -1.0 + 9.0 * i / 40.0));
  SplineCurve line = near_interpolating_curve(pts);
  // shift so arclength 0 is at z = 0 for this curve: points start at z=-1,
  // so build instead from z=0 to keep the anchor convention
  pts.clear();
  for (int i = 0; i <= 40; ++i) pts.push_back(Vec3(0, 0, 8.0 * i / 40.0));
  line = near_interpolating_curve(pts);
  BeamMesh w = warp_stent(stent, line);
  for (std::size_t i = 0; i < stent.x.size(); ++i) {
    CHECK((w.x[i] - stent.x[i]).norm() < 1e-12);
    const Mat3 dq = w.q[i].toRotationMatrix() - stent.q[i].toRotationMatrix();
    CHECK(dq.norm() < 1e-10);
  }
  for (std::size_t e = 0; e < stent.elements.size(); ++e)
    CHECK(w.elements[e].l_ref == stent.elements[e].l_ref);
}

TEST_CASE("warp: circular arc preserves arclength stations and radial offsets") {
  BeamMesh stent = generate_stent(paper_stent(4));
  const double R = 10.0;
  std::vector<Vec3> pts;
  for (int i = 0; i <= 200; ++i) {
    const double a = 0.8 * i / 200.0;
    pts.push_back(Vec3(R * (1.0 - std::cos(a)), 0.0, R * std::sin(a)));
  }
  SplineCurve arc = near_interpolating_curve(pts);
  BeamMesh w = warp_stent(stent, arc);

  // station set = distinct straight-device z values
  std::set<double> zs;
  for (const Vec3& p : stent.x) zs.insert(p.z());

  // independent arclength integration between consecutive stations (Gauss-16)
  static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
  static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                               0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                               0.0622535239386479, 0.0271524594117540};
  std::vector<double> stations(zs.begin(), zs.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < stations.size(); ++i) {
    const double ta = arc.param_at_arclength(stations[i]);
    const double tb = arc.param_at_arclength(stations[i + 1]);
    double seg = 0.0;
    for (int k = 0; k < 8; ++k) {
      for (double sgn : {-1.0, 1.0}) {
        const double t = 0.5 * (ta + tb) + sgn * 0.5 * (tb - ta) * gx[k];
        seg += 0.5 * (tb - ta) * gw[k] * arc.derivative(t, 1).norm();
      }
    }
    total += seg;
  }
  const double span = stations.back() - stations.front();
  CHECK(std::abs(total - span) < 1e-8 * std::max(1.0, span));

  // radial offsets from the mapped centerline are preserved
  for (std::size_t i = 0; i < stent.x.size(); ++i) {
    const Vec3 c = arc.position_at_arclength(stent.x[i].z());
    const double off_straight = std::hypot(stent.x[i].x(), stent.x[i].y());
    CHECK(std::abs((w.x[i] - c).norm() - off_straight) < 1e-8);
  }

  // mapped stations track the analytic arc
  for (double s : stations) {
    const double a = s / R;
    const Vec3 exact(R * (1.0 - std::cos(a)), 0.0, R * std::sin(a));
    CHECK((arc.position_at_arclength(s) - exact).norm() < 1e-5);
  }

  // reference lengths preserved exactly, warped state re-declared stress-free
  for (std::size_t e = 0; e < stent.elements.size(); ++e) {
    CHECK(w.elements[e].l_ref == stent.elements[e].l_ref);
    const auto& el = w.elements[e];
    const Mat3 eff1 = (w.q[el.n[0]] * el.q_off[0]).toRotationMatrix();
    const Mat3 eff2 = (w.q[el.n[1]] * el.q_off[1]).toRotationMatrix();
    CHECK((eff1 - eff2).norm() < 1e-12);
    const Vec3 d = w.x[el.n[1]] - w.x[el.n[0]];
    CHECK((eff1.transpose() * d / el.l_ref - el.gamma_ref).norm() < 1e-12);
  }
}

TEST_CASE("warp: rotation-minimizing transport twists no more than the Frenet frame") {
  const double a = 3.0, b = 0.9;
  std::vector<Vec3> pts;
  for (int i = 0; i <= 150; ++i) {
    const double t = 3.0 * i / 150.0;
    pts.push_back(Vec3(a * std::cos(t), a * std::sin(t), b * t));
  }
  SplineCurve helix = smooth_curve(pts);

  std::vector<double> stations;
  for (int i = 0; i <= 200; ++i) stations.push_back(6.0 * i / 200.0);
  const Vec3 t0 = helix.tangent_at_arclength(0.0);
  Vec3 seed = Vec3::UnitX() - Vec3::UnitX().dot(t0) * t0;
  const std::vector<Frame> rmf = helix.rotation_minimizing_frames(stations, seed.normalized());
  const std::vector<Frame> frenet = frenet_frames(helix, stations);

  const double tw_rmf = accumulated_twist(rmf);
  const double tw_frenet = accumulated_twist(frenet);
  CHECK(tw_frenet > 0.05); // the helix really does torque the Frenet frame
  CHECK(tw_rmf < 0.01);
  CHECK(tw_rmf <= tw_frenet);

  // and the warp itself accepts the curve (stent radius 0.57 < bend radius)
  BeamMesh stent = generate_stent(paper_stent(4));
  BeamMesh w = warp_stent(stent, helix);
  CHECK(w.x.size() == stent.x.size());
}

TEST_CASE("warp: rejections") {
  BeamMesh stent = generate_stent(paper_stent(4));

  // bend radius 0.4 sits below the stent radius 0.573; a long tight coil
  // keeps the curve longer than the 6 mm device so only curvature can reject
  std::vector<Vec3> pts;
  for (int i = 0; i <= 400; ++i) {
    const double t = 6.0 * kPi * i / 400.0;
    pts.push_back(Vec3(0.4 * std::cos(t), 0.4 * std::sin(t), 0.05 * t));
  }
  SplineCurve coil = smooth_curve(pts);
  CHECK_THROWS(warp_stent(stent, coil));

  // centerline shorter than the device
  pts.clear();
  for (int i = 0; i <= 40; ++i) pts.push_back(Vec3(0, 0, 3.0 * i / 40.0));
  SplineCurve shortline = near_interpolating_curve(pts);
  CHECK_THROWS(warp_stent(stent, shortline));
}
