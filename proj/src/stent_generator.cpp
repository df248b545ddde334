#include "stentsim/generators.hpp"
#include "stentsim/so3.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace stentsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic completion of a unit tangent into a right-handed frame with
// the tangent as first column (first director along the axis).
Mat3 aligned_frame(const Vec3& t) {
  Vec3 helper = std::abs(t.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 d3 = t.cross(helper).normalized();
  Vec3 d2 = d3.cross(t);
  Mat3 m;
  m.col(0) = t;
  m.col(1) = d2;
  m.col(2) = d3;
  return m;
}

} // namespace

void reset_reference(BeamMesh& mesh) {
  for (auto& e : mesh.elements) {
    const Vec3 d = mesh.x[e.n[1]] - mesh.x[e.n[0]];
    const double chord = d.norm();
    if (!(chord > 0.0)) throw std::invalid_argument("beam element has zero length");
    if (!(e.l_ref > 0.0)) e.l_ref = chord;

    const Mat3 lam_al = aligned_frame(d / chord);
    const Quat q_al(lam_al);
    for (int i = 0; i < 2; ++i) {
      e.q_off[i] = (mesh.q[e.n[i]].conjugate() * q_al).normalized();
    }
    // Both effective reference triads equal lam_al, so the relative rotation
    // vector vanishes and the axial/shear strain offset is the aligned chord.
    e.phi_ref = Vec3::Zero();
    e.gamma_ref = lam_al.transpose() * d / e.l_ref;
  }
}

BeamMesh generate_stent(const StentDesign& d) {
  if (!(d.initial_diameter > 0.0)) throw std::invalid_argument("initial_diameter must be positive");
  if (d.n_rings < 1) throw std::invalid_argument("n_rings must be >= 1");
  if (d.crowns_per_ring < 2) throw std::invalid_argument("crowns_per_ring must be >= 2");
  if (!(d.crown_height > 0.0)) throw std::invalid_argument("crown_height must be positive");
  if (!(d.crown_distance > 0.0)) throw std::invalid_argument("crown_distance must be positive");
  if (d.n_rings > 1 && !(d.ring_pitch > 0.0))
    throw std::invalid_argument("ring_pitch must be positive");
  if (d.n_rings > 1 && d.connectors_per_gap < 1)
    throw std::invalid_argument("connectors_per_gap must be >= 1 for multi-ring designs");
  if (d.elements_per_strut < 1) throw std::invalid_argument("elements_per_strut must be >= 1");
  if (!(d.strut_radius >= 0.0)) throw std::invalid_argument("strut_radius must be non-negative");

  const int m = d.crowns_per_ring;
  const double circumference = kPi * d.initial_diameter;
  if (std::abs(circumference - m * d.crown_distance) > 0.01 * circumference) {
    throw std::invalid_argument(
        "inconsistent design: crowns_per_ring * crown_distance must match the "
        "circumference at initial_diameter within 1%");
  }
  // Closest circumferential approach of neighboring struts is the half apex
  // spacing; below two strut radii the crowns self-intersect.
  const double apex_half_spacing = circumference / (2.0 * m);
  if (apex_half_spacing < 2.0 * d.strut_radius) {
    throw std::invalid_argument("crown geometry self-intersects: apex spacing below strut size");
  }
  if (d.n_rings > 1 && d.ring_pitch + 1e-12 < d.crown_height) {
    throw std::invalid_argument("ring_pitch must be at least crown_height (rings overlap)");
  }

  const double r = 0.5 * d.initial_diameter;
  const double pitch = d.n_rings > 1 ? d.ring_pitch : d.crown_height;
  const int eps = d.elements_per_strut;
  const double dth = 2.0 * kPi / m;

  BeamMesh mesh;
  auto on_cyl = [&](double theta, double z) { return Vec3(r * std::cos(theta), r * std::sin(theta), z); };
  auto add_node = [&](double theta, double z, int ring, BeamNodeKind kind) {
    mesh.x.push_back(on_cyl(theta, z));
    mesh.q.push_back(Quat::Identity()); // replaced below from adjacent struts
    mesh.ring.push_back(ring);
    mesh.theta.push_back(theta);
    mesh.kind.push_back(kind);
    return static_cast<int>(mesh.x.size()) - 1;
  };

  // Apex nodes, indexed for connectivity.
  std::map<std::pair<int, int>, int> bottom_apex, top_apex; // (ring, k) -> node
  for (int i = 0; i < d.n_rings; ++i) {
    const double z_b = i * pitch;
    const double z_t = z_b + d.crown_height;
    for (int k = 0; k < m; ++k) {
      bottom_apex[{i, k}] = add_node(k * dth, z_b, i, BeamNodeKind::ApexBottom);
      top_apex[{i, k}] = add_node((k + 0.5) * dth, z_t, i, BeamNodeKind::ApexTop);
    }
  }

  // A strut between two cylinder points, subdivided into eps elements with
  // interior nodes linear in (theta, z) so they stay on the cylinder. The
  // wrapped strut is a helix segment; nodes accumulate its exact unit tangent
  // so triads can align the first director with the local strut tangent.
  std::vector<Vec3> tangent_sum;
  auto strut_tangent = [&](double theta, double dth_strut, double dz_strut) {
    return Vec3(-r * std::sin(theta) * dth_strut, r * std::cos(theta) * dth_strut, dz_strut)
        .normalized();
  };
  auto add_strut = [&](int na, int nb, double th_a, double z_a, double th_b, double z_b,
                       int ring, BeamNodeKind interior_kind) {
    const double dth_s = th_b - th_a, dz_s = z_b - z_a;
    tangent_sum.resize(std::max(tangent_sum.size(), mesh.x.size()), Vec3::Zero());
    auto note_tangent = [&](int node, double theta) {
      tangent_sum.resize(std::max(tangent_sum.size(), mesh.x.size()), Vec3::Zero());
      tangent_sum[node] += strut_tangent(theta, dth_s, dz_s);
    };
    note_tangent(na, th_a);
    int prev = na;
    for (int s = 1; s <= eps; ++s) {
      int next;
      if (s == eps) {
        next = nb;
        note_tangent(nb, th_b);
      } else {
        const double a = static_cast<double>(s) / eps;
        const double th = th_a + a * dth_s;
        next = add_node(th, z_a + a * dz_s, ring, interior_kind);
        note_tangent(next, th);
      }
      BeamElement e;
      e.n = {prev, next};
      mesh.elements.push_back(e);
      prev = next;
    }
  };

  for (int i = 0; i < d.n_rings; ++i) {
    const double z_b = i * pitch;
    const double z_t = z_b + d.crown_height;
    for (int k = 0; k < m; ++k) {
      const double th_b0 = k * dth;
      const double th_t = (k + 0.5) * dth;
      const double th_b1 = (k + 1) * dth; // unwrapped angle; positions wrap naturally
      add_strut(bottom_apex[{i, k}], top_apex[{i, k}], th_b0, z_b, th_t, z_t, i,
                BeamNodeKind::StrutInterior);
      add_strut(top_apex[{i, k}], bottom_apex[{i, (k + 1) % m}], th_t, z_t, th_b1, z_b, i,
                BeamNodeKind::StrutInterior);
    }
  }

  // Straight axial connectors between same-angle bottom apices of adjacent
  // rings; angle slots alternate between gaps so bridges are staggered.
  for (int g = 0; g + 1 < d.n_rings; ++g) {
    for (int c = 0; c < d.connectors_per_gap; ++c) {
      const int k = ((2 * c + (g % 2)) * m / (2 * d.connectors_per_gap)) % m;
      const double th = k * dth;
      add_strut(bottom_apex[{g, k}], bottom_apex[{g + 1, k}], th, g * pitch, th, (g + 1) * pitch,
                -1, BeamNodeKind::ConnectorInterior);
    }
  }

  mesh.axis_length = (d.n_rings - 1) * pitch + d.crown_height;

  // Nodal triads: first director along the local strut tangent (averaged at
  // junction nodes), completed deterministically.
  tangent_sum.resize(mesh.x.size(), Vec3::Zero());
  for (std::size_t i = 0; i < mesh.x.size(); ++i) {
    Vec3 t = tangent_sum[i];
    if (t.norm() < 1e-12) t = Vec3::UnitZ(); // opposing tangents cancel at sharp apices
    mesh.q[i] = Quat(aligned_frame(t.normalized())).normalized();
  }

  reset_reference(mesh);
  return mesh;
}

} // namespace stentsim
