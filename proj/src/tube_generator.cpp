#include "stentsim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace stentsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest sampled curvature of the curve over its parameter range.
double max_curvature(const SplineCurve& c, int samples = 257) {
  double kmax = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t =
        c.param_begin() + (c.param_end() - c.param_begin()) * i / double(samples - 1);
    const Vec3 d1 = c.derivative(t, 1);
    const Vec3 d2 = c.derivative(t, 2);
    const double speed = d1.norm();
    if (speed < 1e-12) continue;
    kmax = std::max(kmax, d1.cross(d2).norm() / (speed * speed * speed));
  }
  return kmax;
}

Vec3 seed_normal_for(const Vec3& t) {
  Vec3 helper = std::abs(t.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (helper - helper.dot(t) * t).normalized();
}

// Distribute n_radial elements over wall layers proportionally to their
// thickness fractions, at least one element per layer (largest remainder).
std::vector<int> radial_counts(const std::vector<double>& split, int n_radial) {
  const int L = static_cast<int>(split.size());
  std::vector<int> cnt(L, 1);
  int remaining = n_radial - L;
  std::vector<double> want(L);
  for (int j = 0; j < L; ++j) want[j] = split[j] * n_radial;
  // hand out remaining elements by largest shortfall
  while (remaining > 0) {
    int best = 0;
    double best_gap = -1e300;
    for (int j = 0; j < L; ++j) {
      const double gap = want[j] - cnt[j];
      if (gap > best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    ++cnt[best];
    --remaining;
  }
  return cnt;
}

} // namespace

SolidMesh generate_tube(const TubeSpec& spec) {
  if (!(spec.length > 0.0)) throw std::invalid_argument("length must be positive");
  if (!(spec.outer_diameter > 0.0)) throw std::invalid_argument("outer_diameter must be positive");
  if (!(spec.wall_thickness > 0.0) || spec.wall_thickness >= 0.5 * spec.outer_diameter)
    throw std::invalid_argument("wall_thickness must lie in (0, outer_diameter/2)");
  if (spec.n_circ < 3) throw std::invalid_argument("n_circ must be >= 3");
  if (spec.n_axial < 1) throw std::invalid_argument("n_axial must be >= 1");
  const int L = static_cast<int>(spec.layer_split.size());
  if (L < 1) throw std::invalid_argument("layer_split must not be empty");
  double sum = 0.0;
  for (double f : spec.layer_split) {
    if (!(f > 0.0)) throw std::invalid_argument("layer_split fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("layer_split fractions must sum to 1");
  if (spec.n_radial < L)
    throw std::invalid_argument("n_radial must be at least the number of wall layers");

  std::vector<Frame> frames;
  std::vector<double> stations(spec.n_axial + 1);
  for (int l = 0; l <= spec.n_axial; ++l) stations[l] = spec.length * l / double(spec.n_axial);

  if (spec.centerline != nullptr) {
    const SplineCurve& c = *spec.centerline;
    if (c.total_length() + 1e-9 < spec.length)
      throw std::invalid_argument("centerline is shorter than the requested tube length");
    const double kmax = max_curvature(c);
    if (kmax > 0.0 && 1.0 / kmax < spec.outer_diameter)
      throw std::invalid_argument(
          "centerline curvature radius is below the outer diameter (section inversion)");
    frames = c.rotation_minimizing_frames(stations,
                                          seed_normal_for(c.tangent_at_arclength(0.0)));
  } else {
    Frame f;
    f.t = Vec3::UnitZ();
    f.n1 = Vec3::UnitX();
    f.n2 = Vec3::UnitY();
    frames.assign(stations.size(), f);
  }

  // Radial node stations, inner wall -> outer wall, each layer equally split
  // over its share of elements.
  const double r_outer = 0.5 * spec.outer_diameter;
  const double r_inner = r_outer - spec.wall_thickness;
  const std::vector<int> cnt = radial_counts(spec.layer_split, spec.n_radial);
  std::vector<double> r_sta;
  std::vector<int> elem_layer_of_radial; // per radial element index
  r_sta.push_back(r_inner);
  double r_cur = r_inner;
  for (int j = 0; j < L; ++j) {
    const double t_layer = spec.wall_thickness * spec.layer_split[j];
    for (int k = 1; k <= cnt[j]; ++k) {
      r_sta.push_back(r_cur + t_layer * k / double(cnt[j]));
      elem_layer_of_radial.push_back(j);
    }
    r_cur += t_layer;
  }

  SolidMesh mesh;
  mesh.n_layers = L;
  const int nc = spec.n_circ, nr = spec.n_radial, na = spec.n_axial;
  auto centre = [&](int l) {
    return spec.centerline ? spec.centerline->position_at_arclength(stations[l])
                           : Vec3(0, 0, stations[l]);
  };
  auto nid = [&](int c, int rad, int l) { return (l * (nr + 1) + rad) * nc + (c % nc); };

  mesh.x.resize(static_cast<std::size_t>(nc) * (nr + 1) * (na + 1));
  for (int l = 0; l <= na; ++l) {
    const Frame& f = frames[l];
    const Vec3 o = centre(l);
    for (int rad = 0; rad <= nr; ++rad) {
      for (int c = 0; c < nc; ++c) {
        const double th = 2.0 * kPi * c / nc;
        mesh.x[nid(c, rad, l)] = o + r_sta[rad] * (std::cos(th) * f.n1 + std::sin(th) * f.n2);
      }
    }
  }

  // Elements; local axes radial x circumferential = axial keeps det(J) > 0.
  for (int l = 0; l < na; ++l) {
    const Frame& f0 = frames[l];
    const Frame& f1 = frames[l + 1];
    for (int rad = 0; rad < nr; ++rad) {
      for (int c = 0; c < nc; ++c) {
        std::array<int, 8> h = {nid(c, rad, l),     nid(c, rad + 1, l),
                                nid(c + 1, rad + 1, l), nid(c + 1, rad, l),
                                nid(c, rad, l + 1), nid(c, rad + 1, l + 1),
                                nid(c + 1, rad + 1, l + 1), nid(c + 1, rad, l + 1)};
        mesh.hex.push_back(h);
        mesh.layer.push_back(elem_layer_of_radial[rad]);

        const double th_mid = 2.0 * kPi * (c + 0.5) / nc;
        const Vec3 n1 = 0.5 * (f0.n1 + f1.n1), n2 = 0.5 * (f0.n2 + f1.n2);
        Vec3 radial = (std::cos(th_mid) * n1 + std::sin(th_mid) * n2).normalized();
        Vec3 axial = 0.5 * (f0.t + f1.t);
        axial = (axial - axial.dot(radial) * radial).normalized();
        Mat3 fr;
        fr.col(0) = radial;
        fr.col(1) = axial.cross(radial);
        fr.col(2) = axial;
        mesh.frame.push_back(fr);
      }
    }
  }
  mesh.fiber_a.assign(mesh.hex.size(), Vec3::Zero());
  mesh.fiber_b.assign(mesh.hex.size(), Vec3::Zero());

  // Oriented surface sets (facet normals point out of the solid).
  auto owner = [&](int c, int rad, int l) { return (l * nr + rad) * nc + (c % nc); };
  auto& inner = mesh.surfaces["inner"];
  auto& outer = mesh.surfaces["outer"];
  auto& end0 = mesh.surfaces["end_start"];
  auto& end1 = mesh.surfaces["end_end"];
  for (int l = 0; l < na; ++l) {
    for (int c = 0; c < nc; ++c) {
      inner.push_back({{nid(c, 0, l), nid(c, 0, l + 1), nid(c + 1, 0, l + 1), nid(c + 1, 0, l)},
                       owner(c, 0, l)});
      outer.push_back({{nid(c, nr, l), nid(c + 1, nr, l), nid(c + 1, nr, l + 1), nid(c, nr, l + 1)},
                       owner(c, nr - 1, l)});
    }
  }
  for (int rad = 0; rad < nr; ++rad) {
    for (int c = 0; c < nc; ++c) {
      end0.push_back({{nid(c, rad, 0), nid(c + 1, rad, 0), nid(c + 1, rad + 1, 0), nid(c, rad + 1, 0)},
                      owner(c, rad, 0)});
      end1.push_back({{nid(c, rad, na), nid(c, rad + 1, na), nid(c + 1, rad + 1, na), nid(c + 1, rad, na)},
                      owner(c, rad, na - 1)});
    }
  }
  return mesh;
}

void assign_fibers(SolidMesh& mesh, const std::vector<FiberAngles>& per_layer) {
  if (mesh.frame.size() != mesh.hex.size())
    throw std::invalid_argument("mesh carries no tube parameterization; cannot assign fibers");
  if (static_cast<int>(per_layer.size()) != mesh.n_layers)
    throw std::invalid_argument("need one fiber angle pair per material layer");
  mesh.fiber_a.resize(mesh.hex.size());
  mesh.fiber_b.resize(mesh.hex.size());
  for (std::size_t e = 0; e < mesh.hex.size(); ++e) {
    const Mat3& fr = mesh.frame[e];
    const Vec3 circ = fr.col(1), axial = fr.col(2);
    const FiberAngles& ang = per_layer[mesh.layer[e]];
    const double a = ang.a_deg * kPi / 180.0, b = ang.b_deg * kPi / 180.0;
    mesh.fiber_a[e] = (std::cos(a) * circ + std::sin(a) * axial).normalized();
    mesh.fiber_b[e] = (std::cos(b) * circ + std::sin(b) * axial).normalized();
  }
}

void assign_fibers(SolidMesh& mesh, const std::vector<double>& phi_per_layer_deg) {
  std::vector<FiberAngles> per_layer(phi_per_layer_deg.size());
  for (std::size_t j = 0; j < phi_per_layer_deg.size(); ++j)
    per_layer[j] = {phi_per_layer_deg[j], -phi_per_layer_deg[j]};
  assign_fibers(mesh, per_layer);
}

} // namespace stentsim
