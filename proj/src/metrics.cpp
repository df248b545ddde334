#include "stentsim/metrics.hpp"

#include "stentsim/hex8.hpp"

#include <Eigen/Eigenvalues>

#include <limits>
#include <set>
#include <stdexcept>

namespace stentsim {

namespace {

double max_principal(const Mat3& sigma) {
  return Eigen::SelfAdjointEigenSolver<Mat3>(sigma).eigenvalues().maxCoeff();
}

double element_max_principal(const SolidMesh& mesh, const std::vector<Vec3>& x,
                             const std::vector<HyperelasticParams>& materials, int e) {
  std::array<Vec3, 8> X;
  Vec24 u;
  for (int a = 0; a < 8; ++a) {
    X[a] = mesh.x[mesh.hex[e][a]];
    u.segment<3>(3 * a) = x[mesh.hex[e][a]] - X[a];
  }
  const auto sig = hex8_cauchy(X, u, materials[mesh.layer[e]], mesh.fiber_a[e],
                               mesh.fiber_b[e], e);
  double m = std::numeric_limits<double>::lowest();
  for (const Mat3& s : sig) m = std::max(m, max_principal(s));
  return m;
}

void check_sizes(const BeamMesh& mesh, const std::vector<Vec3>& x) {
  if (x.size() != mesh.x.size())
    throw std::invalid_argument("metrics: position array does not match the mesh");
  if (mesh.x.empty()) throw std::invalid_argument("metrics: empty mesh");
}

double distance_to_polyline(const Vec3& p, const std::vector<Vec3>& line) {
  if (line.size() == 1) return (p - line[0]).norm();
  double best = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec3 d = line[i + 1] - line[i];
    const double len2 = d.squaredNorm();
    double t = len2 > 0.0 ? (p - line[i]).dot(d) / len2 : 0.0;
    t = std::min(1.0, std::max(0.0, t));
    best = std::min(best, (p - (line[i] + t * d)).norm());
  }
  return best;
}

}  // namespace

double stent_diameter(const BeamMesh& mesh, const std::vector<Vec3>& x,
                      const Vec3& origin, const Vec3& direction) {
  check_sizes(mesh, x);
  const double dn = direction.norm();
  if (dn < 1e-300) throw std::invalid_argument("metrics: zero axis direction");
  const Vec3 d = direction / dn;
  double sum = 0.0;
  for (const Vec3& p : x) {
    const Vec3 v = p - origin;
    sum += (v - v.dot(d) * d).norm();
  }
  return 2.0 * sum / double(x.size());
}

double stent_diameter(const BeamMesh& mesh, const std::vector<Vec3>& x,
                      const std::vector<Vec3>& centerline) {
  check_sizes(mesh, x);
  if (centerline.empty()) throw std::invalid_argument("metrics: empty centerline");
  double sum = 0.0;
  for (const Vec3& p : x) sum += distance_to_polyline(p, centerline);
  return 2.0 * sum / double(x.size());
}

Recoil recoil(double d_max, double d_final) {
  if (d_max <= 0.0) throw std::invalid_argument("recoil: d_max must be positive");
  Recoil r;
  r.absolute = d_max - d_final;
  r.percent = 100.0 * r.absolute / d_max;
  return r;
}

std::vector<Vec3> ring_centroids(const BeamMesh& mesh, const std::vector<Vec3>& x) {
  check_sizes(mesh, x);
  int n_rings = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (mesh.ring[i] >= 0) n_rings = std::max(n_rings, mesh.ring[i] + 1);

  std::vector<Vec3> c(n_rings, Vec3::Zero());
  std::vector<int> count(n_rings, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (mesh.ring[i] >= 0) {
      c[mesh.ring[i]] += x[i];
      ++count[mesh.ring[i]];
    }
  for (int r = 0; r < n_rings; ++r) {
    if (count[r] == 0) throw std::invalid_argument("metrics: ring without nodes");
    c[r] /= double(count[r]);
  }
  return c;
}

std::vector<double> ring_diameters(const BeamMesh& mesh, const std::vector<Vec3>& x) {
  const std::vector<Vec3> c = ring_centroids(mesh, x);
  const int n = int(c.size());

  std::vector<Vec3> axis(n, Vec3::UnitZ());
  for (int r = 0; r < n; ++r) {
    const int lo = std::max(r - 1, 0), hi = std::min(r + 1, n - 1);
    if (hi > lo) axis[r] = (c[hi] - c[lo]).normalized();
  }

  std::vector<double> d(n, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (mesh.ring[i] >= 0) {
      const int r = mesh.ring[i];
      const Vec3 v = x[i] - c[r];
      d[r] += (v - v.dot(axis[r]) * axis[r]).norm();
      ++count[r];
    }
  for (int r = 0; r < n; ++r) d[r] *= 2.0 / double(count[r]);
  return d;
}

double mean_centerline_curvature(const std::vector<Vec3>& centroids) {
  const int n = int(centroids.size());
  if (n < 3) return 0.0;
  double sum = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const Vec3 a = centroids[i] - centroids[i - 1];
    const Vec3 b = centroids[i + 1] - centroids[i];
    const Vec3 chord = centroids[i + 1] - centroids[i - 1];
    const double denom = a.norm() * b.norm() * chord.norm();
    if (denom < 1e-300) throw std::invalid_argument("metrics: coincident ring centroids");
    sum += 2.0 * a.cross(b).norm() / denom;
  }
  return sum / double(n - 2);
}

std::vector<double> element_sigma1(const SolidMesh& mesh, const std::vector<Vec3>& x,
                                   const std::vector<HyperelasticParams>& materials) {
  if (x.size() != mesh.x.size())
    throw std::invalid_argument("metrics: position array does not match the mesh");
  if (int(materials.size()) != mesh.n_layers)
    throw std::invalid_argument("metrics: one material per layer required");
  std::vector<double> s(mesh.hex.size());
  for (int e = 0; e < int(mesh.hex.size()); ++e)
    s[e] = element_max_principal(mesh, x, materials, e);
  return s;
}

std::vector<double> max_principal_stress_per_layer(
    const SolidMesh& mesh, const std::vector<Vec3>& x,
    const std::vector<HyperelasticParams>& materials) {
  const std::vector<double> s = element_sigma1(mesh, x, materials);
  std::vector<double> m(mesh.n_layers, std::numeric_limits<double>::lowest());
  for (int e = 0; e < int(mesh.hex.size()); ++e)
    m[mesh.layer[e]] = std::max(m[mesh.layer[e]], s[e]);
  return m;
}

double max_principal_stress_on_surface(const SolidMesh& mesh, const std::vector<Vec3>& x,
                                       const std::vector<HyperelasticParams>& materials,
                                       const std::string& surface) {
  const auto it = mesh.surfaces.find(surface);
  if (it == mesh.surfaces.end())
    throw std::invalid_argument("metrics: unknown surface '" + surface + "'");
  if (int(materials.size()) != mesh.n_layers)
    throw std::invalid_argument("metrics: one material per layer required");
  std::set<int> owners;
  for (const Facet& f : it->second) owners.insert(f.owner);
  double m = std::numeric_limits<double>::lowest();
  for (int e : owners) m = std::max(m, element_max_principal(mesh, x, materials, e));
  return m;
}

}  // namespace stentsim
