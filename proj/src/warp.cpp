#include "stentsim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stentsim {

namespace {

double max_curvature(const SplineCurve& c, int samples = 513) {
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

} // namespace

BeamMesh warp_stent(const BeamMesh& straight, const SplineCurve& curve) {
  if (straight.x.empty()) throw std::invalid_argument("empty stent mesh");

  double max_offset = 0.0, z_min = 1e300, z_max = -1e300;
  for (const Vec3& p : straight.x) {
    max_offset = std::max(max_offset, std::hypot(p.x(), p.y()));
    z_min = std::min(z_min, p.z());
    z_max = std::max(z_max, p.z());
  }
  if (z_min < -1e-9)
    throw std::invalid_argument("straight stent must start at z = 0");
  if (curve.total_length() + 1e-9 < z_max)
    throw std::invalid_argument("centerline is shorter than the stent");
  const double kmax = max_curvature(curve);
  if (kmax > 0.0 && 1.0 / kmax < max_offset)
    throw std::invalid_argument(
        "centerline curvature radius is below the stent radius (section inversion)");

  // Frames at the distinct axial stations of the device.
  std::vector<double> stations;
  stations.reserve(straight.x.size());
  for (const Vec3& p : straight.x) stations.push_back(std::max(0.0, p.z()));
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 stations.end());

  const Vec3 t0 = curve.tangent_at_arclength(stations.front());
  Vec3 seed = Vec3::UnitX() - Vec3::UnitX().dot(t0) * t0;
  if (seed.norm() < 1e-8) seed = (Vec3::UnitY() - Vec3::UnitY().dot(t0) * t0);
  const std::vector<Frame> frames =
      curve.rotation_minimizing_frames(stations, seed.normalized());

  auto frame_index = [&](double z) {
    auto it = std::lower_bound(stations.begin(), stations.end(), z - 1e-9);
    if (it == stations.end() || std::abs(*it - z) > 1e-9)
      throw std::logic_error("internal: missing frame station");
    return static_cast<std::size_t>(it - stations.begin());
  };

  BeamMesh warped = straight;
  for (std::size_t i = 0; i < straight.x.size(); ++i) {
    const Vec3& p = straight.x[i];
    const std::size_t fi = frame_index(std::max(0.0, p.z()));
    const Frame& f = frames[fi];
    warped.x[i] = curve.position_at_arclength(stations[fi]) + p.x() * f.n1 + p.y() * f.n2;

    // Spatial rotation taking the straight device frame (x,y,z) to (n1,n2,t).
    Mat3 rot;
    rot.col(0) = f.n1;
    rot.col(1) = f.n2;
    rot.col(2) = f.t;
    warped.q[i] = (Quat(rot) * straight.q[i]).normalized();
  }

  // Reference lengths are kept from the straight device; strain offsets are
  // recomputed so the warped configuration is exactly stress-free.
  for (auto& e : warped.elements)
    if (!(e.l_ref > 0.0)) throw std::logic_error("internal: element without reference length");
  reset_reference(warped);
  return warped;
}

} // namespace stentsim
