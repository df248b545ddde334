#include "stentsim/beam.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stentsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double BeamSectionParams::area() const { return kPi * radius * radius; }

double BeamSectionParams::second_moment() const {
  return 0.25 * kPi * radius * radius * radius * radius;
}

Mat3 BeamSectionParams::force_stiffness() const {
  const double ea = young * area();
  const double gas = shear_correction * shear_modulus() * area();
  return Vec3(ea, gas, gas).asDiagonal();
}

Mat3 BeamSectionParams::elastic_moment_stiffness() const {
  const double ei = young * second_moment();
  const double gj = shear_modulus() * polar_moment();
  return Vec3(gj, ei, ei).asDiagonal();
}

MomentResult moment_update(const Vec3& curvature, const SectionState& sn,
                           const BeamSectionParams& p, SectionState* out) {
  if (!(p.young > 0.0) || !(p.radius > 0.0))
    throw std::invalid_argument("beam section: modulus and radius must be positive");

  const double ei = p.young * p.second_moment();
  const double gj = p.shear_modulus() * p.polar_moment();
  const double hi = p.hardening * p.second_moment();

  MomentResult r;
  r.moment[0] = gj * curvature[0];
  r.tangent = Mat3::Zero();
  r.tangent(0, 0) = gj;

  const Vec2 kb(curvature[1], curvature[2]);
  const Vec2 m_trial = ei * (kb - sn.plastic_curvature);
  const double norm_trial = m_trial.norm();
  const double yield = (p.yield_moment > 0.0)
                           ? p.yield_moment + hi * sn.accumulated
                           : std::numeric_limits<double>::infinity();

  if (norm_trial <= yield) {
    r.moment[1] = m_trial[0];
    r.moment[2] = m_trial[1];
    r.tangent(1, 1) = ei;
    r.tangent(2, 2) = ei;
    if (out) *out = sn;
    return r;
  }

  const double dgamma = (norm_trial - yield) / (ei + hi);
  const Vec2 dir = m_trial / norm_trial;
  const Vec2 mb = m_trial - ei * dgamma * dir;
  r.moment[1] = mb[0];
  r.moment[2] = mb[1];

  const Mat2 nn = dir * dir.transpose();
  const Mat2 cb = ei * (1.0 - ei * dgamma / norm_trial) * (Mat2::Identity() - nn) +
                  (ei * hi / (ei + hi)) * nn;
  r.tangent.block<2, 2>(1, 1) = cb;

  if (out) {
    out->plastic_curvature = sn.plastic_curvature + dgamma * dir;
    out->accumulated = sn.accumulated + dgamma;
  }
  return r;
}

}  // namespace stentsim
