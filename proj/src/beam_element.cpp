#include <stdexcept>

#include "stentsim/beam.hpp"
#include "stentsim/so3.hpp"

namespace stentsim {

namespace {

using Mat312 = Eigen::Matrix<double, 3, 12>;

struct Kinematics {
  Mat3 eff1, eff2;  // effective node triads (node triad * reference offset)
  Vec3 phi;         // relative rotation vector between the effective triads
  Mat3 mid;         // midpoint triad
  Vec3 d;           // current chord
  Vec3 gamma;       // material stretch/shear strain minus reference value
  Vec3 kappa;       // material curvature minus reference value
};

Kinematics kinematics(const BeamElement& e, const Vec3& x1, const Quat& q1,
                      const Vec3& x2, const Quat& q2) {
  if (!(e.l_ref > 0.0)) throw std::invalid_argument("beam element: l_ref must be positive");
  Kinematics k;
  const Quat qe1 = (q1 * e.q_off[0]).normalized();
  const Quat qe2 = (q2 * e.q_off[1]).normalized();
  k.eff1 = qe1.toRotationMatrix();
  k.eff2 = qe2.toRotationMatrix();
  k.phi = so3::log_quat(qe1.conjugate() * qe2);
  k.mid = k.eff1 * so3::exp_matrix(0.5 * k.phi);
  k.d = x2 - x1;
  k.gamma = k.mid.transpose() * k.d / e.l_ref - e.gamma_ref;
  k.kappa = (k.phi - e.phi_ref) / e.l_ref;
  return k;
}

}  // namespace

BeamStrains beam_strains(const BeamElement& e, const Vec3& x1, const Quat& q1,
                         const Vec3& x2, const Quat& q2) {
  const Kinematics k = kinematics(e, x1, q1, x2, q2);
  return {k.gamma, k.kappa};
}

BeamResult beam_internal(const BeamElement& e, const Vec3& x1, const Quat& q1,
                         const Vec3& x2, const Quat& q2, const BeamSectionParams& p,
                         const SectionState& sn, SectionState* out) {
  const double l = e.l_ref;
  const Kinematics kin = kinematics(e, x1, q1, x2, q2);
  const Mat3& lm = kin.mid;
  const Vec3& phi = kin.phi;
  const Vec3& d = kin.d;

  const Mat3 a_inv = so3::tangent_inverse(phi);          // T(phi)^{-1}
  const Mat3 q_op = a_inv * kin.eff2.transpose();        // maps spatial dw2-dw1 to dphi
  const Mat3 w_op = so3::tangent(0.5 * phi);
  const Mat3 p_op = 0.5 * lm * w_op * q_op;              // midpoint-rotation share of node 2

  const Vec3 force = p.force_stiffness() * kin.gamma;
  const MomentResult mr = moment_update(kin.kappa, sn, p, out);

  const Vec3 y = lm * force;                 // spatial section force
  const Vec3 z = q_op.transpose() * mr.moment;
  const Vec3 v = d.cross(y);
  const Vec3 u_m = lm.transpose() * v;
  const Vec3 w_vec = w_op.transpose() * u_m;
  const Vec3 x_vec = 0.5 * a_inv.transpose() * w_vec;
  const Vec3 ptv = kin.eff2 * x_vec;         // = P^T v

  BeamResult r;
  r.f.segment<3>(0) = -y;
  r.f.segment<3>(3) = -z - v + ptv;
  r.f.segment<3>(6) = y;
  r.f.segment<3>(9) = z - ptv;

  // Consistent tangent: chain the variations of every intermediate quantity
  // with respect to [dr1, dw1, dr2, dw2].
  const auto hat = so3::hat;
  Mat312 d_phi = Mat312::Zero();
  d_phi.block<3, 3>(0, 3) = -q_op;
  d_phi.block<3, 3>(0, 9) = q_op;

  Mat312 d_wm = Mat312::Zero();
  d_wm.block<3, 3>(0, 3) = Mat3::Identity() - p_op;
  d_wm.block<3, 3>(0, 9) = p_op;

  Mat312 d_d = Mat312::Zero();
  d_d.block<3, 3>(0, 0) = -Mat3::Identity();
  d_d.block<3, 3>(0, 6) = Mat3::Identity();

  Mat312 d_gamma = (lm.transpose() * hat(d / l)) * d_wm;
  d_gamma.block<3, 3>(0, 0) -= lm.transpose() / l;
  d_gamma.block<3, 3>(0, 6) += lm.transpose() / l;

  const Mat312 d_force = p.force_stiffness() * d_gamma;
  const Mat312 d_moment = mr.tangent * (d_phi / l);

  const Mat312 d_y = -hat(y) * d_wm + lm * d_force;
  const Mat312 d_v = -hat(y) * d_d + hat(d) * d_y;
  const Mat312 d_um = lm.transpose() * (hat(v) * d_wm + d_v);
  const Mat312 d_wvec =
      w_op.transpose() * d_um + so3::dtangent_transpose(0.5 * phi, u_m) * (0.5 * d_phi);
  const Mat312 d_xvec =
      0.5 * (a_inv.transpose() * d_wvec + so3::dtangent_inverse_transpose(phi, w_vec) * d_phi);

  Mat312 d_ptv = kin.eff2 * d_xvec;
  d_ptv.block<3, 3>(0, 9) -= hat(ptv);

  Mat312 d_z = kin.eff2 * (so3::dtangent_inverse_transpose(phi, mr.moment) * d_phi +
                           a_inv.transpose() * d_moment);
  d_z.block<3, 3>(0, 9) -= hat(z);

  r.k.block<3, 12>(0, 0) = -d_y;
  r.k.block<3, 12>(3, 0) = -d_z - d_v + d_ptv;
  r.k.block<3, 12>(6, 0) = d_y;
  r.k.block<3, 12>(9, 0) = d_z - d_ptv;
  return r;
}

}  // namespace stentsim
