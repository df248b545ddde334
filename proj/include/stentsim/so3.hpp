#pragma once

#include "stentsim/types.hpp"

// Rotation-group utilities used by the beam kinematics. Conventions:
//   R = exp(hat(phi)) rotates material vectors into the spatial frame,
//   R^T dR = hat(T(phi) dphi)  defines the (right) tangent map T,
// so T maps additive rotation-vector increments to material angular
// increments. All maps are smooth through phi = 0 via series branches.

namespace stentsim::so3 {

Mat3 hat(const Vec3& a);
Vec3 vee(const Mat3& a);

Quat exp_quat(const Vec3& phi);
Mat3 exp_matrix(const Vec3& phi);

// Rotation vector with |phi| <= pi. Quaternion form is numerically robust
// near both 0 and pi.
Vec3 log_quat(const Quat& q);
Vec3 log_matrix(const Mat3& r);

Mat3 tangent(const Vec3& phi);          // T(phi)
Mat3 tangent_inverse(const Vec3& phi);  // T(phi)^{-1}

// Directional-derivative kernels for the consistent beam tangent:
//   dtangent_transpose(phi, a)         = d/dphi [ T(phi)^T a ]
//   dtangent_inverse_transpose(phi, m) = d/dphi [ T(phi)^{-T} m ]
Mat3 dtangent_transpose(const Vec3& phi, const Vec3& a);
Mat3 dtangent_inverse_transpose(const Vec3& phi, const Vec3& m);

} // namespace stentsim::so3
