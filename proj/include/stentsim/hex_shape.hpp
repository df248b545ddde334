#pragma once

#include "stentsim/types.hpp"

#include <array>

namespace stentsim {

// Trilinear 8-node hexahedron, nodes ordered so that (xi, eta, zeta) = (-1|+1)
// follow the usual convention: 0:(-,-,-) 1:(+,-,-) 2:(+,+,-) 3:(-,+,-) and
// 4..7 the same with zeta = +1.
inline constexpr std::array<std::array<double, 3>, 8> kHexCorner = {{
    {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
    {-1, -1, 1}, {1, -1, 1}, {1, 1, 1}, {-1, 1, 1},
}};

inline std::array<double, 8> hex_shape(const Vec3& xi) {
  std::array<double, 8> N;
  for (int a = 0; a < 8; ++a) {
    N[a] = 0.125 * (1 + kHexCorner[a][0] * xi[0]) * (1 + kHexCorner[a][1] * xi[1]) *
           (1 + kHexCorner[a][2] * xi[2]);
  }
  return N;
}

// Rows: node a; columns: d/dxi, d/deta, d/dzeta.
inline Eigen::Matrix<double, 8, 3> hex_shape_derivs(const Vec3& xi) {
  Eigen::Matrix<double, 8, 3> dN;
  for (int a = 0; a < 8; ++a) {
    const double gx = kHexCorner[a][0], gy = kHexCorner[a][1], gz = kHexCorner[a][2];
    dN(a, 0) = 0.125 * gx * (1 + gy * xi[1]) * (1 + gz * xi[2]);
    dN(a, 1) = 0.125 * gy * (1 + gx * xi[0]) * (1 + gz * xi[2]);
    dN(a, 2) = 0.125 * gz * (1 + gx * xi[0]) * (1 + gy * xi[1]);
  }
  return dN;
}

// 2x2x2 Gauss points (weight 1 each).
inline std::array<Vec3, 8> hex_gauss_points() {
  const double g = 0.57735026918962576451; // 1/sqrt(3)
  std::array<Vec3, 8> pts;
  int i = 0;
  for (int a = -1; a <= 1; a += 2)
    for (int b = -1; b <= 1; b += 2)
      for (int c = -1; c <= 1; c += 2) pts[i++] = Vec3(g * a, g * b, g * c);
  return pts;
}

// Jacobian dx/dxi of an element given its 8 node positions.
template <class GetNode>
inline Mat3 hex_jacobian(const GetNode& node, const Vec3& xi) {
  const auto dN = hex_shape_derivs(xi);
  Mat3 J = Mat3::Zero();
  for (int a = 0; a < 8; ++a) J += node(a) * dN.row(a);
  return J;
}

} // namespace stentsim
