#include "stentsim/hex8.hpp"

#include "stentsim/hex_shape.hpp"

#include <cmath>

namespace stentsim {

namespace {

// Voigt pairs 11, 22, 33, 12, 23, 13.
constexpr int kVa[6] = {0, 1, 2, 0, 1, 0};
constexpr int kVb[6] = {0, 1, 2, 1, 2, 2};

struct GpKinematics {
  Eigen::Matrix<double, 8, 3> gradN; // dN_a/dX
  Mat3 F;
  double detJ0 = 0.0;
};

GpKinematics gp_kinematics(const std::array<Vec3, 8>& X, const Vec24& u, const Vec3& xi,
                           int elem_id) {
  const auto dN = hex_shape_derivs(xi);
  Mat3 J0 = Mat3::Zero();
  for (int a = 0; a < 8; ++a) J0 += X[a] * dN.row(a);
  GpKinematics k;
  k.detJ0 = J0.determinant();
  if (!(k.detJ0 > 0.0)) throw ElementDiverged(elem_id);
  k.gradN = dN * J0.inverse();
  k.F = Mat3::Identity();
  for (int a = 0; a < 8; ++a) k.F += u.segment<3>(3 * a) * k.gradN.row(a);
  if (!(k.F.determinant() > 0.0)) throw ElementDiverged(elem_id);
  return k;
}

// Nonlinear strain-displacement operator: delta E_voigt = B * delta u.
Eigen::Matrix<double, 6, 24> b_matrix(const GpKinematics& k) {
  Eigen::Matrix<double, 6, 24> B;
  for (int a = 0; a < 8; ++a) {
    const Vec3 g = k.gradN.row(a).transpose();
    for (int I = 0; I < 6; ++I) {
      const int i = kVa[I], j = kVb[I];
      for (int c = 0; c < 3; ++c) {
        // dE_ij = sym(F^T grad du)_ij; engineering shears double off-diagonals
        const double v = k.F(c, i) * g[j] + k.F(c, j) * g[i];
        B(I, 3 * a + c) = (i == j) ? 0.5 * v : v;
      }
    }
  }
  return B;
}

// Bilinear quad shape functions on [-1,1]^2, node order (-,-),(+,-),(+,+),(-,+).
void quad_shape(double xi, double eta, double N[4], double dNxi[4], double dNeta[4]) {
  const double gx[4] = {-1, 1, 1, -1}, gy[4] = {-1, -1, 1, 1};
  for (int a = 0; a < 4; ++a) {
    N[a] = 0.25 * (1 + gx[a] * xi) * (1 + gy[a] * eta);
    dNxi[a] = 0.25 * gx[a] * (1 + gy[a] * eta);
    dNeta[a] = 0.25 * gy[a] * (1 + gx[a] * xi);
  }
}

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

} // namespace

Hex8Result hex8_internal(const std::array<Vec3, 8>& X, const Vec24& u,
                         const HyperelasticParams& p, const Vec3& Ma, const Vec3& Mb,
                         const std::array<Mat3, 8>* E_prev, double dtau_pseudo, int elem_id) {
  Hex8Result out;
  const auto gps = hex_gauss_points();
  const double visc = (p.eta_visc > 0.0 && dtau_pseudo > 0.0) ? p.eta_visc / dtau_pseudo : 0.0;
  for (int g = 0; g < 8; ++g) {
    const GpKinematics kin = gp_kinematics(X, u, gps[g], elem_id);
    const Mat3 C = kin.F.transpose() * kin.F;
    const Mat3 E = 0.5 * (C - Mat3::Identity());

    Mat3 S = pk2_stress(C, p, Ma, Mb);
    Mat6 cc = material_tangent(C, p, Ma, Mb);
    if (visc > 0.0) {
      const Mat3 En = E_prev ? (*E_prev)[g] : Mat3::Zero();
      S += visc * (E - En);
      for (int I = 0; I < 6; ++I) cc(I, I) += (I < 3 ? visc : 0.5 * visc);
    }

    const auto B = b_matrix(kin);
    const double w = kin.detJ0; // unit Gauss weights
    Vec6 Sv;
    for (int I = 0; I < 6; ++I) Sv[I] = S(kVa[I], kVb[I]);
    out.f += w * B.transpose() * Sv;
    out.k += w * B.transpose() * cc * B;
    // geometric stiffness: k_ab = I3 * gradN_a . S . gradN_b
    for (int a = 0; a < 8; ++a) {
      const Vec3 Sga = S * kin.gradN.row(a).transpose();
      for (int b = 0; b < 8; ++b) {
        const double s = kin.gradN.row(b).dot(Sga) * w;
        for (int c = 0; c < 3; ++c) out.k(3 * a + c, 3 * b + c) += s;
      }
    }
  }
  return out;
}

std::array<Mat3, 8> hex8_green_strains(const std::array<Vec3, 8>& X, const Vec24& u,
                                       int elem_id) {
  std::array<Mat3, 8> out;
  const auto gps = hex_gauss_points();
  for (int g = 0; g < 8; ++g) {
    const GpKinematics kin = gp_kinematics(X, u, gps[g], elem_id);
    out[g] = 0.5 * (kin.F.transpose() * kin.F - Mat3::Identity());
  }
  return out;
}

std::array<Mat3, 8> hex8_cauchy(const std::array<Vec3, 8>& X, const Vec24& u,
                                const HyperelasticParams& p, const Vec3& Ma, const Vec3& Mb,
                                int elem_id) {
  std::array<Mat3, 8> out;
  const auto gps = hex_gauss_points();
  for (int g = 0; g < 8; ++g) {
    const GpKinematics kin = gp_kinematics(X, u, gps[g], elem_id);
    const Mat3 C = kin.F.transpose() * kin.F;
    out[g] = cauchy_from_pk2(kin.F, pk2_stress(C, p, Ma, Mb));
  }
  return out;
}

FacetResult follower_pressure(const std::array<Vec3, 4>& X, const Vec12& u, double p) {
  FacetResult out;
  std::array<Vec3, 4> x;
  for (int a = 0; a < 4; ++a) x[a] = X[a] + u.segment<3>(3 * a);

  // reject degenerate reference facets
  {
    double Nc[4], dxi[4], deta[4];
    quad_shape(0.0, 0.0, Nc, dxi, deta);
    Vec3 Xxi = Vec3::Zero(), Xeta = Vec3::Zero();
    for (int a = 0; a < 4; ++a) {
      Xxi += dxi[a] * X[a];
      Xeta += deta[a] * X[a];
    }
    if (Xxi.cross(Xeta).norm() < 1e-14) throw std::invalid_argument("degenerate facet");
  }

  const double g = 1.0 / std::sqrt(3.0);
  for (double gxi : {-g, g}) {
    for (double geta : {-g, g}) {
      double N[4], dxi[4], deta[4];
      quad_shape(gxi, geta, N, dxi, deta);
      Vec3 txi = Vec3::Zero(), teta = Vec3::Zero();
      for (int a = 0; a < 4; ++a) {
        txi += dxi[a] * x[a];
        teta += deta[a] * x[a];
      }
      const Vec3 da = txi.cross(teta); // current area vector density (outward)
      for (int a = 0; a < 4; ++a) {
        out.f.segment<3>(3 * a) += -p * N[a] * da;
        for (int b = 0; b < 4; ++b) {
          // d(da) = -skew(teta) d(txi) + skew(txi) d(teta)
          const Mat3 dda = -skew(teta) * dxi[b] + skew(txi) * deta[b];
          out.k.block<3, 3>(3 * a, 3 * b) += -p * N[a] * dda;
        }
      }
    }
  }
  return out;
}

FacetResult spring_boundary(const std::array<Vec3, 4>& X, const Vec12& u, double c_c) {
  FacetResult out;
  const double g = 1.0 / std::sqrt(3.0);
  Eigen::Matrix<double, 4, 4> mass = Eigen::Matrix<double, 4, 4>::Zero();
  for (double gxi : {-g, g}) {
    for (double geta : {-g, g}) {
      double N[4], dxi[4], deta[4];
      quad_shape(gxi, geta, N, dxi, deta);
      Vec3 Xxi = Vec3::Zero(), Xeta = Vec3::Zero();
      for (int a = 0; a < 4; ++a) {
        Xxi += dxi[a] * X[a];
        Xeta += deta[a] * X[a];
      }
      const double dA = Xxi.cross(Xeta).norm();
      if (!(dA > 1e-14)) throw std::invalid_argument("degenerate facet");
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) mass(a, b) += N[a] * N[b] * dA;
    }
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 3; ++c) {
        out.k(3 * a + c, 3 * b + c) = c_c * mass(a, b);
        out.f[3 * a + c] -= c_c * mass(a, b) * u[3 * b + c];
      }
  return out;
}

} // namespace stentsim
