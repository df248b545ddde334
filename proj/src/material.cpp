#include "stentsim/material.hpp"

#include <cmath>
#include <stdexcept>

namespace stentsim {

namespace {

// Voigt index pairs in the order 11, 22, 33, 12, 23, 13.
constexpr int kVa[6] = {0, 1, 2, 0, 1, 0};
constexpr int kVb[6] = {0, 1, 2, 1, 2, 2};

void check_spd(const Mat3& C) {
  if ((C - C.transpose()).norm() > 1e-10 * (1.0 + C.norm()))
    throw std::invalid_argument("material: C must be symmetric");
  Eigen::LLT<Mat3> llt(C);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("material: C must be positive definite");
}

// Symmetrized outer product entering d(C^-1)/dC: for a symmetric A,
// T_ijkl = 1/2 (A_ik A_jl + A_il A_jk), packed as Voigt 6x6.
Mat6 sym_outer_voigt(const Mat3& A) {
  Mat6 t;
  for (int I = 0; I < 6; ++I) {
    const int i = kVa[I], j = kVb[I];
    for (int J = 0; J < 6; ++J) {
      const int k = kVa[J], l = kVb[J];
      t(I, J) = 0.5 * (A(i, k) * A(j, l) + A(i, l) * A(j, k));
    }
  }
  return t;
}

Mat6 outer_voigt(const Mat3& A, const Mat3& B) {
  Mat6 t;
  for (int I = 0; I < 6; ++I)
    for (int J = 0; J < 6; ++J)
      t(I, J) = A(kVa[I], kVb[I]) * B(kVa[J], kVb[J]);
  return t;
}

// Fiber family activity and the scalar s(x) with S_f = 2 s(x) M(x)M^T,
// where x = I_f - 1 and s(x) = k1 x exp(k2 x^2).
struct FiberEval {
  bool active = false;
  double x = 0.0;      // I_f - 1
  double s = 0.0;      // k1 x exp(k2 x^2)
  double ds = 0.0;     // ds/dx = k1 (1 + 2 k2 x^2) exp(k2 x^2)
  double psi = 0.0;    // k1/(2 k2) (exp(k2 x^2) - 1)
};

FiberEval eval_fiber(const Mat3& C, const Vec3& M, double k1, double k2, bool tension_only) {
  FiberEval f;
  if (k1 == 0.0) return f;
  const double I_f = M.dot(C * M);
  f.x = I_f - 1.0;
  if (tension_only && f.x <= 0.0) return f;
  f.active = true;
  const double e = std::exp(k2 * f.x * f.x);
  f.s = k1 * f.x * e;
  f.ds = k1 * (1.0 + 2.0 * k2 * f.x * f.x) * e;
  f.psi = k1 / (2.0 * k2) * (e - 1.0);
  return f;
}

} // namespace

HyperelasticParams HyperelasticParams::make(double E, double nu, double k1a, double k2a,
                                            double k1b, double k2b, bool tension_only) {
  if (!(E > 0.0)) throw std::invalid_argument("material: E must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("material: nu must be in [0, 0.5)");
  if (k1a < 0.0 || k1b < 0.0) throw std::invalid_argument("material: k1 must be non-negative");
  if (!(k2a > 0.0) || !(k2b > 0.0)) throw std::invalid_argument("material: k2 must be positive");
  HyperelasticParams p;
  p.E = E;
  p.nu = nu;
  p.k1[0] = k1a;
  p.k1[1] = k1b;
  p.k2[0] = k2a;
  p.k2[1] = k2b;
  p.tension_only = tension_only;
  p.kappa_vol = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); // first Lame parameter
  return p;
}

HyperelasticParams HyperelasticParams::make_isotropic(double E, double nu) {
  return make(E, nu, 0.0, 1.0, 0.0, 1.0, true);
}

Vec6 to_voigt_stress(const Mat3& s) {
  Vec6 v;
  for (int I = 0; I < 6; ++I) v[I] = s(kVa[I], kVb[I]);
  return v;
}

Mat3 from_voigt_stress(const Vec6& v) {
  Mat3 s;
  for (int I = 0; I < 6; ++I) {
    s(kVa[I], kVb[I]) = v[I];
    s(kVb[I], kVa[I]) = v[I];
  }
  return s;
}

Vec6 to_voigt_strain(const Mat3& e) {
  Vec6 v;
  for (int I = 0; I < 6; ++I)
    v[I] = (kVa[I] == kVb[I] ? 1.0 : 2.0) * e(kVa[I], kVb[I]);
  return v;
}

double strain_energy(const Mat3& C, const HyperelasticParams& p, const Vec3& Ma,
                     const Vec3& Mb) {
  check_spd(C);
  const double G = p.G();
  const double detC = C.determinant();
  const double lnJ = 0.5 * std::log(detC);
  const double J2 = detC;
  double psi = 0.5 * G * (C.trace() - 3.0) - G * lnJ +
               0.25 * p.kappa_vol * (J2 - 1.0 - 2.0 * lnJ);
  psi += eval_fiber(C, Ma, p.k1[0], p.k2[0], p.tension_only).psi;
  psi += eval_fiber(C, Mb, p.k1[1], p.k2[1], p.tension_only).psi;
  return psi;
}

Mat3 pk2_stress(const Mat3& C, const HyperelasticParams& p, const Vec3& Ma, const Vec3& Mb) {
  check_spd(C);
  const double G = p.G();
  const Mat3 Cinv = C.inverse();
  const double J2 = C.determinant();
  Mat3 S = G * (Mat3::Identity() - Cinv) + 0.5 * p.kappa_vol * (J2 - 1.0) * Cinv;
  const FiberEval fa = eval_fiber(C, Ma, p.k1[0], p.k2[0], p.tension_only);
  const FiberEval fb = eval_fiber(C, Mb, p.k1[1], p.k2[1], p.tension_only);
  if (fa.active) S += 2.0 * fa.s * Ma * Ma.transpose();
  if (fb.active) S += 2.0 * fb.s * Mb * Mb.transpose();
  return S;
}

Mat6 material_tangent(const Mat3& C, const HyperelasticParams& p, const Vec3& Ma,
                      const Vec3& Mb) {
  check_spd(C);
  const double G = p.G();
  const Mat3 Cinv = C.inverse();
  const double J2 = C.determinant();
  // d(C^-1)/dC = -sym_outer(C^-1); dS/dE = 2 dS/dC
  const Mat6 icc = sym_outer_voigt(Cinv);
  Mat6 cc = 2.0 * G * icc; // from -G C^-1
  cc += p.kappa_vol * (J2 * outer_voigt(Cinv, Cinv) - (J2 - 1.0) * icc);
  const FiberEval fa = eval_fiber(C, Ma, p.k1[0], p.k2[0], p.tension_only);
  const FiberEval fb = eval_fiber(C, Mb, p.k1[1], p.k2[1], p.tension_only);
  if (fa.active) {
    const Mat3 MM = Ma * Ma.transpose();
    cc += 4.0 * fa.ds * outer_voigt(MM, MM);
  }
  if (fb.active) {
    const Mat3 MM = Mb * Mb.transpose();
    cc += 4.0 * fb.ds * outer_voigt(MM, MM);
  }
  return cc;
}

Mat3 cauchy_from_pk2(const Mat3& F, const Mat3& S) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw std::invalid_argument("material: det F must be positive");
  return (F * S * F.transpose()) / J;
}

} // namespace stentsim
