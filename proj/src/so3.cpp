#include "stentsim/so3.hpp"

#include <cmath>

namespace stentsim::so3 {

namespace {

// Scalar coefficient functions with series branches near theta = 0.
// a1 = (1-cos)/t^2, a2 = (t-sin)/t^3, c = (1 - (t/2)cot(t/2))/t^2,
// plus the ratios a1'/t, a2'/t, c'/t needed by the derivative kernels.
constexpr double kSeriesTol = 1e-4;

double coef_a1(double t)
{
  if (t < kSeriesTol) return 0.5 - t * t / 24.0;
  return (1.0 - std::cos(t)) / (t * t);
}

double coef_a2(double t)
{
  if (t < kSeriesTol) return 1.0 / 6.0 - t * t / 120.0;
  return (t - std::sin(t)) / (t * t * t);
}

double coef_c(double t)
{
  if (t < kSeriesTol) return 1.0 / 12.0 + t * t / 720.0;
  const double h = 0.5 * t;
  return (1.0 - h * std::cos(h) / std::sin(h)) / (t * t);
}

double coef_da1(double t) // a1'(t)/t
{
  if (t < kSeriesTol) return -1.0 / 12.0 + t * t / 180.0;
  const double t2 = t * t;
  return (std::sin(t) / t2 - 2.0 * (1.0 - std::cos(t)) / (t2 * t)) / t;
}

double coef_da2(double t) // a2'(t)/t
{
  if (t < kSeriesTol) return -1.0 / 60.0 + t * t / 1260.0;
  const double t3 = t * t * t;
  return ((1.0 - std::cos(t)) / t3 - 3.0 * (t - std::sin(t)) / (t3 * t)) / t;
}

double coef_dc(double t) // c'(t)/t
{
  if (t < kSeriesTol) return 1.0 / 360.0 + t * t / 7560.0;
  const double h = 0.5 * t;
  const double s = std::sin(h);
  const double dc = -2.0 / (t * t * t) + 1.0 / (4.0 * t * s * s)
                    + std::cos(h) / (2.0 * t * t * s);
  return dc / t;
}

} // namespace

Mat3 hat(const Vec3& a)
{
  Mat3 m;
  m << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& a) { return Vec3(a(2, 1), a(0, 2), a(1, 0)); }

Quat exp_quat(const Vec3& phi)
{
  const double t = phi.norm();
  double s; // sin(t/2)/t
  if (t < kSeriesTol)
    s = 0.5 - t * t / 48.0;
  else
    s = std::sin(0.5 * t) / t;
  Quat q;
  q.w() = std::cos(0.5 * t);
  q.vec() = s * phi;
  return q;
}

Mat3 exp_matrix(const Vec3& phi)
{
  const double t = phi.norm();
  const Mat3 s = hat(phi);
  double sc; // sin(t)/t
  if (t < kSeriesTol)
    sc = 1.0 - t * t / 6.0;
  else
    sc = std::sin(t) / t;
  return Mat3::Identity() + sc * s + coef_a1(t) * s * s;
}

Vec3 log_quat(const Quat& q_in)
{
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  const Vec3 v = q.vec();
  const double s = v.norm();
  if (s < 1e-12) return 2.0 * v; // w ~ 1
  const double t = 2.0 * std::atan2(s, q.w());
  return (t / s) * v;
}

Vec3 log_matrix(const Mat3& r) { return log_quat(Quat(r)); }

Mat3 tangent(const Vec3& phi)
{
  const double t = phi.norm();
  const Mat3 s = hat(phi);
  return Mat3::Identity() - coef_a1(t) * s + coef_a2(t) * s * s;
}

Mat3 tangent_inverse(const Vec3& phi)
{
  const double t = phi.norm();
  const Mat3 s = hat(phi);
  return Mat3::Identity() + 0.5 * s + coef_c(t) * s * s;
}

Mat3 dtangent_transpose(const Vec3& phi, const Vec3& a)
{
  const double t = phi.norm();
  const double a1 = coef_a1(t), a2 = coef_a2(t);
  const double da1 = coef_da1(t), da2 = coef_da2(t);
  const Vec3 pxa = phi.cross(a);
  const Vec3 ppa = phi.cross(pxa); // hat(phi)^2 a
  Mat3 g = -a1 * hat(a);
  g += a2 * (phi.dot(a) * Mat3::Identity() + phi * a.transpose()
             - 2.0 * a * phi.transpose());
  g += da1 * pxa * phi.transpose();
  g += da2 * ppa * phi.transpose();
  return g;
}

Mat3 dtangent_inverse_transpose(const Vec3& phi, const Vec3& m)
{
  const double t = phi.norm();
  const double c = coef_c(t), dc = coef_dc(t);
  const Vec3 ppm = phi.cross(phi.cross(m));
  Mat3 h = 0.5 * hat(m);
  h += c * (phi.dot(m) * Mat3::Identity() + phi * m.transpose()
            - 2.0 * m * phi.transpose());
  h += dc * ppm * phi.transpose();
  return h;
}

} // namespace stentsim::so3
