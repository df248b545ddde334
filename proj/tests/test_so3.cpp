#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stentsim/so3.hpp"

#include <random>

using namespace stentsim;

namespace {

std::mt19937 rng(20240816);

Vec3 random_vec(double scale)
{
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vec3 v(d(rng), d(rng), d(rng));
  if (v.norm() < 1e-12) v = Vec3::UnitX();
  std::uniform_real_distribution<double> m(0.1, 1.0);
  return (scale * m(rng)) * v.normalized(); // norm <= scale (branch-safe)
}

} // namespace

TEST_CASE("exp/log roundtrip across magnitudes")
{
  for (double scale : {1e-10, 1e-6, 1e-3, 0.1, 1.0, 3.0}) {
    for (int i = 0; i < 20; ++i) {
      const Vec3 phi = random_vec(scale);
      const Vec3 back = so3::log_quat(so3::exp_quat(phi));
      CHECK((back - phi).norm() <= 1e-12 * std::max(1.0, phi.norm()) + 1e-15);
      const Mat3 r = so3::exp_matrix(phi);
      CHECK((r * r.transpose() - Mat3::Identity()).norm() < 1e-13);
      CHECK((so3::exp_quat(phi).toRotationMatrix() - r).norm() < 1e-13);
    }
  }
}

TEST_CASE("log near pi stays bounded and consistent")
{
  for (int i = 0; i < 20; ++i) {
    Vec3 axis = random_vec(1.0).normalized();
    const Vec3 phi = (M_PI - 1e-7) * axis;
    const Vec3 back = so3::log_matrix(so3::exp_matrix(phi));
    CHECK((back - phi).norm() < 1e-6);
  }
}

// Convention oracle: R^T dR = hat(T(phi) dphi), checked by finite differences
// of the exponential map.
TEST_CASE("tangent map convention and inverse")
{
  const double eps = 1e-7;
  for (double scale : {1e-5, 0.3, 1.5, 2.8}) {
    for (int i = 0; i < 10; ++i) {
      const Vec3 phi = random_vec(scale);
      const Mat3 t = so3::tangent(phi);
      CHECK((so3::tangent_inverse(phi) * t - Mat3::Identity()).norm() < 1e-10);
      const Mat3 r = so3::exp_matrix(phi);
      for (int k = 0; k < 3; ++k) {
        Vec3 dphi = Vec3::Zero();
        dphi[k] = eps;
        const Mat3 rp = so3::exp_matrix(phi + dphi);
        const Mat3 rm = so3::exp_matrix(phi - dphi);
        const Vec3 omega = so3::vee(r.transpose() * (rp - rm) / (2.0 * eps));
        CHECK((omega - t.col(k)).norm() < 1e-6 * std::max(1.0, t.col(k).norm()));
      }
    }
  }
}

TEST_CASE("derivative kernels match finite differences")
{
  const double eps = 1e-6;
  for (double scale : {1e-6, 1e-3, 0.2, 1.0, 2.9}) {
    for (int i = 0; i < 10; ++i) {
      const Vec3 phi = random_vec(scale);
      const Vec3 a = random_vec(1.0);

      const Mat3 g = so3::dtangent_transpose(phi, a);
      const Mat3 h = so3::dtangent_inverse_transpose(phi, a);
      for (int k = 0; k < 3; ++k) {
        Vec3 dp = Vec3::Zero();
        dp[k] = eps;
        const Vec3 gfd = (so3::tangent(phi + dp).transpose() * a
                          - so3::tangent(phi - dp).transpose() * a) / (2.0 * eps);
        const Vec3 hfd = (so3::tangent_inverse(phi + dp).transpose() * a
                          - so3::tangent_inverse(phi - dp).transpose() * a) / (2.0 * eps);
        CHECK((g.col(k) - gfd).norm() < 2e-6 * std::max(1.0, gfd.norm()));
        CHECK((h.col(k) - hfd).norm() < 2e-6 * std::max(1.0, hfd.norm()));
      }
    }
  }
}

TEST_CASE("tangent leaves the axis invariant")
{
  for (int i = 0; i < 20; ++i) {
    const Vec3 phi = random_vec(2.0);
    CHECK((so3::tangent(phi) * phi - phi).norm() < 1e-12 * std::max(1.0, phi.norm()));
  }
}
