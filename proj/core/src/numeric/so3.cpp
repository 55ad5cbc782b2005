#include "manin/numeric/so3.hpp"

#include <algorithm>
#include <cmath>

#include "manin/numeric/fiber.hpp"

namespace manin::numeric::so3 {

Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Eigen::Matrix3d rotation(const Eigen::Vector3d& theta) {
  const double t = theta.norm();
  const Eigen::Matrix3d k = hat(theta);
  double a, b;
  if (t < 1e-6) {
    a = 1 - t * t / 6;
    b = 0.5 - t * t / 24;
  } else {
    a = std::sin(t) / t;
    b = (1 - std::cos(t)) / (t * t);
  }
  return Eigen::Matrix3d::Identity() + a * k + b * k * k;
}

Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& theta) {
  const double t = theta.norm();
  const Eigen::Matrix3d k = hat(theta);
  double a, b;
  if (t < 1e-6) {
    a = 0.5 - t * t / 24;
    b = 1.0 / 6 - t * t / 120;
  } else {
    a = (1 - std::cos(t)) / (t * t);
    b = (t - std::sin(t)) / (t * t * t);
  }
  return Eigen::Matrix3d::Identity() + a * k + b * k * k;
}

Eigen::Matrix3d left_jacobian_inverse(const Eigen::Vector3d& theta) {
  const double t = theta.norm();
  const Eigen::Matrix3d k = hat(theta);
  double b;
  if (t < 1e-4) {
    b = 1.0 / 12 + t * t / 720;
  } else {
    b = 1 / (t * t) - (1 + std::cos(t)) / (2 * t * std::sin(t));
  }
  return Eigen::Matrix3d::Identity() - 0.5 * k + b * k * k;
}

Eigen::Vector3d log(const Eigen::Matrix3d& r) {
  const double c = std::clamp((r.trace() - 1) / 2, -1.0, 1.0);
  const double t = std::acos(c);
  const Eigen::Vector3d v(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  if (t < 1e-8) return v / 2;
  return v * (t / (2 * std::sin(t)));
}

Mat anchor_right_trivialized(const Eigen::Matrix3d& r) {
  Mat a(3, 6);
  a.leftCols(3) = -Eigen::Matrix3d::Identity();
  a.rightCols(3) = r;
  return a;
}

Mat dressing_anchor(const Vec& theta) {
  const Eigen::Vector3d t = theta.head<3>();
  return left_jacobian_inverse(t) * anchor_right_trivialized(rotation(t));
}

double trace(const Vec& theta) { return 1 + 2 * std::cos(theta.head<3>().norm()); }

QMatrix cayley(const std::array<Rational, 3>& q) {
  QMatrix k(3, 3);
  k(0, 1) = -q[2];
  k(0, 2) = q[1];
  k(1, 0) = q[2];
  k(1, 2) = -q[0];
  k(2, 0) = -q[1];
  k(2, 1) = q[0];
  const QMatrix id = QMatrix::identity(3);
  return *inverse(id - k) * (id + k);
}

FrozenPoint freeze(const Vec& theta, long den) {
  const Eigen::Vector3d t = theta.head<3>();
  const double angle = t.norm();
  const Eigen::Vector3d qd = angle < 1e-12 ? Eigen::Vector3d(t / 2) : Eigen::Vector3d(t * (std::tan(angle / 2) / angle));
  FrozenPoint f;
  for (int i = 0; i < 3; ++i) f.q[i] = rationalize(qd[i], den);
  f.rotation = cayley(f.q);
  f.theta = log(Eigen::Matrix3d(to_double(f.rotation)));
  return f;
}

}  // namespace manin::numeric::so3
