#pragma once

// SO(3) in exponential coordinates, as the base S = D/G of the double
// so(3) (+) so(3) with the diagonal subalgebra.
//
// Identification: (a, b)G -> a b^{-1}. D acts by c -> a c b^{-1}; the anchor is
// minus the action generator, which in right-trivialized tangent coordinates
// (w with dc c^{-1} = hat(w)) reads rho(x, y) = R y - x. In the chart,
// theta_dot = J_l(theta)^{-1} w.

#include <array>

#include "manin/numeric/fd.hpp"
#include "manin/rational.hpp"

namespace manin::numeric::so3 {

/// Chart radius: the exponential chart is used on |theta| < pi - 0.2.
inline constexpr double kChartRadius = 3.141592653589793 - 0.2;

Eigen::Matrix3d hat(const Eigen::Vector3d& v);
Eigen::Matrix3d rotation(const Eigen::Vector3d& theta);
Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& theta);
Eigen::Matrix3d left_jacobian_inverse(const Eigen::Vector3d& theta);
/// Rotation angle in [0, pi] and axis-angle vector of R.
Eigen::Vector3d log(const Eigen::Matrix3d& r);

/// [-I, R]: anchor in right-trivialized tangent coordinates.
Mat anchor_right_trivialized(const Eigen::Matrix3d& r);
/// J_l^{-1} [-I, R(theta)] as a 3 x 6 matrix field on the chart.
Mat dressing_anchor(const Vec& theta);
/// Trace function tr R(theta) = 1 + 2 cos|theta|.
double trace(const Vec& theta);

/// Rational rotation (I - hat q)^{-1} (I + hat q): rotation by 2 atan|q| about q.
QMatrix cayley(const std::array<Rational, 3>& q);

/// A chart point replaced by a nearby rotation with exact rational entries.
struct FrozenPoint {
  std::array<Rational, 3> q;  // Cayley parameter
  QMatrix rotation;           // exact
  Eigen::Vector3d theta;      // chart coordinates of `rotation`
};
FrozenPoint freeze(const Vec& theta, long den = 1L << 16);

}  // namespace manin::numeric::so3
