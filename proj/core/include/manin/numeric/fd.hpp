#pragma once

// Double-precision fields on a chart and central finite differences.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace manin::numeric {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Vector-valued field on a chart (sections, vector fields, 1-forms).
using Field = std::function<Vec(const Vec&)>;
using ScalarField = std::function<double(const Vec&)>;
using MatrixField = std::function<Mat(const Vec&)>;

inline constexpr double kDefaultStep = 1e-4;
inline constexpr double kDefaultTol = 1e-6;

/// Central-difference Jacobian: column j is (f(x + h e_j) - f(x - h e_j)) / 2h.
Mat jacobian(const Field& f, const Vec& x, double h = kDefaultStep);
Vec gradient(const ScalarField& f, const Vec& x, double h = kDefaultStep);
/// Derivative of f along v at x, stepping h along v / |v|.
Vec directional(const Field& f, const Vec& x, const Vec& v, double h = kDefaultStep);
double directional(const ScalarField& f, const Vec& x, const Vec& v, double h = kDefaultStep);
/// d/dx_j of a matrix field, one matrix per coordinate.
std::vector<Mat> matrix_partials(const MatrixField& f, const Vec& x, double h = kDefaultStep);

/// Lie bracket of vector fields [v, w]^i = v^j d_j w^i - w^j d_j v^i.
Vec lie_bracket(const Field& v, const Field& w, const Vec& x, double h = kDefaultStep);

Field constant_field(Vec value);

/// Sample points in the open ball of the given radius, uniform in volume.
std::vector<Vec> sample_ball(std::size_t dim, double radius, std::size_t count, std::uint64_t seed);

double max_abs(const Vec& v);
double max_abs(const Mat& m);

/// Orthonormal basis (columns) of ker(m), treating singular values below
/// rel_tol * largest as zero.
Mat null_space(const Mat& m, double rel_tol = 1e-10);
/// Numerical rank with the same threshold convention.
Eigen::Index numerical_rank(const Mat& m, double rel_tol = 1e-10);

}  // namespace manin::numeric
