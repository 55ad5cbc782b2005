#include "manin/numeric/fd.hpp"

#include <cmath>
#include <random>

namespace manin::numeric {

Mat jacobian(const Field& f, const Vec& x, double h) {
  Vec probe = x;
  Mat jac;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    Vec plus = f(probe);
    probe[j] = x[j] - h;
    Vec minus = f(probe);
    probe[j] = x[j];
    if (j == 0) jac.resize(plus.size(), x.size());
    jac.col(j) = (plus - minus) / (2 * h);
  }
  return jac;
}

Vec gradient(const ScalarField& f, const Vec& x, double h) {
  Vec g(x.size());
  Vec probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const double plus = f(probe);
    probe[j] = x[j] - h;
    const double minus = f(probe);
    probe[j] = x[j];
    g[j] = (plus - minus) / (2 * h);
  }
  return g;
}

Vec directional(const Field& f, const Vec& x, const Vec& v, double h) {
  const double len = v.norm();
  if (len == 0) return Vec::Zero(f(x).size());
  const Vec step = v * (h / len);
  return (f(x + step) - f(x - step)) * (len / (2 * h));
}

double directional(const ScalarField& f, const Vec& x, const Vec& v, double h) {
  const double len = v.norm();
  if (len == 0) return 0;
  const Vec step = v * (h / len);
  return (f(x + step) - f(x - step)) * (len / (2 * h));
}

std::vector<Mat> matrix_partials(const MatrixField& f, const Vec& x, double h) {
  std::vector<Mat> out;
  Vec probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    Mat plus = f(probe);
    probe[j] = x[j] - h;
    Mat minus = f(probe);
    probe[j] = x[j];
    out.push_back((plus - minus) / (2 * h));
  }
  return out;
}

Vec lie_bracket(const Field& v, const Field& w, const Vec& x, double h) {
  return jacobian(w, x, h) * v(x) - jacobian(v, x, h) * w(x);
}

Field constant_field(Vec value) {
  return [value = std::move(value)](const Vec&) { return value; };
}

std::vector<Vec> sample_ball(std::size_t dim, double radius, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  std::vector<Vec> out;
  out.reserve(count);
  while (out.size() < count) {
    Vec dir(dim);
    for (auto& c : dir) c = normal(rng);
    const double len = dir.norm();
    if (len < 1e-12) continue;
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
    out.push_back(dir * (r / len));
  }
  return out;
}

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Mat null_space(const Mat& m, double rel_tol) {
  if (m.rows() == 0) return Mat::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s[0] : 0.0;
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > rel_tol * std::max(top, 1.0)) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

Eigen::Index numerical_rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > rel_tol * std::max(s[0], 1.0)) ++r;
  return r;
}

}  // namespace manin::numeric
