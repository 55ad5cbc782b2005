#include "manin/numeric/fiber.hpp"

#include <cmath>
#include <stdexcept>

namespace manin::numeric {

Mat to_double(const QMatrix& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

Rational rationalize(double x, long den) {
  Rational q(mpz_class(std::to_string(std::llround(x * static_cast<double>(den)))), mpz_class(den));
  q.canonicalize();
  return q;
}

QMatrix rationalize(const Mat& m, long den) {
  QMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = rationalize(m(i, j), den);
  return out;
}

Mat isotropic_section(const Mat& anchor, const Mat& gram) {
  const Mat c = anchor.transpose() * (anchor * anchor.transpose()).inverse();
  const Mat b = c.transpose() * gram * c;
  return c - 0.5 * gram.inverse() * anchor.transpose() * b;
}

Mat k_from_quasi(const Mat& pi, const Mat& rho_x, const PairData& p) {
  const Eigen::Index n = pi.rows(), m = p.a.rows(), e = p.gram.rows();
  Mat rows = Mat::Zero(m + n, 2 * n + e);
  for (Eigen::Index k = 0; k < m; ++k) {
    rows.block(k, 0, 1, n) = rho_x.col(k).transpose();
    rows.block(k, 2 * n, 1, e) = p.a.row(k);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    rows.block(m + i, 0, 1, n) = pi.row(i);
    rows(m + i, n + i) = 1;
    rows.block(m + i, 2 * n, 1, e) = -(rho_x.row(i) * p.j);
  }
  return rows;
}

Mat k_from_dirac(const Mat& l, const Mat& dJ, const PairData& p, const Mat& s) {
  const Eigen::Index n = l.cols() / 2, b = dJ.rows(), e = p.gram.rows();
  Mat rows = Mat::Zero(l.rows() + b, 2 * n + e);
  rows.leftCols(2 * n).topRows(l.rows()) = l;
  rows.block(0, 2 * n, l.rows(), e) = l.leftCols(n) * (s * dJ).transpose();
  const Mat rho_star = p.anchor_dual();
  for (Eigen::Index beta = 0; beta < b; ++beta) {
    rows.block(l.rows() + beta, n, 1, n) = -dJ.row(beta);
    rows.block(l.rows() + beta, 2 * n, 1, e) = rho_star.col(beta).transpose();
  }
  return rows;
}

Mat dirac_from_k(const Mat& k, std::size_t n_, const Mat& dJ, const PairData& p, const Mat& s) {
  const Eigen::Index n = static_cast<Eigen::Index>(n_), e = p.gram.rows();
  const Mat ku = k.leftCols(n), ke = k.rightCols(e);
  const Mat constraint = ke * p.anchor.transpose() - ku * dJ.transpose();  // r x b
  const Mat lambda = null_space(constraint.transpose());
  const Mat supported = lambda.transpose() * k;
  Mat out = supported.leftCols(2 * n);
  out.rightCols(n) += supported.rightCols(e) * p.gram * s * dJ;
  return row_basis(out);
}

Mat dirac_of_pair(const PairData& p, const Mat& s) {
  const Eigen::Index b = p.anchor.rows();
  Mat out(p.a.rows(), 2 * b);
  out.leftCols(b) = p.a * p.anchor.transpose();
  out.rightCols(b) = p.a * p.gram * s;
  return out;
}

Mat extract_action(const Mat& k, std::size_t n_, const PairData& p) {
  const Eigen::Index n = static_cast<Eigen::Index>(n_), e = p.gram.rows(), m = p.a.rows();
  const Mat rest = k.rightCols(n + e);  // (alpha, e) parts
  const auto qr = rest.transpose().colPivHouseholderQr();
  Mat rho(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    Vec rhs = Vec::Zero(n + e);
    rhs.tail(e) = p.a.row(c).transpose();
    const Vec lambda = qr.solve(rhs);
    if ((rest.transpose() * lambda - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm()))
      throw std::invalid_argument("extract_action: a_k has no action vector");
    rho.col(c) = k.leftCols(n).transpose() * lambda;
  }
  return rho;
}

Mat pi_by_composition(const Mat& k, std::size_t n_, const PairData& p) {
  const Eigen::Index n = static_cast<Eigen::Index>(n_), e = p.gram.rows();
  const Mat constraint = k.rightCols(e) * p.gram * p.j.transpose();  // r x m
  const Mat lambda = null_space(constraint.transpose());
  const Mat graph = lambda.transpose() * k.leftCols(2 * n);
  const Mat alpha = graph.rightCols(n);
  if (numerical_rank(alpha) < n) throw std::invalid_argument("pi_by_composition: not the graph of a bivector");
  return alpha.colPivHouseholderQr().solve(graph.leftCols(n));
}

double lagrangian_residual(const Vec& w, const Mat& basis, const Mat& gram) {
  return max_abs(Vec(basis * gram * w));
}

Mat standard_gram(std::size_t n_) {
  const Eigen::Index n = static_cast<Eigen::Index>(n_);
  Mat g = Mat::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = Mat::Identity(n, n);
  g.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return g;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Mat row_basis(const Mat& m, double rel_tol) {
  if (m.rows() == 0) return Mat(0, m.cols());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > rel_tol * std::max(s[0], 1.0)) ++r;
  return svd.matrixV().leftCols(r).transpose();
}

Mat forward_image(const Mat& l, const Mat& df) {
  const Eigen::Index q = df.cols(), m = df.rows(), r = l.rows();
  Mat system(q, r + m);
  system.leftCols(r) = l.rightCols(q).transpose();
  system.rightCols(m) = -df.transpose();
  const Mat params = null_space(system);
  Mat out(params.cols(), 2 * m);
  out.leftCols(m) = (df * l.leftCols(q).transpose() * params.topRows(r)).transpose();
  out.rightCols(m) = params.bottomRows(m).transpose();
  return row_basis(out);
}

Mat backward_image(const Mat& l, const Mat& df) {
  const Eigen::Index q = df.cols(), m = df.rows(), r = l.rows();
  Mat system(m, r + q);
  system.leftCols(r) = l.leftCols(m).transpose();
  system.rightCols(q) = -df;
  const Mat params = null_space(system);
  Mat out(params.cols(), 2 * q);
  out.leftCols(q) = params.bottomRows(q).transpose();
  out.rightCols(q) = (df.transpose() * l.rightCols(m).transpose() * params.topRows(r)).transpose();
  return row_basis(out);
}

}  // namespace manin::numeric
