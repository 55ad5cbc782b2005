#pragma once

// Floating-point counterparts of the pointwise dictionary, used to evaluate
// fields (Pi, rho_X, L) at finite-difference probe points. Conventions match
// manin/dictionary.hpp; subspaces are spanned by matrix rows.

#include "manin/numeric/fd.hpp"
#include "manin/rational.hpp"

namespace manin::numeric {

Mat to_double(const QMatrix& m);
/// Nearest fraction with denominator dividing `den`.
Rational rationalize(double x, long den = 1L << 20);
QMatrix rationalize(const Mat& m, long den = 1L << 20);

/// Pointwise target data: E with constant gram, A and j(A*) by rows, anchor
/// rho (b x dim E) at the base point.
struct PairData {
  Mat gram;
  Mat a;         // rank x dim E
  Mat j;         // rank x dim E, row k = j(xi^k)
  Mat anchor;    // b x dim E
  Mat anchor_dual() const { return gram.inverse() * anchor.transpose(); }
};

/// Isotropic right inverse of rho: c - rho^*(c^T G c)/2 with c the
/// Euclidean pseudo-inverse. Requires rho rho^* = 0 and rho onto.
Mat isotropic_section(const Mat& anchor, const Mat& gram);

/// Rows [rho_X e_k, 0, a_k] and [Pi row i, e_i, -j(rho_X^T e_i)].
Mat k_from_quasi(const Mat& pi, const Mat& rho_x, const PairData& p);
/// Rows [(u, alpha), s dJ u] for rows of L and [(0, -dJ^T e_b), rho^* e_b].
Mat k_from_dirac(const Mat& l, const Mat& dJ, const PairData& p, const Mat& s);
/// {(u, alpha + dJ^T s^T G e) : ((u, alpha), e) in K, rho e = dJ u}.
Mat dirac_from_k(const Mat& k, std::size_t n, const Mat& dJ, const PairData& p, const Mat& s);
/// (rho a, s^T G a) for the rows a of A.
Mat dirac_of_pair(const PairData& p, const Mat& s);

/// rho_X from ((u, 0), a_k) in K; n x rank.
Mat extract_action(const Mat& k, std::size_t n, const PairData& p);
/// Pi from graph(Pi) = K o j(A*).
Mat pi_by_composition(const Mat& k, std::size_t n, const PairData& p);

/// max over rows c of |<w, basis_c>| for the pairing `gram`; zero iff w lies in
/// the Lagrangian subspace spanned by `basis`.
double lagrangian_residual(const Vec& w, const Mat& basis, const Mat& gram);
/// Pairing of T (+) T* (dim 2n).
Mat standard_gram(std::size_t n);
Mat block_diag(const Mat& a, const Mat& b);
/// Orthonormal rows spanning the row space of m.
Mat row_basis(const Mat& m, double rel_tol = 1e-10);

/// {(df u, beta) : (u, df^T beta) in L}; rows of L in T (+) T* with dim 2q.
Mat forward_image(const Mat& l, const Mat& df);
/// {(u, df^T beta) : (df u, beta) in L'}.
Mat backward_image(const Mat& l, const Mat& df);

}  // namespace manin::numeric
