#pragma once

// Isotropic splittings j : A* -> E and the induced quasi-bialgebra data.
//
// A is always described by the canonical basis rows a_k of its Subspace and
// A* by the dual basis xi^k. The identification A* = E/A uses
// <j(xi), a> = xi(a), so the projection p : E -> A* reads p(e)_k = <e, a_k>.
//
// For the double g (+) g with form kappa (+) (-kappa) and A the diagonal, this
// normalization gives xi(a) = 2 kappa(x_xi, x_a), and the produced splitting
// is the anti-diagonal j(xi^k) = (x, -x) with x = kappa^{-1} e_k / 2.

#include <string>
#include <vector>

#include "manin/exterior.hpp"
#include "manin/quadratic_lie.hpp"

namespace manin {

struct IsotropicSplitting {
  /// Row k is j(xi^k) in E coordinates.
  QMatrix images;
  std::size_t rank() const { return images.rows(); }
  /// j(xi) for xi given in the dual basis.
  QVector apply(std::span<const Rational> xi) const;
  Subspace image() const;
};

/// p(e) in the dual basis of A.
QVector dual_projection(const SplitForm& form, const Subspace& a, std::span<const Rational> e);

/// Echelon complement of A, normalized against A and corrected to be isotropic.
/// Throws std::invalid_argument when A is not Lagrangian.
IsotropicSplitting make_isotropic_splitting(const SplitForm& form, const Subspace& a);
IsotropicSplitting make_isotropic_splitting(const ManinPairPoint& pair);

/// Shifts j by a(Lambda): j'(xi^i) = j(xi^i) + sum_k lambda(i,k) a_k. Isotropy is
/// preserved iff lambda is skew.
IsotropicSplitting shift_splitting(const Subspace& a, const IsotropicSplitting& j, const QMatrix& lambda);

struct SplittingReport {
  bool isotropic = false;
  bool right_inverse = false;  // p o j = id
  bool ok() const { return isotropic && right_inverse; }
};
SplittingReport check_splitting(const SplitForm& form, const Subspace& a, const IsotropicSplitting& j);

/// Bracket of the subalgebra A in its canonical basis.
LieConstants subalgebra_constants(const ManinPairPoint& pair);

struct QuasiBialgebraData {
  std::size_t rank = 0;
  /// F(k, i, l) = <[j xi^i, j xi^l], a_k>.
  std::vector<Rational> F;
  /// chi(i, l, p) = <[j xi^i, j xi^l], j xi^p>.
  std::vector<Rational> chi;
  /// Anchor of A* (zero columns over a point).
  QMatrix rho_astar;

  const Rational& f(std::size_t k, std::size_t i, std::size_t l) const { return F[(k * rank + i) * rank + l]; }
  const Rational& x(std::size_t i, std::size_t l, std::size_t p) const { return chi[(i * rank + l) * rank + p]; }
  bool antisymmetric() const;
  /// chi as an element of the exterior algebra of A.
  Multivector chi_multivector() const;
  /// d_* a_k as a bivector: d_* a(xi, eta) = -a([xi, eta]_*), so the
  /// coefficient of a_i ^ a_l (i < l) is -F(k, i, l).
  Multivector differential(std::size_t k) const;

  friend bool operator==(const QuasiBialgebraData&, const QuasiBialgebraData&) = default;
};

QuasiBialgebraData derive_quasi_data(const ManinPairPoint& pair, const IsotropicSplitting& j);

struct QuasiJacobiReport {
  bool d_squared = true;  // d^2 = [chi, .] on monomials of degree 1..3
  bool d_chi = true;      // d chi = 0
  std::string failure;
  bool ok() const { return d_squared && d_chi; }
};

QuasiJacobiReport check_quasi_jacobi(const LieConstants& a_bracket, const QuasiBialgebraData& data);

/// Degree +1 derivation d_* of the exterior algebra of A.
Multivector apply_differential(const QuasiBialgebraData& data, const Multivector& p);
/// [chi, P] for the Schouten bracket of the Lie algebra A.
Multivector schouten_with_chi(const LieConstants& a_bracket, const QuasiBialgebraData& data, const Multivector& p);

}  // namespace manin
