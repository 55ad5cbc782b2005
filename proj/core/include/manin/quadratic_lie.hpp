#pragma once

// Quadratic Lie algebras (Courant algebroids over a point), Lagrangian
// subalgebras and the builtin catalog of Manin pairs.

#include <string>
#include <vector>

#include "manin/exact_linear.hpp"

namespace manin {

/// Structure constants [e_i, e_j] = sum_k c(i,j,k) e_k with an invariant pairing.
class QuadraticLieAlgebra {
 public:
  QuadraticLieAlgebra() = default;
  QuadraticLieAlgebra(std::size_t dim, std::vector<Rational> constants, SplitForm form);
  /// Zero bracket on the given form.
  static QuadraticLieAlgebra abelian(SplitForm form);

  std::size_t dim() const { return dim_; }
  const SplitForm& form() const { return form_; }
  const std::vector<Rational>& constants() const { return c_; }
  const Rational& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }
  bool is_abelian() const;

  QVector bracket(std::span<const Rational> x, std::span<const Rational> y) const;
  QVector bracket_basis(std::size_t i, std::size_t j) const;
  /// Matrix of ad_x = [x, .].
  QMatrix ad(std::span<const Rational> x) const;

  friend bool operator==(const QuadraticLieAlgebra&, const QuadraticLieAlgebra&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Rational> c_;
  SplitForm form_;
};

/// Structure constants only (for the building blocks of doubles).
struct LieConstants {
  std::size_t dim = 0;
  std::vector<Rational> c;
  const Rational& at(std::size_t i, std::size_t j, std::size_t k) const { return c[(i * dim + j) * dim + k]; }
};

struct QuadraticLieReport {
  bool antisymmetric = true;
  bool jacobi = true;
  bool ad_invariant = true;
  bool nondegenerate = true;
  Signature signature;
  /// First failing basis index triple per failed axiom, e.g. "jacobi (0,1,2)".
  std::vector<std::string> failures;

  bool ok() const { return antisymmetric && jacobi && ad_invariant && nondegenerate; }
  bool lagrangian_ops_enabled() const { return ok() && signature.split(); }
};

QuadraticLieReport check_quadratic_lie(const QuadraticLieAlgebra& d);

/// Jacobi identity on bare structure constants; returns the first failing
/// triple as a string, or an empty string.
std::string jacobi_failure(const LieConstants& g);

struct ManinPairPoint {
  QuadraticLieAlgebra d;
  Subspace g;
  std::string name;
  /// Rank of the Lagrangian subalgebra.
  std::size_t rank() const { return g.dim(); }
};

/// [u, v] in U for all basis pairs of U.
bool is_subalgebra(const QuadraticLieAlgebra& d, const Subspace& u);

/// Lagrangian and bracket-closed. Throws SignatureError for a non-split form.
bool is_manin_pair(const QuadraticLieAlgebra& d, const Subspace& g);

/// d = g (+) g with pairing kappa (+) (-kappa) and the diagonal subalgebra.
/// Throws std::invalid_argument if kappa is not invariant or is degenerate.
ManinPairPoint make_group_pair_double(const LieConstants& g, const QMatrix& kappa);

/// Product of two pairs: d1 x d2 with the orthogonal sum pairing and g1 x g2.
ManinPairPoint direct_sum(const ManinPairPoint& a, const ManinPairPoint& b);

namespace catalog {

LieConstants so3();
QMatrix so3_killing_dot();
LieConstants sl2();
QMatrix sl2_trace_form();

/// R^{2n}, pairing diag(1,..,1,-1,..,-1), g = span(e_i + e_{n+i}).
ManinPairPoint abelian(std::size_t n);
ManinPairPoint so3_double();
ManinPairPoint sl2_double();
/// sl2 (+) sl2 with the non-unimodular Lagrangian subalgebra
/// span((h,-h), (e,0), (0,f)) in place of the diagonal.
ManinPairPoint sl2_double_standard();
/// Drinfeld double of the 2-dim bialgebra [e1,e2] = e2 with dual bracket
/// [f1,f2] = f2; basis (e1, e2, f1, f2), g = span(e1, e2).
ManinPairPoint bialgebra_double();

std::vector<std::string> names();
/// Throws std::out_of_range for an unknown name.
ManinPairPoint by_name(const std::string& name);

}  // namespace catalog

}  // namespace manin
