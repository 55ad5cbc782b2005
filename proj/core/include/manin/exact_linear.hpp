#pragma once

// Exact linear algebra over Q: canonical subspaces, symmetric pairings and
// linear relations. Every fiber-level object of the library (Dirac structures,
// morphism fibers, graphs) is a Subspace of some coordinate space.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "manin/rational.hpp"

namespace manin {

class DegenerateFormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a Lagrangian-type query is made against a non-split form.
class SignatureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear subspace of Q^n stored by its reduced row-echelon basis; equality of
/// subspaces is equality of bases.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim), basis_(0, ambient_dim) {}

  /// Span of the rows of `rows` (rows.cols() must equal ambient_dim).
  static Subspace span(std::size_t ambient_dim, const QMatrix& rows);
  static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim); }
  static Subspace full(std::size_t ambient_dim);
  /// Span of the coordinate vectors e_first .. e_{first+count-1}.
  static Subspace coordinate(std::size_t ambient_dim, std::size_t first, std::size_t count);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const QMatrix& basis() const { return basis_; }
  std::span<const std::size_t> pivots() const { return pivots_; }

  bool contains(std::span<const Rational> v) const;
  bool contains(const Subspace& other) const;
  /// Coordinates of v in basis(); nullopt when v is not in the subspace.
  std::optional<QVector> coordinates(std::span<const Rational> v) const;

  Subspace intersect(const Subspace& other) const;
  Subspace sum(const Subspace& other) const;
  /// Rows spanning {c : c . u = 0 for all u in this}.
  QMatrix annihilator() const;
  /// Image under the linear map x -> map * x (map is target_dim x ambient_dim).
  Subspace image(const QMatrix& map) const;
  /// {x : map * x in target}.
  static Subspace preimage(const QMatrix& map, const Subspace& target);
  /// Coordinate vectors completing basis() to a basis of the ambient space.
  QMatrix echelon_completion() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_ = 0;
  QMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Span of `rows` in canonical form. Throws DimensionError on ragged input.
Subspace canonicalize(std::span<const QVector> rows, std::size_t ambient_dim);

/// Image of U under the coordinate projection onto [first, first + count).
Subspace coordinate_projection(const Subspace& u, std::size_t first, std::size_t count);
/// U placed at coordinates [offset, offset + dim) of a larger space.
Subspace embed(const Subspace& u, std::size_t ambient_dim, std::size_t offset);
/// Some vector of U whose entries at `cols` equal `values`, if one exists.
std::optional<QVector> find_with_components(const Subspace& u, std::span<const std::size_t> cols,
                                            std::span<const Rational> values);
/// Column indices first, first + 1, ..., first + count - 1.
std::vector<std::size_t> index_range(std::size_t first, std::size_t count);

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  bool split() const { return zero == 0 && positive == negative; }
  std::string to_string() const;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Signature of a symmetric matrix by exact congruence diagonalization.
Signature signature_of(const QMatrix& symmetric);

/// Symmetric bilinear form on Q^n given by its Gram matrix.
class SplitForm {
 public:
  SplitForm() = default;
  explicit SplitForm(QMatrix gram);

  /// Pairing <(v,a),(v',a')> = a'(v) + a(v') on Q^n (+) (Q^n)^*.
  static SplitForm tangent_cotangent(std::size_t n);
  static SplitForm diagonal(std::span<const Rational> entries);

  std::size_t dim() const { return gram_.rows(); }
  const QMatrix& gram() const { return gram_; }
  Rational pair(std::span<const Rational> u, std::span<const Rational> v) const;
  Signature signature() const;
  bool nondegenerate() const;
  SplitForm negated() const { return SplitForm(-gram_); }

  friend bool operator==(const SplitForm&, const SplitForm&) = default;

 private:
  QMatrix gram_;
};

SplitForm direct_sum(const SplitForm& a, const SplitForm& b);

/// U^perp with respect to the form. Throws DegenerateFormError if the Gram
/// matrix is singular.
Subspace orthogonal_complement(const SplitForm& form, const Subspace& u);
bool is_isotropic(const SplitForm& form, const Subspace& u);
/// True iff U is isotropic of half dimension. Throws SignatureError when the
/// form is not of split signature (n, n).
bool is_lagrangian(const SplitForm& form, const Subspace& u);

/// Relation between Q^source and Q^target stored as its graph in
/// Q^source (+) Q^target (source coordinates first).
class LinearRelation {
 public:
  LinearRelation() = default;
  LinearRelation(std::size_t source_dim, std::size_t target_dim, Subspace graph);

  /// Graph of x -> map * x; map is target_dim x source_dim.
  static LinearRelation graph_of(const QMatrix& map);
  static LinearRelation identity(std::size_t n);

  std::size_t source_dim() const { return source_; }
  std::size_t target_dim() const { return target_; }
  const Subspace& graph() const { return graph_; }
  LinearRelation transpose() const;

  friend bool operator==(const LinearRelation&, const LinearRelation&) = default;

 private:
  std::size_t source_ = 0;
  std::size_t target_ = 0;
  Subspace graph_;
};

/// {(v, z) : exists w, (v, w) in r and (w, z) in s}.
LinearRelation compose(const LinearRelation& r, const LinearRelation& s);

enum class Factor { source, target };

/// If the projection of r onto `factor` is an isomorphism, the linear map
/// whose graph is r (source->target for Factor::source, target->source for
/// Factor::target). Otherwise nullopt.
std::optional<QMatrix> is_graph_over_factor(const LinearRelation& r, Factor factor);

}  // namespace manin
