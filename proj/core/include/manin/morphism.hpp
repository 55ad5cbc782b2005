#pragma once

// Morphisms of Manin pairs over a point, and the pointwise data of a
// Hamiltonian space.

#include <stdexcept>
#include <string>

#include "manin/quadratic_lie.hpp"
#include "manin/splitting.hpp"

namespace manin {

/// Raised when a fiber violates a validity precondition (e.g. the action
/// vector of some a in A is not unique).
class InvalidFiberError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// K inside E1 (+) E2, Lagrangian for form1 (+) (-form2).
struct MorphismFiber {
  ManinPairPoint source;
  ManinPairPoint target;
  Subspace K;

  SplitForm form() const { return direct_sum(source.d.form(), target.d.form().negated()); }
};

bool same_pair(const ManinPairPoint& a, const ManinPairPoint& b);

struct MorphismValidity {
  bool lagrangian = false;
  bool closed = false;  // bracket closure in d1 x d2
  bool ok() const { return lagrangian && closed; }
};
MorphismValidity check_morphism_fiber(const MorphismFiber& m);

/// (p1, p2)(K) is the graph of a map A1* -> A2*.
bool check_morphism_def(const MorphismFiber& m);
/// K meets A1 (+) 0 trivially and K cap (A1 (+) E2) projects isomorphically onto A2.
bool check_morphism_equiv(const MorphismFiber& m);

MorphismFiber identity_morphism(const ManinPairPoint& pair);
/// Relation composite. Throws std::invalid_argument when the middle pairs differ.
MorphismFiber compose_morphisms(const MorphismFiber& m12, const MorphismFiber& m23);

/// Pointwise fiber of the target Manin pair: (E_x, A_x) with anchor E_x -> T_S.
struct PairFiber {
  SplitForm form;
  Subspace a;
  QMatrix anchor;  // base_dim x dim E

  std::size_t dim() const { return form.dim(); }
  std::size_t rank() const { return a.dim(); }
  std::size_t base_dim() const { return anchor.rows(); }
  /// rho^* : T_S^* -> E, beta -> G^{-1} rho^T beta (columns indexed by T_S^*).
  QMatrix anchor_dual() const;
  static PairFiber over_point(const ManinPairPoint& pair);
};

/// Pointwise Hamiltonian-space data at x: K inside (T (+) T*) (+) E_{J(x)},
/// ordered as (u, alpha, e). K is Lagrangian for <.,.>_std (+) <.,.>_E.
struct HamiltonianFiber {
  std::size_t tangent_dim = 0;
  PairFiber pair;
  QMatrix dJ;  // base_dim x tangent_dim
  Subspace K;

  std::size_t ambient_dim() const { return 2 * tangent_dim + pair.dim(); }
  SplitForm form() const { return direct_sum(SplitForm::tangent_cotangent(tangent_dim), pair.form); }
};

struct HamiltonianReport {
  bool lagrangian = false;
  bool support = false;       // dJ(u) = rho(e) on K
  bool transversal = false;   // K cap (T (+) 0 (+) 0) = 0
  bool onto_a = false;        // K cap (T (+) 0 (+) E) projects onto A isomorphically
  bool ok() const { return lagrangian && support && transversal && onto_a; }
  std::string failure() const;
};
HamiltonianReport check_hamiltonian_fiber(const HamiltonianFiber& h);

/// Viewed as a morphism (T (+) T*, T) -> (E, A): the source carries the
/// negated standard pairing and both brackets are taken abelian.
MorphismFiber as_morphism(const HamiltonianFiber& h);

/// rho_X as a tangent_dim x rank matrix (column k is the action of a_k).
/// Throws InvalidFiberError when some a_k has no or several action vectors.
QMatrix extract_action(const HamiltonianFiber& h);

/// Every alpha in T* occurs in K.
bool cotangent_surjective(const HamiltonianFiber& h);
/// Whether ((u, alpha), e) in K can be found with e in A.
bool alpha_admits_e_in_a(const HamiltonianFiber& h, std::span<const Rational> alpha);
/// K cap (0 (+) 0 (+) C) = 0 for a complement C of A in E.
bool transverse_to_complement(const HamiltonianFiber& h, const Subspace& complement);

}  // namespace manin
