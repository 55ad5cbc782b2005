#pragma once

// Pointwise dictionary between quasi-Poisson data (Pi, rho_X), Hamiltonian
// fibers K and Dirac data L, all as exact linear algebra on one fiber.
//
// Conventions: a bivector is stored as a skew matrix Pi with i_alpha Pi =
// Pi^T alpha, so that i_alpha(u ^ v) = alpha(u) v - alpha(v) u. T (+) T*
// carries <(u,a),(u',a')> = a'(u) + a(u'), and E coordinates follow the
// target pair. For an exact fiber E = T_S (+) T_S* the isotropic section
// s : T_S -> E identifies e with (rho(e), s^*(e)), s^*(e) = s^T G e.

#include <string>

#include "manin/morphism.hpp"

namespace manin {

struct QuasiPoissonPointData {
  QMatrix Pi;     // n x n, skew
  QMatrix rho_X;  // n x rank(A)

  friend bool operator==(const QuasiPoissonPointData&, const QuasiPoissonPointData&) = default;
};

struct DiracPointData {
  Subspace L;  // inside T (+) T*
  friend bool operator==(const DiracPointData&, const DiracPointData&) = default;
};

struct ExactIdentification {
  QMatrix s;  // dim E x base_dim
};

/// Raised when a composed relation is not the graph of a bivector, naming the
/// failed strong-Dirac condition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// rho s = id, s isotropic, dim E = 2 base_dim.
bool check_identification(const PairFiber& pair, const ExactIdentification& id);
/// e -> (rho e, s^T G e) as a 2b x dim E matrix.
QMatrix exact_coordinates(const PairFiber& pair, const ExactIdentification& id);

/// K = {((rho_X a + i_alpha Pi, alpha), a - j(rho_X^* alpha))}.
HamiltonianFiber k_from_quasi(const QuasiPoissonPointData& q, const PairFiber& pair, const IsotropicSplitting& j,
                              const QMatrix& dJ);

/// i_alpha Pi as the unique u with ((u, alpha), -j(rho_X^* alpha)) in K, given rho_X.
QMatrix pi_by_uniqueness(const HamiltonianFiber& h, const IsotropicSplitting& j, const QMatrix& rho_x);
/// Pi from graph(Pi) = K o j(A*).
QMatrix pi_by_composition(const HamiltonianFiber& h, const IsotropicSplitting& j);
/// Both routes; throws InvalidFiberError if they disagree or either fails.
QuasiPoissonPointData pi_from_k(const HamiltonianFiber& h, const IsotropicSplitting& j);

/// K = {((u, alpha - dJ^T beta), s(dJ u) + rho^* beta) : (u, alpha) in L}.
HamiltonianFiber k_from_dirac(const DiracPointData& d, const QMatrix& dJ, const PairFiber& pair,
                              const ExactIdentification& id);
/// L = {(u, alpha + dJ^T s^*(e)) : ((u, alpha), e) in K, rho(e) = dJ u}.
DiracPointData dirac_from_k(const HamiltonianFiber& h, const ExactIdentification& id);

/// Closed form of the composite dirac_from_k o k_from_quasi, using
/// rho_bar = j^* s : T_S -> A.
DiracPointData l_from_quasi(const QuasiPoissonPointData& q, const PairFiber& pair, const IsotropicSplitting& j,
                            const ExactIdentification& id, const QMatrix& dJ);

/// L_S = {(rho a, s^* a) : a in A}.
Subspace dirac_of_pair_point(const PairFiber& pair, const ExactIdentification& id);

/// {(df u, beta) : (u, df^T beta) in L}; df is m x q.
Subspace forward_image(const Subspace& l, const QMatrix& df);
/// {(u, df^T beta) : (df u, beta) in L'}.
Subspace backward_image(const Subspace& l, const QMatrix& df);

struct StrongDiracReport {
  bool transversal = false;  // ker dJ cap (L cap T) = 0
  bool forward = false;      // L_S inside F_J(L)
  bool ok() const { return transversal && forward; }
  std::string failure() const;
};
StrongDiracReport check_strong_dirac_point(const Subspace& l, const QMatrix& dJ, const Subspace& l_s);

/// graph(Pi) = F(L) o A*; throws PreconditionError naming the failed condition.
QuasiPoissonPointData pi_from_dirac(const DiracPointData& d, const QMatrix& dJ, const PairFiber& pair,
                                    const ExactIdentification& id, const IsotropicSplitting& j);

struct SubcategoryReport {
  bool k_onto_tangent = false;
  bool l_is_form_graph = false;
  bool action_spans_tangent = false;
  bool agree() const { return k_onto_tangent == l_is_form_graph && l_is_form_graph == action_spans_tangent; }
};
SubcategoryReport subcategory_m(const HamiltonianFiber& h, const DiracPointData& d, const QuasiPoissonPointData& q);

}  // namespace manin
