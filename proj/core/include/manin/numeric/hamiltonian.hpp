#pragma once

// Hamiltonian spaces over an exact trivialized Courant algebroid: the
// canonical space X = S, strong-Dirac checks and the quasi-Poisson
// identities, on sampled chart points.
//
// Bivectors follow manin/dictionary.hpp: Pi(a, b) = a^T Pi b, i_a Pi = Pi^T a,
// and {f, g} = Pi(df, dg).

#include "manin/dictionary.hpp"
#include "manin/numeric/courant.hpp"
#include "manin/numeric/fiber.hpp"
#include "manin/numeric/so3.hpp"
#include "manin/splitting.hpp"

namespace manin::numeric {

/// K at x for X = S, J = Id: rows ((rho a_k, 0), a_k) and ((0, -e_i), rho^* e_i).
Mat canonical_k(const CourantNumeric& c, const Mat& a, const Vec& x);
/// Same rows over an exact fiber.
HamiltonianFiber canonical_fiber_exact(const PairFiber& pair);

/// Brackets of the generators a~ = ((rho a, 0), a) and b~ = ((0, -b), rho^* b)
/// in T S x E restricted to the diagonal, measured against K.
struct GeneratorBracketReport {
  Residual aa, ab, ba, bb;
  double worst() const { return std::max({aa.value, ab.value, ba.value, bb.value}); }
};
GeneratorBracketReport canonical_generator_brackets(const CourantNumeric& c, const Mat& a,
                                                    const std::vector<Vec>& points, const std::vector<Field>& one_forms,
                                                    double h = kDefaultStep);

/// max |d c(rho(x) a_k)| over constraints c cutting out an orbit and rows a_k.
double orbit_tangency(const CourantNumeric& c, const Mat& a, const std::vector<ScalarField>& constraints,
                      const std::vector<Vec>& points, double h = kDefaultStep);

/// so(3) (+) so(3) at a frozen rotation, in right-trivialized coordinates.
PairFiber frozen_so3_pair(const so3::FrozenPoint& p);
/// Exact isotropic section c - rho^*(c^T G c)/2, c = rho^T (rho rho^T)^{-1}.
ExactIdentification exact_isotropic_section(const PairFiber& pair);

/// Quasi-Poisson data on a chart of X. rho_astar(x) = rho(J x) j^T (b x m).
struct QuasiPoissonFields {
  std::size_t dim = 0;
  MatrixField pi;
  MatrixField rho_x;
  MatrixField dJ;
  MatrixField rho_astar;
};

/// F(k, i, l) and chi(i, l, p) as doubles.
struct QuasiTensors {
  std::size_t rank = 0;
  std::vector<double> F;
  std::vector<double> chi;
  static QuasiTensors from(const QuasiBialgebraData& q);
  double f(std::size_t k, std::size_t i, std::size_t l) const { return F[(k * rank + i) * rank + l]; }
  double x(std::size_t i, std::size_t l, std::size_t p) const { return chi[(i * rank + l) * rank + p]; }
};

struct QuasiPoissonReport {
  Residual qpois1;  // sum_cyc {f,{g,h}} = rho_X(chi)(df, dg, dh)
  Residual qpois2;  // L_{rho_X a_k} Pi = rho_X(d_* a_k), d_* a_k = -F(k, ., .)
  Residual qpois3;  // Pi^T dJ^T = rho_X rho_A*^T
  double scale1 = 0;  // largest |rho_X(chi)(df, dg, dh)| seen
  double scale2 = 0;  // largest |rho_X(d_* a_k)| seen
};

/// Test functions: coordinates, pairwise products and `extra`.
std::vector<ScalarField> jacobiator_functions(std::size_t dim, const std::vector<ScalarField>& extra = {});

QuasiPoissonReport check_quasi_poisson(const QuasiPoissonFields& q, const QuasiTensors& t,
                                       const std::vector<Vec>& points, const std::vector<ScalarField>& functions,
                                       double h = kDefaultStep);

/// max over triples of |sum_cyc {f,{g,h}}| for a Poisson bivector field.
Residual jacobiator_residual(const MatrixField& pi, const std::vector<Vec>& points,
                             const std::vector<ScalarField>& functions, double h = kDefaultStep);

/// X -> S Hamiltonian space given by a Dirac field L on X; Pi and rho_X are
/// recovered fiberwise through K = k_from_dirac(L) and K o j(A*).
struct DiracPipeline {
  CourantNumeric c;
  ExactSplittingNumeric split;
  Mat a;  // rank x dim E
  Mat j;  // rank x dim E
  std::size_t dim = 0;
  Field J;
  MatrixField dJ;
  SubspaceField L;

  PairData pair_at(const Vec& x) const;
  Mat k(const Vec& x) const;
  Mat pi(const Vec& x) const;
  Mat rho_x(const Vec& x) const;
  QuasiPoissonFields fields() const;
};

/// The canonical space X = S of an exact pair, L = L_S.
DiracPipeline canonical_pipeline(const CourantNumeric& c, const Mat& a, const Mat& j);
/// so(3) double over SO(3) with the splitting from make_isotropic_splitting.
DiracPipeline so3_canonical_pipeline();

/// Pullback J^* phi as a 3-form field on X.
FormField pullback_three_form(const FormField& phi, std::size_t base_dim, const Field& J, const MatrixField& dJ,
                              std::size_t dim);

struct StrongDiracNumericReport {
  std::vector<bool> transversal;  // ker dJ cap (L_X cap T) = 0
  std::vector<bool> forward;      // L_S inside F_J(L_X)
  double min_transversality = 0;  // smallest singular value of dJ on L_X cap T
  double forward_defect = 0;      // max distance of L_S rows from F_J(L_X)
  DiracFieldReport integrability;  // L_X against J^* phi
  bool pass(double tol) const;
};

/// Strong-Dirac conditions for J : X -> S at the points, L_X twisted by J^* phi.
StrongDiracNumericReport check_strong_dirac(const SubspaceField& lx, std::size_t dim, const Field& J,
                                            const MatrixField& dJ, const SubspaceField& ls, const FormField& phi,
                                            std::size_t base_dim, const std::vector<Vec>& points,
                                            double tol = kDefaultTol, double h = kDefaultStep);
/// L_X = F_J^{-1} side of a pipeline: dirac_from_k of its K, as a field.
SubspaceField induced_dirac(const DiracPipeline& p);

}  // namespace manin::numeric
