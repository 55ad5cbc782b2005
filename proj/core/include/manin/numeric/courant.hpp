#pragma once

// Courant algebroids on a trivialized bundle over a chart, evaluated with
// central finite differences.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "manin/numeric/fd.hpp"
#include "manin/quadratic_lie.hpp"

namespace manin::numeric {

/// Bracket evaluator on sections of the trivialized bundle.
using BracketFn = std::function<Vec(const Field&, const Field&, const Vec&, double)>;

/// 3-form field with components phi[(i n + j) n + k].
using FormField = Field;

struct CourantNumeric {
  std::string name;
  std::size_t base_dim = 0;
  std::size_t rank = 0;
  Mat gram;
  Mat gram_inv;
  MatrixField anchor;  // base_dim x rank
  BracketFn bracket_fn;

  Vec bracket(const Field& a, const Field& b, const Vec& x, double h = kDefaultStep) const {
    return bracket_fn(a, b, x, h);
  }
  Field bracket_field(Field a, Field b, double h = kDefaultStep) const;
  double pairing(const Vec& a, const Vec& b) const { return a.dot(gram * b); }
  /// rho^* = G^{-1} rho^T.
  Mat anchor_dual(const Vec& x) const { return gram_inv * anchor(x).transpose(); }
  /// x -> rho(x) e(x).
  Field anchor_field(Field e) const;
  /// x -> rho^*(x) beta(x).
  Field dual_field(Field beta) const;
};

class NotClosedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AxiomError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Constant 3-form c dx^i ^ dx^j ^ dx^k on R^n, all orderings filled.
FormField constant_three_form(std::size_t n, std::size_t i, std::size_t j, std::size_t k, double c = 1);
/// Fill all six orderings of one component set through `value`.
FormField three_form(std::size_t n, std::function<double(const Vec&, std::size_t, std::size_t, std::size_t)> value);
/// max |d phi| over index quadruples at x.
double closedness_residual(const FormField& phi, std::size_t n, const Vec& x, double h = kDefaultStep);

/// T (+) T* with ([v,v'], L_v a' - i_v' d a + i_v' i_v phi) and the projection
/// to T as anchor. An empty phi means untwisted. Throws NotClosedError if phi
/// fails closedness at one of the points.
CourantNumeric make_standard_twisted(std::size_t dim, FormField phi, const std::vector<Vec>& points,
                                     double tol = kDefaultTol, double h = kDefaultStep);
/// Same bracket without the closedness gate (negative controls).
CourantNumeric make_standard_unchecked(std::size_t dim, FormField phi);

/// d x S with [e1,e2]_d + L_{rho e1} e2 - L_{rho e2} e1 + rho^* <d e1, e2>.
/// `anchor` is the infinitesimal dressing action on the chart of S. With
/// nonempty `validate_at`, the axioms are checked there and AxiomError is
/// thrown on failure.
CourantNumeric make_dressing_courant(const ManinPairPoint& pair, std::size_t base_dim, MatrixField anchor,
                                     const std::vector<Vec>& validate_at = {}, double tol = kDefaultTol,
                                     double h = kDefaultStep);
/// so(3) (+) so(3) over SO(3) in exponential coordinates.
CourantNumeric make_so3_dressing(const std::vector<Vec>& validate_at = {});

/// Sections, 1-forms and functions used by the axiom checks.
struct SectionLibrary {
  std::vector<Field> sections;
  std::vector<std::string> section_names;
  std::vector<Field> one_forms;
  std::vector<ScalarField> functions;

  /// Constants, coordinate-linear sections and one quadratic section.
  static SectionLibrary standard(std::size_t base_dim, std::size_t rank);
};

struct Residual {
  double value = 0;
  std::size_t point = 0;
  std::array<std::size_t, 3> items{};  // section / function indices
  void update(double v, std::size_t p, std::array<std::size_t, 3> it) {
    if (v > value) *this = {v, p, it};
  }
};

struct AxiomReport {
  Residual c1, c2, c3, c4, c5;
  Residual rho_rho_star;
  Residual dual_bracket;  // [[rho^* b, rho^* b']]
  double tol = kDefaultTol;

  bool pass() const;
  double worst() const;
  /// Named residuals in the order c1..c5, rho_rho_star, dual_bracket.
  std::vector<std::pair<std::string, const Residual*>> entries() const;
};

AxiomReport check_axioms_numeric(const CourantNumeric& c, const std::vector<Vec>& points, const SectionLibrary& lib,
                                 double tol = kDefaultTol, double h = kDefaultStep);
/// Throws AxiomError with the worst axiom when the report fails.
void require_axioms(const CourantNumeric& c, const std::vector<Vec>& points, double tol = kDefaultTol,
                    double h = kDefaultStep);

/// |B(h) - B(h/2)| / |B(h/2) - B(h/4)| for the bracket of two sections at x;
/// close to 4 for a second-order scheme.
double convergence_ratio(const CourantNumeric& c, const Field& a, const Field& b, const Vec& x, double h);

/// Isotropic splitting s : T_S -> E and its 3-form.
struct ExactSplittingNumeric {
  MatrixField s;    // rank x base_dim
  FormField phi;    // phi_S(v1,v2,v3) = <s v1, [[s v2, s v3]]>
};

/// Throws std::invalid_argument if rank != 2 base_dim.
ExactSplittingNumeric make_exact_splitting(const CourantNumeric& c, double h = kDefaultStep);

struct SplittingResiduals {
  double right_inverse = 0;  // |rho s - I|
  double isotropy = 0;       // |s^T G s|
  double closedness = 0;     // |d phi_S|
};
SplittingResiduals check_exact_splitting(const CourantNumeric& c, const ExactSplittingNumeric& split,
                                         const std::vector<Vec>& points, double h = kDefaultStep);

/// Subspace field: rows span a subspace of T (+) T* at each point.
using SubspaceField = MatrixField;

/// x -> P(x) ref with P the orthogonal projector onto rows of l(x); smooth
/// whenever l is, unlike the raw basis.
Field projected_section(SubspaceField l, Vec ref);

struct DiracFieldReport {
  double lagrangian = 0;     // |L G_std L^T|
  double integrability = 0;  // |<[[l_a, l_b]]_phi, l_c>|
  std::size_t rank_drops = 0;
  bool pass(double tol) const { return rank_drops == 0 && lagrangian < tol && integrability < tol; }
};

/// L_S = {(rho a, s^* a)} for the constant rows of `a`.
SubspaceField dirac_of_pair(const CourantNumeric& c, const Mat& a, const ExactSplittingNumeric& split);
/// Lagrangian and integrable for the standard bracket twisted by phi.
DiracFieldReport check_dirac_field(const SubspaceField& l, std::size_t n, const FormField& phi,
                                   const std::vector<Vec>& points, double h = kDefaultStep);

}  // namespace manin::numeric
