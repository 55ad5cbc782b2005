#pragma once

// Admissible and invariant functions on a Hamiltonian space, their Poisson
// algebra, and reduction to the preimage of an orbit J^{-1}(O).
//
// u_f is the unique vector with ((u_f, df), 0) in K, and {f, g} = dg(u_f).

#include <optional>
#include <span>
#include <string>

#include "manin/morphism.hpp"
#include "manin/numeric/hamiltonian.hpp"

namespace manin {

/// Exact u_f at one fiber; nullopt when f is not admissible there. Throws
/// InvalidFiberError when K meets T (u_f not unique).
std::optional<QVector> hamiltonian_vector(const HamiltonianFiber& h, std::span<const Rational> df);

}  // namespace manin

namespace manin::numeric {

class TransversalityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InadmissibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ObservableFunction {
  std::string name;
  ScalarField value;
  Field analytic_gradient;  // may be empty

  double operator()(const Vec& x) const { return value(x); }
  /// Analytic gradient when supplied, central differences otherwise.
  Vec gradient(const Vec& x, double h = kDefaultStep) const;
};

ObservableFunction observable(std::string name, ScalarField f, Field grad = {});

/// Hamiltonian space sampled through its fiberwise K.
struct HamiltonianSpaceNumeric {
  std::string name;
  std::size_t dim = 0;       // dim X
  std::size_t base_dim = 0;  // dim S
  std::size_t e_dim = 0;     // dim E
  Field J;
  MatrixField dJ;     // base_dim x dim
  MatrixField k;      // rows of K in (u, alpha, e)
  MatrixField pi;     // Pi_X, for the i_{df} Pi route
  MatrixField rho_x;  // dim x rank

  static HamiltonianSpaceNumeric from_pipeline(const DiracPipeline& p, std::string name = {});
};

struct HamiltonianVector {
  bool admissible = false;
  Vec u;
  double residual = 0;  // |K-membership defect| of the least-squares solution
};

/// Solve ((u, df), 0) in K at one point. Throws InvalidFiberError if u is not
/// unique.
HamiltonianVector hamiltonian_vector(const Mat& k, std::size_t dim, const Vec& df, double tol = kDefaultTol);
HamiltonianVector hamiltonian_vector(const HamiltonianSpaceNumeric& s, const ObservableFunction& f, const Vec& x,
                                     double tol = kDefaultTol, double h = kDefaultStep);
/// x -> u_f(x); the least-squares solution is used even off the admissible set.
Field hamiltonian_field(const HamiltonianSpaceNumeric& s, const ObservableFunction& f, double h = kDefaultStep);

/// {f, g}(x) = dg(u_f). Throws InadmissibleError when f is not admissible at x.
double poisson_bracket(const HamiltonianSpaceNumeric& s, const ObservableFunction& f, const ObservableFunction& g,
                       const Vec& x, double tol = kDefaultTol, double h = kDefaultStep);
/// {f, g} as an observable with finite-difference gradient.
ObservableFunction bracket_function(const HamiltonianSpaceNumeric& s, const ObservableFunction& f,
                                    const ObservableFunction& g, double h = kDefaultStep);

struct InvariantCheck {
  std::vector<double> residual;  // max_k |L_{rho_X a_k} f|
  std::vector<bool> invariant;
  std::vector<bool> admissible;
  /// invariant == admissible at every sample.
  bool consistent() const { return invariant == admissible; }
  bool all_invariant() const;
};

InvariantCheck invariant_check(const HamiltonianSpaceNumeric& s, const ObservableFunction& f,
                               const std::vector<Vec>& points, double tol = kDefaultTol, double h = kDefaultStep);

struct PoissonAlgebraReport {
  Residual skew;        // {f, g} + {g, f}
  Residual pi_route;    // |u_f - Pi^T df|
  Residual anchor;      // |dJ u_f|
  Residual jacobi;      // sum_cyc {f, {g, k}}
  Residual commutator;  // |u_{f,g} - [u_f, u_g]|
  Residual closure;     // invariance defect of {f, g}
  double worst() const;
};

/// Every function must be invariant. The outer layer of each nested
/// derivative steps `nested_step` (0 means h).
PoissonAlgebraReport check_poisson_algebra(const HamiltonianSpaceNumeric& s,
                                           const std::vector<ObservableFunction>& functions,
                                           const std::vector<Vec>& points, double h = kDefaultStep,
                                           double nested_step = 0);

/// O near the samples as the zero set of constraints on S.
struct OrbitDescription {
  std::string name;
  std::vector<ObservableFunction> constraints;
  std::vector<Vec> samples;  // points of X on J^{-1}(O)
};

/// Constraint values c(J(x)) and their X-gradients (rows).
Vec preimage_constraints(const HamiltonianSpaceNumeric& s, const OrbitDescription& o, const Vec& x);
Mat preimage_jacobian(const HamiltonianSpaceNumeric& s, const OrbitDescription& o, const Vec& x,
                      double h = kDefaultStep);

/// Damped Newton projection of x onto J^{-1}(O) along minimum-norm steps.
std::optional<Vec> project_to_preimage(const HamiltonianSpaceNumeric& s, const OrbitDescription& o, Vec x,
                                       double tol = 1e-12, std::size_t max_iter = 50);
/// Project the seeds; seeds that fail to converge are dropped.
std::vector<Vec> sample_preimage(const HamiltonianSpaceNumeric& s, const OrbitDescription& o,
                                 const std::vector<Vec>& seeds);

struct ReductionReport {
  std::vector<double> brackets;  // {f, g} at the samples
  double min_transversality = 0;  // smallest singular value of D(c o J)
  Residual tangency;              // |D(c o J) rho_X a_k|
  Residual invariance;            // of f and g along the samples
  Residual extension;             // {f + psi (c o J), g} - {f, g}
  Residual restriction;           // bracket on the restricted fiber vs ambient
  double worst() const;
};

/// Reduced bracket of f and g on J^{-1}(O). `psi` multiplies the constraints
/// to build the second extension. Throws TransversalityError when D(c o J)
/// loses rank at a sample.
ReductionReport reduce_to_orbit(const HamiltonianSpaceNumeric& s, const OrbitDescription& o,
                                const ObservableFunction& f, const ObservableFunction& g,
                                const ObservableFunction& psi, double tol = kDefaultTol, double h = kDefaultStep);

/// u on J^{-1}(O) from K pulled back to T Y, Y = J^{-1}(O): solve
/// ((T w, alpha), 0) in K with T^T alpha = T^T df, T spanning ker D(c o J).
/// Returns T w.
Vec restricted_hamiltonian_vector(const Mat& k, std::size_t dim, const Mat& tangent, const Vec& df);

/// Symplectic R^2 with Pi = d_x ^ d_y over the zero pair.
HamiltonianSpaceNumeric symplectic_plane();
/// SO(3) x R^2: L_S times lambda d_{p1} ^ d_{p2} with lambda = 1 + (1 - cos|theta|)/2,
/// J the projection to SO(3). `j` selects the splitting (empty: the default).
HamiltonianSpaceNumeric so3_plane_space(const Mat& j = {});
/// The canonical space X = S of the so(3) double.
HamiltonianSpaceNumeric so3_canonical_space();

}  // namespace manin::numeric
