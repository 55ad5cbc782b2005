#include "manin/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "manin/quadratic_lie.hpp"

namespace manin {

std::optional<QVector> hamiltonian_vector(const HamiltonianFiber& h, std::span<const Rational> df) {
  const std::size_t n = h.tangent_dim, e = h.pair.dim();
  if (df.size() != n) throw DimensionError("hamiltonian_vector: df has wrong length");
  if (h.K.intersect(Subspace::coordinate(h.ambient_dim(), 0, n)).dim() != 0)
    throw InvalidFiberError("hamiltonian_vector: K meets T, u_f is not unique");
  QVector values(n + e);
  std::copy(df.begin(), df.end(), values.begin());
  const auto v = find_with_components(h.K, index_range(n, n + e), values);
  if (!v) return std::nullopt;
  return QVector(v->begin(), v->begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace manin

namespace manin::numeric {

namespace {

// Least-squares u with ((u, df), 0) in K; no uniqueness check.
HamiltonianVector solve_u(const Mat& k, std::size_t dim, const Vec& df, double tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim), e = k.cols() - 2 * n;
  const Mat rest = k.rightCols(n + e).transpose();
  Vec rhs = Vec::Zero(n + e);
  rhs.head(n) = df;
  const Vec lambda = rest.completeOrthogonalDecomposition().solve(rhs);
  HamiltonianVector out;
  out.residual = (rest * lambda - rhs).norm() / std::max(1.0, df.norm());
  out.admissible = out.residual < tol;
  out.u = k.leftCols(n).transpose() * lambda;
  return out;
}

double min_singular_value(const Mat& m) {
  if (m.rows() == 0) return INFINITY;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()[svd.singularValues().size() - 1];
}

}  // namespace

Vec ObservableFunction::gradient(const Vec& x, double h) const {
  if (analytic_gradient) return analytic_gradient(x);
  return numeric::gradient(value, x, h);
}

ObservableFunction observable(std::string name, ScalarField f, Field grad) {
  return {std::move(name), std::move(f), std::move(grad)};
}

HamiltonianSpaceNumeric HamiltonianSpaceNumeric::from_pipeline(const DiracPipeline& p, std::string name) {
  HamiltonianSpaceNumeric s;
  s.name = name.empty() ? p.c.name : std::move(name);
  s.dim = p.dim;
  s.base_dim = p.c.base_dim;
  s.e_dim = p.c.rank;
  s.J = p.J;
  s.dJ = p.dJ;
  s.k = [p](const Vec& x) { return p.k(x); };
  s.pi = [p](const Vec& x) { return p.pi(x); };
  s.rho_x = [p](const Vec& x) { return p.rho_x(x); };
  return s;
}

HamiltonianVector hamiltonian_vector(const Mat& k, std::size_t dim, const Vec& df, double tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim), e = k.cols() - 2 * n;
  const Mat kernel = null_space(k.rightCols(n + e).transpose());
  if (kernel.cols() > 0 && max_abs(Mat(k.leftCols(n).transpose() * kernel)) > 1e-8 * std::max(1.0, max_abs(k)))
    throw InvalidFiberError("hamiltonian_vector: K meets T, u_f is not unique");
  return solve_u(k, dim, df, tol);
}

HamiltonianVector hamiltonian_vector(const HamiltonianSpaceNumeric& s, const ObservableFunction& f, const Vec& x,
                                     double tol, double h) {
  return hamiltonian_vector(s.k(x), s.dim, f.gradient(x, h), tol);
}

Field hamiltonian_field(const HamiltonianSpaceNumeric& s, const ObservableFunction& f, double h) {
  return [k = s.k, dim = s.dim, f, h](const Vec& x) { return solve_u(k(x), dim, f.gradient(x, h), INFINITY).u; };
}

double poisson_bracket(const HamiltonianSpaceNumeric& s, const ObservableFunction& f, const ObservableFunction& g,
                       const Vec& x, double tol, double h) {
  const HamiltonianVector u = solve_u(s.k(x), s.dim, f.gradient(x, h), tol);
  if (!u.admissible) throw InadmissibleError("poisson_bracket: " + f.name + " is not admissible");
  return g.gradient(x, h).dot(u.u);
}

ObservableFunction bracket_function(const HamiltonianSpaceNumeric& s, const ObservableFunction& f,
                                    const ObservableFunction& g, double h) {
  return observable("{" + f.name + "," + g.name + "}", [k = s.k, dim = s.dim, f, g, h](const Vec& x) {
    return g.gradient(x, h).dot(solve_u(k(x), dim, f.gradient(x, h), INFINITY).u);
  });
}

bool InvariantCheck::all_invariant() const {
  return std::all_of(invariant.begin(), invariant.end(), [](bool b) { return b; });
}

InvariantCheck invariant_check(const HamiltonianSpaceNumeric& s, const ObservableFunction& f,
                               const std::vector<Vec>& points, double tol, double h) {
  InvariantCheck out;
  for (const auto& x : points) {
    const Vec df = f.gradient(x, h);
    const Mat rho = s.rho_x(x);
    const double r = rho.cols() == 0 ? 0.0 : max_abs(Vec(rho.transpose() * df));
    out.residual.push_back(r);
    out.invariant.push_back(r < tol);
    out.admissible.push_back(hamiltonian_vector(s.k(x), s.dim, df, tol).admissible);
  }
  return out;
}

double PoissonAlgebraReport::worst() const {
  return std::max({skew.value, pi_route.value, anchor.value, jacobi.value, commutator.value, closure.value});
}

PoissonAlgebraReport check_poisson_algebra(const HamiltonianSpaceNumeric& s,
                                           const std::vector<ObservableFunction>& functions,
                                           const std::vector<Vec>& points, double h, double nested_step) {
  const double h2 = nested_step > 0 ? nested_step : h;
  const std::size_t nf = functions.size();
  std::vector<Field> fields;
  for (const auto& f : functions) fields.push_back(hamiltonian_field(s, f, h));

  PoissonAlgebraReport rep;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Vec& x = points[p];
    const Mat k = s.k(x), pi = s.pi(x), rho = s.rho_x(x), dj = s.dJ(x);
    std::vector<Vec> grad, u;
    for (std::size_t f = 0; f < nf; ++f) {
      grad.push_back(functions[f].gradient(x, h));
      const HamiltonianVector hv = hamiltonian_vector(k, s.dim, grad[f]);
      if (!hv.admissible) throw InadmissibleError("check_poisson_algebra: " + functions[f].name + " is not admissible");
      u.push_back(hv.u);
      rep.pi_route.update(max_abs(Vec(hv.u - pi.transpose() * grad[f])), p, {f, 0, 0});
      if (dj.rows() > 0) rep.anchor.update(max_abs(Vec(dj * hv.u)), p, {f, 0, 0});
    }

    // d{f, g} for f < g
    std::vector<std::vector<Vec>> dbr(nf, std::vector<Vec>(nf));
    for (std::size_t f = 0; f < nf; ++f)
      for (std::size_t g = f + 1; g < nf; ++g) {
        rep.skew.update(std::abs(grad[g].dot(u[f]) + grad[f].dot(u[g])), p, {f, g, 0});
        dbr[f][g] = numeric::gradient(bracket_function(s, functions[f], functions[g], h).value, x, h2);
        if (rho.cols() > 0) rep.closure.update(max_abs(Vec(rho.transpose() * dbr[f][g])), p, {f, g, 0});
        const Vec ufg = solve_u(k, s.dim, dbr[f][g], INFINITY).u;
        rep.commutator.update(max_abs(Vec(ufg - lie_bracket(fields[f], fields[g], x, h2))), p, {f, g, 0});
      }
    for (std::size_t f = 0; f < nf; ++f)
      for (std::size_t g = f + 1; g < nf; ++g)
        for (std::size_t q = g + 1; q < nf; ++q) {
          const double jac = u[f].dot(dbr[g][q]) - u[g].dot(dbr[f][q]) + u[q].dot(dbr[f][g]);
          rep.jacobi.update(std::abs(jac), p, {f, g, q});
        }
  }
  return rep;
}

Vec preimage_constraints(const HamiltonianSpaceNumeric& s, const OrbitDescription& o, const Vec& x) {
  const Vec y = s.J(x);
  Vec c(static_cast<Eigen::Index>(o.constraints.size()));
  for (std::size_t i = 0; i < o.constraints.size(); ++i) c[static_cast<Eigen::Index>(i)] = o.constraints[i](y);
  return c;
}

Mat preimage_jacobian(const HamiltonianSpaceNumeric& s, const OrbitDescription& o, const Vec& x, double h) {
  const Vec y = s.J(x);
  const Mat dj = s.dJ(x);
  Mat d(static_cast<Eigen::Index>(o.constraints.size()), x.size());
  for (std::size_t i = 0; i < o.constraints.size(); ++i)
    d.row(static_cast<Eigen::Index>(i)) = (dj.transpose() * o.constraints[i].gradient(y, h)).transpose();
  return d;
}

std::optional<Vec> project_to_preimage(const HamiltonianSpaceNumeric& s, const OrbitDescription& o, Vec x, double tol,
                                       std::size_t max_iter) {
  for (std::size_t it = 0; it < max_iter; ++it) {
    const Vec c = preimage_constraints(s, o, x);
    const double norm = c.norm();
    if (norm < tol) return x;
    const Vec step = -preimage_jacobian(s, o, x).completeOrthogonalDecomposition().solve(c);
    double t = 1;
    while (preimage_constraints(s, o, x + t * step).norm() >= norm) {
      t /= 2;
      if (t < 1e-6) return std::nullopt;
    }
    x += t * step;
  }
  return preimage_constraints(s, o, x).norm() < tol ? std::optional<Vec>(x) : std::nullopt;
}

std::vector<Vec> sample_preimage(const HamiltonianSpaceNumeric& s, const OrbitDescription& o,
                                 const std::vector<Vec>& seeds) {
  std::vector<Vec> out;
  for (const auto& x : seeds)
    if (auto y = project_to_preimage(s, o, x)) out.push_back(*y);
  return out;
}

Vec restricted_hamiltonian_vector(const Mat& k, std::size_t dim, const Mat& tangent, const Vec& df) {
  // Unknowns (lambda, w); w is fixed only up to rho_X(A), which invariant
  // functions do not see.
  const Eigen::Index n = static_cast<Eigen::Index>(dim), e = k.cols() - 2 * n, r = k.rows(), t = tangent.cols();
  Mat system = Mat::Zero(n + t + e, r + t);
  Vec rhs = Vec::Zero(n + t + e);
  system.topLeftCorner(n, r) = k.leftCols(n).transpose();
  system.topRightCorner(n, t) = -tangent;
  system.block(n, 0, t, r) = tangent.transpose() * k.middleCols(n, n).transpose();
  rhs.segment(n, t) = tangent.transpose() * df;
  system.bottomLeftCorner(e, r) = k.rightCols(e).transpose();
  const Vec sol = system.completeOrthogonalDecomposition().solve(rhs);
  return tangent * sol.tail(t);
}

double ReductionReport::worst() const {
  return std::max({tangency.value, invariance.value, extension.value, restriction.value});
}

ReductionReport reduce_to_orbit(const HamiltonianSpaceNumeric& s, const OrbitDescription& o,
                                const ObservableFunction& f, const ObservableFunction& g,
                                const ObservableFunction& psi, double tol, double h) {
  const ObservableFunction f2 = observable(f.name + "+psi*c", [s, o, f, psi](const Vec& x) {
    return f(x) + psi(x) * preimage_constraints(s, o, x).sum();
  });

  ReductionReport rep;
  rep.min_transversality = INFINITY;
  for (std::size_t p = 0; p < o.samples.size(); ++p) {
    const Vec& x = o.samples[p];
    const Mat d = preimage_jacobian(s, o, x, h);
    const double sv = min_singular_value(d);
    if (!(sv > 1e-8)) throw TransversalityError("reduce_to_orbit: J is not transverse to " + o.name);
    rep.min_transversality = std::min(rep.min_transversality, sv);

    const Mat rho = s.rho_x(x);
    const Vec df = f.gradient(x, h), dg = g.gradient(x, h);
    if (rho.cols() > 0) {
      if (d.rows() > 0) rep.tangency.update(max_abs(Mat(d * rho)), p, {});
      rep.invariance.update(std::max(max_abs(Vec(rho.transpose() * df)), max_abs(Vec(rho.transpose() * dg))), p, {});
    }

    const Mat k = s.k(x);
    const double value = poisson_bracket(s, f, g, x, tol, h);
    rep.brackets.push_back(value);
    rep.extension.update(std::abs(poisson_bracket(s, f2, g, x, tol, h) - value), p, {});
    const Mat tangent = d.rows() > 0 ? null_space(d) : Mat(Mat::Identity(x.size(), x.size()));
    rep.restriction.update(std::abs(dg.dot(restricted_hamiltonian_vector(k, s.dim, tangent, df)) - value), p, {});
  }
  return rep;
}

HamiltonianSpaceNumeric symplectic_plane() {
  HamiltonianSpaceNumeric s;
  s.name = "symplectic-r2";
  s.dim = 2;
  s.J = [](const Vec&) { return Vec(0); };
  s.dJ = [](const Vec&) { return Mat(0, 2); };
  s.pi = [](const Vec&) {
    Mat pi(2, 2);
    pi << 0, 1, -1, 0;
    return pi;
  };
  s.k = [pi = s.pi](const Vec& x) {
    Mat k(2, 4);
    k << pi(x), Mat::Identity(2, 2);
    return k;
  };
  s.rho_x = [](const Vec&) { return Mat(2, 0); };
  return s;
}

HamiltonianSpaceNumeric so3_plane_space(const Mat& j) {
  DiracPipeline p = so3_canonical_pipeline();
  if (j.size() > 0) p.j = j;
  const SubspaceField ls = p.L;
  p.dim = 5;
  p.J = [](const Vec& x) { return Vec(x.head(3)); };
  p.dJ = [](const Vec&) {
    Mat d = Mat::Zero(3, 5);
    d.leftCols(3).setIdentity();
    return d;
  };
  p.L = [ls](const Vec& x) {
    const Vec theta = x.head(3);
    const Mat s = ls(theta);
    const double lambda = 1 + 0.5 * (1 - std::cos(theta.norm()));
    Mat l = Mat::Zero(s.rows() + 2, 10);
    l.block(0, 0, s.rows(), 3) = s.leftCols(3);
    l.block(0, 5, s.rows(), 3) = s.rightCols(3);
    const Eigen::Index r = s.rows();
    l(r, 4) = lambda;  // (lambda d_{p2}, dp1)
    l(r, 8) = 1;
    l(r + 1, 3) = -lambda;
    l(r + 1, 9) = 1;
    return l;
  };
  return HamiltonianSpaceNumeric::from_pipeline(p, "so3-plane");
}

HamiltonianSpaceNumeric so3_canonical_space() {
  return HamiltonianSpaceNumeric::from_pipeline(so3_canonical_pipeline(), "so3-canonical");
}

}  // namespace manin::numeric
