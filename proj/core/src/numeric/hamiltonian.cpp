#include "manin/numeric/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace manin::numeric {

namespace {

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

Mat canonical_k(const CourantNumeric& c, const Mat& a, const Vec& x) {
  const Eigen::Index n = static_cast<Eigen::Index>(c.base_dim), e = static_cast<Eigen::Index>(c.rank), m = a.rows();
  const Mat rho = c.anchor(x);
  const Mat rho_star = c.gram_inv * rho.transpose();
  Mat rows = Mat::Zero(m + n, 2 * n + e);
  for (Eigen::Index k = 0; k < m; ++k) {
    rows.block(k, 0, 1, n) = (rho * a.row(k).transpose()).transpose();
    rows.block(k, 2 * n, 1, e) = a.row(k);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    rows(m + i, n + i) = -1;
    rows.block(m + i, 2 * n, 1, e) = rho_star.col(i).transpose();
  }
  return rows;
}

HamiltonianFiber canonical_fiber_exact(const PairFiber& pair) {
  const std::size_t n = pair.base_dim(), e = pair.dim(), m = pair.rank();
  const QMatrix rho_star = pair.anchor_dual();
  const QMatrix& a = pair.a.basis();
  QMatrix rows(m + n, 2 * n + e);
  for (std::size_t k = 0; k < m; ++k) {
    const QVector u = pair.anchor.apply(a.row(k));
    for (std::size_t t = 0; t < n; ++t) rows(k, t) = u[t];
    for (std::size_t t = 0; t < e; ++t) rows(k, 2 * n + t) = a(k, t);
  }
  for (std::size_t i = 0; i < n; ++i) {
    rows(m + i, n + i) = -1;
    for (std::size_t t = 0; t < e; ++t) rows(m + i, 2 * n + t) = rho_star(t, i);
  }
  return {n, pair, QMatrix::identity(n), Subspace::span(2 * n + e, rows)};
}

GeneratorBracketReport canonical_generator_brackets(const CourantNumeric& c, const Mat& a,
                                                    const std::vector<Vec>& points, const std::vector<Field>& one_forms,
                                                    double h) {
  const std::size_t n = c.base_dim;
  const CourantNumeric tx = make_standard_unchecked(n, {});
  const Mat gram = block_diag(tx.gram, c.gram);
  const Eigen::Index ni = static_cast<Eigen::Index>(n);

  struct Generator {
    Field tangent;  // section of T S (+) T* S
    Field target;   // section of E
  };
  std::vector<Generator> as, bs;
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const Vec ak = a.row(k).transpose();
    as.push_back({[rho = c.anchor, ak, ni](const Vec& x) { return concat(rho(x) * ak, Vec::Zero(ni)); },
                  constant_field(ak)});
  }
  for (const auto& beta : one_forms)
    bs.push_back({[beta, ni](const Vec& x) { return concat(Vec::Zero(ni), -beta(x)); }, c.dual_field(beta)});

  GeneratorBracketReport rep;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Vec& x = points[p];
    const Mat k = canonical_k(c, a, x);
    auto measure = [&](const Generator& g1, const Generator& g2) {
      const Vec w = concat(tx.bracket(g1.tangent, g2.tangent, x, h), c.bracket(g1.target, g2.target, x, h));
      return lagrangian_residual(w, k, gram);
    };
    for (std::size_t i = 0; i < as.size(); ++i)
      for (std::size_t j = 0; j < as.size(); ++j) rep.aa.update(measure(as[i], as[j]), p, {i, j, 0});
    for (std::size_t i = 0; i < as.size(); ++i)
      for (std::size_t j = 0; j < bs.size(); ++j) {
        rep.ab.update(measure(as[i], bs[j]), p, {i, j, 0});
        rep.ba.update(measure(bs[j], as[i]), p, {j, i, 0});
      }
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = 0; j < bs.size(); ++j) rep.bb.update(measure(bs[i], bs[j]), p, {i, j, 0});
  }
  return rep;
}

double orbit_tangency(const CourantNumeric& c, const Mat& a, const std::vector<ScalarField>& constraints,
                      const std::vector<Vec>& points, double h) {
  double worst = 0;
  for (const auto& x : points) {
    const Mat action = c.anchor(x) * a.transpose();
    for (const auto& con : constraints) worst = std::max(worst, max_abs(Vec(action.transpose() * gradient(con, x, h))));
  }
  return worst;
}

PairFiber frozen_so3_pair(const so3::FrozenPoint& p) {
  const ManinPairPoint pair = catalog::so3_double();
  QMatrix anchor(3, 6);
  anchor.set_block(0, 0, -QMatrix::identity(3));
  anchor.set_block(0, 3, p.rotation);
  return {pair.d.form(), pair.g, anchor};
}

ExactIdentification exact_isotropic_section(const PairFiber& pair) {
  const QMatrix& rho = pair.anchor;
  const QMatrix c = rho.transpose() * *inverse(rho * rho.transpose());
  const QMatrix b = c.transpose() * pair.form.gram() * c;
  return {c - Rational(1, 2) * pair.anchor_dual() * b};
}

QuasiTensors QuasiTensors::from(const QuasiBialgebraData& q) {
  QuasiTensors t;
  t.rank = q.rank;
  for (const auto& v : q.F) t.F.push_back(v.get_d());
  for (const auto& v : q.chi) t.chi.push_back(v.get_d());
  return t;
}

std::vector<ScalarField> jacobiator_functions(std::size_t dim, const std::vector<ScalarField>& extra) {
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < dim; ++i) out.push_back([i](const Vec& x) { return x[static_cast<Eigen::Index>(i)]; });
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j)
      out.push_back([i, j](const Vec& x) { return x[static_cast<Eigen::Index>(i)] * x[static_cast<Eigen::Index>(j)]; });
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

namespace {

// Pi and gradients at x and at the 2n central-difference probes around it.
struct ProbeCache {
  std::vector<Vec> probes;  // x, x + h e_0, x - h e_0, ...
  std::vector<Mat> pi;
  std::vector<std::vector<Vec>> grads;  // [function][probe]

  ProbeCache(const MatrixField& pi_field, const std::vector<ScalarField>& fns, const Vec& x, double h) {
    probes.push_back(x);
    for (Eigen::Index b = 0; b < x.size(); ++b) {
      Vec y = x;
      y[b] += h;
      probes.push_back(y);
      y[b] -= 2 * h;
      probes.push_back(y);
    }
    for (const auto& y : probes) pi.push_back(pi_field(y));
    grads.resize(fns.size());
    for (std::size_t f = 0; f < fns.size(); ++f)
      for (const auto& y : probes) grads[f].push_back(gradient(fns[f], y, h));
  }

  double bracket(std::size_t f, std::size_t g, std::size_t probe) const {
    return grads[f][probe].dot(pi[probe] * grads[g][probe]);
  }

  /// {f, {g, h}} at x.
  double nested(std::size_t f, std::size_t g, std::size_t k, double h) const {
    const Eigen::Index n = probes[0].size();
    Vec d(n);
    for (Eigen::Index b = 0; b < n; ++b)
      d[b] = (bracket(g, k, static_cast<std::size_t>(1 + 2 * b)) - bracket(g, k, static_cast<std::size_t>(2 + 2 * b))) /
             (2 * h);
    return grads[f][0].dot(pi[0] * d);
  }

  double jacobiator(std::size_t f, std::size_t g, std::size_t k, double h) const {
    return nested(f, g, k, h) + nested(g, k, f, h) + nested(k, f, g, h);
  }
};

}  // namespace

QuasiPoissonReport check_quasi_poisson(const QuasiPoissonFields& q, const QuasiTensors& t,
                                       const std::vector<Vec>& points, const std::vector<ScalarField>& functions,
                                       double h) {
  QuasiPoissonReport rep;
  const std::size_t m = t.rank;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Vec& x = points[p];
    const ProbeCache cache(q.pi, functions, x, h);
    const Mat rho = q.rho_x(x);
    const Mat& pi = cache.pi[0];

    // (1)
    for (std::size_t f = 0; f < functions.size(); ++f)
      for (std::size_t g = f + 1; g < functions.size(); ++g)
        for (std::size_t k = g + 1; k < functions.size(); ++k) {
          const Vec xf = rho.transpose() * cache.grads[f][0], xg = rho.transpose() * cache.grads[g][0],
                    xk = rho.transpose() * cache.grads[k][0];
          double rhs = 0;
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t l = 0; l < m; ++l)
              for (std::size_t r = 0; r < m; ++r)
                rhs += t.x(i, l, r) * xf[static_cast<Eigen::Index>(i)] * xg[static_cast<Eigen::Index>(l)] *
                       xk[static_cast<Eigen::Index>(r)];
          rep.scale1 = std::max(rep.scale1, std::abs(rhs));
          rep.qpois1.update(std::abs(cache.jacobiator(f, g, k, h) - rhs), p, {f, g, k});
        }

    // (2)
    std::vector<Mat> dpi;
    for (Eigen::Index l = 0; l < x.size(); ++l)
      dpi.push_back((cache.pi[static_cast<std::size_t>(1 + 2 * l)] - cache.pi[static_cast<std::size_t>(2 + 2 * l)]) / (2 * h));
    const std::vector<Mat> drho = matrix_partials(q.rho_x, x, h);
    const Eigen::Index n = x.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Eigen::Index kk = static_cast<Eigen::Index>(k);
      const Vec v = rho.col(kk);
      Mat dv(n, n);
      for (Eigen::Index l = 0; l < n; ++l) dv.col(l) = drho[static_cast<std::size_t>(l)].col(kk);
      Mat lie = -dv * pi - pi * dv.transpose();
      for (Eigen::Index l = 0; l < n; ++l) lie += v[l] * dpi[static_cast<std::size_t>(l)];
      // d_* a_k = -F(k, ., .) on constant sections
      Mat fk(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t l = 0; l < m; ++l) fk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = -t.f(k, i, l);
      const Mat rhs = rho * fk * rho.transpose();
      rep.scale2 = std::max(rep.scale2, max_abs(rhs));
      rep.qpois2.update(max_abs(Mat(lie - rhs)), p, {k, 0, 0});
    }

    // (3)
    rep.qpois3.update(max_abs(Mat(pi.transpose() * q.dJ(x).transpose() - rho * q.rho_astar(x).transpose())), p, {});
  }
  return rep;
}

Residual jacobiator_residual(const MatrixField& pi, const std::vector<Vec>& points,
                             const std::vector<ScalarField>& functions, double h) {
  Residual r;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const ProbeCache cache(pi, functions, points[p], h);
    for (std::size_t f = 0; f < functions.size(); ++f)
      for (std::size_t g = f + 1; g < functions.size(); ++g)
        for (std::size_t k = g + 1; k < functions.size(); ++k)
          r.update(std::abs(cache.jacobiator(f, g, k, h)), p, {f, g, k});
  }
  return r;
}

PairData DiracPipeline::pair_at(const Vec& x) const { return {c.gram, a, j, c.anchor(J(x))}; }

Mat DiracPipeline::k(const Vec& x) const { return k_from_dirac(L(x), dJ(x), pair_at(x), split.s(J(x))); }

Mat DiracPipeline::pi(const Vec& x) const { return pi_by_composition(k(x), dim, pair_at(x)); }

Mat DiracPipeline::rho_x(const Vec& x) const { return extract_action(k(x), dim, pair_at(x)); }

QuasiPoissonFields DiracPipeline::fields() const {
  QuasiPoissonFields q;
  q.dim = dim;
  q.pi = [self = *this](const Vec& x) { return self.pi(x); };
  q.rho_x = [self = *this](const Vec& x) { return self.rho_x(x); };
  q.dJ = dJ;
  q.rho_astar = [anchor = c.anchor, J = J, j = j](const Vec& x) { return Mat(anchor(J(x)) * j.transpose()); };
  return q;
}

DiracPipeline canonical_pipeline(const CourantNumeric& c, const Mat& a, const Mat& j) {
  DiracPipeline p;
  p.c = c;
  p.split = make_exact_splitting(c);
  p.a = a;
  p.j = j;
  p.dim = c.base_dim;
  p.J = [](const Vec& x) { return x; };
  const Eigen::Index n = static_cast<Eigen::Index>(c.base_dim);
  p.dJ = [n](const Vec&) { return Mat(Mat::Identity(n, n)); };
  p.L = dirac_of_pair(c, a, p.split);
  return p;
}

DiracPipeline so3_canonical_pipeline() {
  const ManinPairPoint pair = catalog::so3_double();
  const IsotropicSplitting j = make_isotropic_splitting(pair);
  return canonical_pipeline(make_so3_dressing(), to_double(pair.g.basis()), to_double(j.images));
}

FormField pullback_three_form(const FormField& phi, std::size_t base_dim, const Field& J, const MatrixField& dJ,
                              std::size_t dim) {
  return three_form(dim, [=](const Vec& x, std::size_t i, std::size_t j, std::size_t k) {
    const Vec p = phi(J(x));
    const Mat d = dJ(x);
    const Eigen::Index b = static_cast<Eigen::Index>(base_dim);
    double s = 0;
    for (Eigen::Index u = 0; u < b; ++u)
      for (Eigen::Index v = 0; v < b; ++v)
        for (Eigen::Index w = 0; w < b; ++w)
          s += p[(u * b + v) * b + w] * d(u, static_cast<Eigen::Index>(i)) * d(v, static_cast<Eigen::Index>(j)) *
               d(w, static_cast<Eigen::Index>(k));
    return s;
  });
}

bool StrongDiracNumericReport::pass(double tol) const {
  const auto all = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
  return all(transversal) && all(forward) && integrability.pass(tol);
}

StrongDiracNumericReport check_strong_dirac(const SubspaceField& lx, std::size_t dim, const Field& J,
                                            const MatrixField& dJ, const SubspaceField& ls, const FormField& phi,
                                            std::size_t base_dim, const std::vector<Vec>& points, double tol,
                                            double h) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim);
  StrongDiracNumericReport rep;
  rep.min_transversality = INFINITY;
  for (const auto& x : points) {
    const Mat l = lx(x), d = dJ(x);
    // L cap T: combinations of rows with vanishing cotangent part
    const Mat lambda = null_space(l.rightCols(n).transpose());
    double sv = INFINITY;
    if (lambda.cols() > 0) {
      const Mat tangent = row_basis(Mat((lambda.transpose() * l.leftCols(n))));
      if (tangent.rows() > 0) {
        if (d.rows() == 0) {
          sv = 0;
        } else {
          Eigen::JacobiSVD<Mat> svd(Mat(d * tangent.transpose()));
          sv = tangent.rows() > d.rows() ? 0.0 : svd.singularValues()[tangent.rows() - 1];
        }
      }
    }
    rep.min_transversality = std::min(rep.min_transversality, sv);
    rep.transversal.push_back(sv > tol);

    const Mat f = forward_image(l, d);
    const Mat s = row_basis(ls(J(x)));
    const double defect = f.rows() == 0 ? max_abs(s) : max_abs(Mat(s - s * f.transpose() * f));
    rep.forward_defect = std::max(rep.forward_defect, defect);
    rep.forward.push_back(defect < tol);
  }
  if (phi)
    rep.integrability = check_dirac_field(lx, dim, pullback_three_form(phi, base_dim, J, dJ, dim), points, h);
  else
    rep.integrability = check_dirac_field(lx, dim, {}, points, h);
  return rep;
}

SubspaceField induced_dirac(const DiracPipeline& p) {
  return [p](const Vec& x) { return dirac_from_k(p.k(x), p.dim, p.dJ(x), p.pair_at(x), p.split.s(p.J(x))); };
}

}  // namespace manin::numeric
