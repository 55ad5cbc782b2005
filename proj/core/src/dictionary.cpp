#include "manin/dictionary.hpp"

namespace manin {

bool check_identification(const PairFiber& pair, const ExactIdentification& id) {
  const std::size_t b = pair.base_dim();
  if (pair.dim() != 2 * b || id.s.rows() != pair.dim() || id.s.cols() != b) return false;
  return pair.anchor * id.s == QMatrix::identity(b) && (id.s.transpose() * pair.form.gram() * id.s).is_zero();
}

QMatrix exact_coordinates(const PairFiber& pair, const ExactIdentification& id) {
  return vstack(pair.anchor, id.s.transpose() * pair.form.gram());
}

HamiltonianFiber k_from_quasi(const QuasiPoissonPointData& q, const PairFiber& pair, const IsotropicSplitting& j,
                              const QMatrix& dJ) {
  const std::size_t n = q.Pi.rows(), m = pair.rank(), e = pair.dim();
  if (q.Pi.cols() != n || q.rho_X.rows() != n || q.rho_X.cols() != m || j.rank() != m)
    throw DimensionError("k_from_quasi: inconsistent shapes");
  QMatrix rows(m + n, 2 * n + e);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) rows(k, i) = q.rho_X(i, k);
    for (std::size_t c = 0; c < e; ++c) rows(k, 2 * n + c) = pair.a.basis()(k, c);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = m + i;
    for (std::size_t t = 0; t < n; ++t) rows(r, t) = q.Pi(i, t);
    rows(r, n + i) = 1;
    QVector xi = q.rho_X.row_vector(i);  // rho_X^* e_i in the dual basis
    QVector je = j.apply(xi);
    for (std::size_t c = 0; c < e; ++c) rows(r, 2 * n + c) = -je[c];
  }
  return {n, pair, dJ, Subspace::span(2 * n + e, rows)};
}

QMatrix pi_by_uniqueness(const HamiltonianFiber& h, const IsotropicSplitting& j, const QMatrix& rho_x) {
  const std::size_t n = h.tangent_dim, e = h.pair.dim();
  if (h.K.intersect(Subspace::coordinate(h.ambient_dim(), 0, n)).dim() != 0)
    throw InvalidFiberError("Pi: K meets T, so i_alpha Pi is not unique");
  const auto cols = index_range(n, n + e);
  QMatrix pi(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    QVector values(n + e);
    values[i] = 1;
    QVector je = j.apply(rho_x.row_vector(i));
    for (std::size_t c = 0; c < e; ++c) values[n + c] = -je[c];
    auto v = find_with_components(h.K, cols, values);
    if (!v) throw InvalidFiberError("Pi: no element ((u, alpha), -j rho_X^* alpha) for alpha = e_" + std::to_string(i));
    for (std::size_t t = 0; t < n; ++t) pi(i, t) = (*v)[t];
  }
  return pi;
}

QMatrix pi_by_composition(const HamiltonianFiber& h, const IsotropicSplitting& j) {
  const std::size_t n = h.tangent_dim, e = h.pair.dim();
  const LinearRelation k(2 * n, e, h.K);
  const LinearRelation dual(e, 0, j.image());
  const LinearRelation graph(n, n, compose(k, dual).graph());
  auto map = is_graph_over_factor(graph, Factor::target);
  if (!map) throw InvalidFiberError("Pi: K o j(A*) is not the graph of a map T* -> T");
  return map->transpose();
}

QuasiPoissonPointData pi_from_k(const HamiltonianFiber& h, const IsotropicSplitting& j) {
  QuasiPoissonPointData q;
  q.rho_X = extract_action(h);
  q.Pi = pi_by_uniqueness(h, j, q.rho_X);
  if (!(pi_by_composition(h, j) == q.Pi)) throw InvalidFiberError("Pi: uniqueness and composition routes disagree");
  if (!q.Pi.is_skew()) throw InvalidFiberError("Pi: result is not skew");
  return q;
}

HamiltonianFiber k_from_dirac(const DiracPointData& d, const QMatrix& dJ, const PairFiber& pair,
                              const ExactIdentification& id) {
  const std::size_t n = d.L.ambient_dim() / 2, b = pair.base_dim(), e = pair.dim();
  if (d.L.ambient_dim() != 2 * n || dJ.rows() != b || dJ.cols() != n)
    throw DimensionError("k_from_dirac: inconsistent shapes");
  if (!check_identification(pair, id)) throw std::invalid_argument("k_from_dirac: s is not an isotropic section");
  const QMatrix rho_star = pair.anchor_dual();
  const QMatrix sdj = id.s * dJ;  // e x n
  QMatrix rows(d.L.dim() + b, 2 * n + e);
  const QMatrix& lb = d.L.basis();
  for (std::size_t r = 0; r < d.L.dim(); ++r) {
    for (std::size_t t = 0; t < 2 * n; ++t) rows(r, t) = lb(r, t);
    QVector img = sdj.apply(lb.row(r).subspan(0, n));
    for (std::size_t c = 0; c < e; ++c) rows(r, 2 * n + c) = img[c];
  }
  for (std::size_t beta = 0; beta < b; ++beta) {
    const std::size_t r = d.L.dim() + beta;
    for (std::size_t t = 0; t < n; ++t) rows(r, n + t) = -dJ(beta, t);
    for (std::size_t c = 0; c < e; ++c) rows(r, 2 * n + c) = rho_star(c, beta);
  }
  return {n, pair, dJ, Subspace::span(2 * n + e, rows)};
}

DiracPointData dirac_from_k(const HamiltonianFiber& h, const ExactIdentification& id) {
  const std::size_t n = h.tangent_dim, b = h.pair.base_dim(), total = h.ambient_dim();
  // constraint rho(e) - dJ u = 0
  QMatrix constraint(b, total);
  constraint.set_block(0, 0, -h.dJ);
  constraint.set_block(0, 2 * n, h.pair.anchor);
  const Subspace supported = Subspace::preimage(constraint, Subspace::zero(b)).intersect(h.K);
  QMatrix out(2 * n, total);
  for (std::size_t t = 0; t < 2 * n; ++t) out(t, t) = 1;
  out.set_block(n, 2 * n, h.dJ.transpose() * id.s.transpose() * h.pair.form.gram());
  return {supported.image(out)};
}

DiracPointData l_from_quasi(const QuasiPoissonPointData& q, const PairFiber& pair, const IsotropicSplitting& j,
                            const ExactIdentification& id, const QMatrix& dJ) {
  const std::size_t n = q.Pi.rows(), m = pair.rank();
  if (!check_identification(pair, id)) throw std::invalid_argument("l_from_quasi: s is not an isotropic section");
  const QMatrix& g = pair.form.gram();
  const QMatrix rho_bar = j.images * g * id.s;              // m x b
  const QMatrix s_star_a = id.s.transpose() * g * pair.a.basis().transpose();  // b x m
  const QMatrix correction = dJ.transpose() * rho_bar.transpose() * q.rho_X.transpose();  // n x n
  QMatrix rows(m + n, 2 * n);
  const QMatrix lifted = dJ.transpose() * s_star_a;  // n x m
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t t = 0; t < n; ++t) {
      rows(k, t) = q.rho_X(t, k);
      rows(k, n + t) = lifted(t, k);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < n; ++t) {
      rows(m + i, t) = q.Pi(i, t);
      rows(m + i, n + t) = (t == i ? Rational(1) : Rational(0)) - correction(t, i);
    }
  return {Subspace::span(2 * n, rows)};
}

Subspace dirac_of_pair_point(const PairFiber& pair, const ExactIdentification& id) {
  return pair.a.image(exact_coordinates(pair, id));
}

Subspace forward_image(const Subspace& l, const QMatrix& df) {
  const std::size_t q = df.cols(), m = df.rows();
  if (l.ambient_dim() != 2 * q) throw DimensionError("forward_image: L has wrong dimension");
  QMatrix pull(2 * q, q + m), push(2 * m, q + m);
  pull.set_block(0, 0, QMatrix::identity(q));
  pull.set_block(q, q, df.transpose());
  push.set_block(0, 0, df);
  push.set_block(m, q, QMatrix::identity(m));
  return Subspace::preimage(pull, l).image(push);
}

Subspace backward_image(const Subspace& l, const QMatrix& df) {
  const std::size_t q = df.cols(), m = df.rows();
  if (l.ambient_dim() != 2 * m) throw DimensionError("backward_image: L has wrong dimension");
  QMatrix pull(2 * q, q + m), push(2 * m, q + m);
  pull.set_block(0, 0, QMatrix::identity(q));
  pull.set_block(q, q, df.transpose());
  push.set_block(0, 0, df);
  push.set_block(m, q, QMatrix::identity(m));
  return Subspace::preimage(push, l).image(pull);
}

std::string StrongDiracReport::failure() const {
  if (!transversal) return "condition i) failed: ker dJ meets L cap T";
  if (!forward) return "condition ii) failed: L_S is not contained in the forward image of L";
  return {};
}

StrongDiracReport check_strong_dirac_point(const Subspace& l, const QMatrix& dJ, const Subspace& l_s) {
  StrongDiracReport r;
  const std::size_t n = dJ.cols();
  const Subspace l_tangent = coordinate_projection(l.intersect(Subspace::coordinate(2 * n, 0, n)), 0, n);
  r.transversal = l_tangent.intersect(Subspace::span(n, kernel(dJ))).dim() == 0;
  r.forward = forward_image(l, dJ).contains(l_s);
  return r;
}

QuasiPoissonPointData pi_from_dirac(const DiracPointData& d, const QMatrix& dJ, const PairFiber& pair,
                                    const ExactIdentification& id, const IsotropicSplitting& j) {
  auto pre = check_strong_dirac_point(d.L, dJ, dirac_of_pair_point(pair, id));
  if (!pre.ok()) throw PreconditionError("pi_from_dirac: " + pre.failure());
  const HamiltonianFiber h = k_from_dirac(d, dJ, pair, id);
  QuasiPoissonPointData q;
  q.rho_X = extract_action(h);
  q.Pi = pi_by_composition(h, j);
  return q;
}

SubcategoryReport subcategory_m(const HamiltonianFiber& h, const DiracPointData& d, const QuasiPoissonPointData& q) {
  SubcategoryReport r;
  const std::size_t n = h.tangent_dim;
  r.k_onto_tangent = coordinate_projection(h.K, 0, n).dim() == n;
  r.l_is_form_graph = d.L.intersect(Subspace::coordinate(2 * n, n, n)).dim() == 0;
  r.action_spans_tangent = rank(hstack(q.rho_X, q.Pi.transpose())) == n;
  return r;
}

}  // namespace manin
