#include "manin/morphism.hpp"

namespace manin {

bool same_pair(const ManinPairPoint& a, const ManinPairPoint& b) { return a.d == b.d && a.g == b.g; }

MorphismValidity check_morphism_fiber(const MorphismFiber& m) {
  MorphismValidity v;
  const std::size_t n1 = m.source.d.dim(), n2 = m.target.d.dim();
  if (m.K.ambient_dim() != n1 + n2) throw DimensionError("morphism fiber: K has wrong ambient dimension");
  v.lagrangian = is_lagrangian(m.form(), m.K);
  v.closed = true;
  const QMatrix& b = m.K.basis();
  for (std::size_t i = 0; i < m.K.dim() && v.closed; ++i)
    for (std::size_t j = i + 1; j < m.K.dim(); ++j) {
      auto x1 = b.row(i).subspan(0, n1), x2 = b.row(i).subspan(n1, n2);
      auto y1 = b.row(j).subspan(0, n1), y2 = b.row(j).subspan(n1, n2);
      QVector z = m.source.d.bracket(x1, y1);
      QVector z2 = m.target.d.bracket(x2, y2);
      z.insert(z.end(), z2.begin(), z2.end());
      if (!m.K.contains(z)) {
        v.closed = false;
        break;
      }
    }
  return v;
}

bool check_morphism_def(const MorphismFiber& m) {
  const std::size_t n1 = m.source.d.dim(), n2 = m.target.d.dim();
  const std::size_t m1 = m.source.rank(), m2 = m.target.rank();
  QMatrix p(m1 + m2, n1 + n2);
  p.set_block(0, 0, m.source.g.basis() * m.source.d.form().gram());
  p.set_block(m1, n1, m.target.g.basis() * m.target.d.form().gram());
  const LinearRelation projected(m1, m2, m.K.image(p));
  return is_graph_over_factor(projected, Factor::source).has_value();
}

bool check_morphism_equiv(const MorphismFiber& m) {
  const std::size_t n1 = m.source.d.dim(), n2 = m.target.d.dim();
  const Subspace a1 = embed(m.source.g, n1 + n2, 0);
  if (m.K.intersect(a1).dim() != 0) return false;
  const Subspace slice = m.K.intersect(a1.sum(Subspace::coordinate(n1 + n2, n1, n2)));
  return slice.dim() == m.target.rank() && coordinate_projection(slice, n1, n2) == m.target.g;
}

MorphismFiber identity_morphism(const ManinPairPoint& pair) {
  return {pair, pair, LinearRelation::identity(pair.d.dim()).graph()};
}

MorphismFiber compose_morphisms(const MorphismFiber& m12, const MorphismFiber& m23) {
  if (!same_pair(m12.target, m23.source)) throw std::invalid_argument("compose_morphisms: middle Manin pairs differ");
  const LinearRelation r(m12.source.d.dim(), m12.target.d.dim(), m12.K);
  const LinearRelation s(m23.source.d.dim(), m23.target.d.dim(), m23.K);
  return {m12.source, m23.target, compose(r, s).graph()};
}

QMatrix PairFiber::anchor_dual() const {
  auto ginv = inverse(form.gram());
  if (!ginv) throw DegenerateFormError("anchor_dual: degenerate pairing");
  return (*ginv) * anchor.transpose();
}

PairFiber PairFiber::over_point(const ManinPairPoint& pair) { return {pair.d.form(), pair.g, QMatrix(0, pair.d.dim())}; }

std::string HamiltonianReport::failure() const {
  if (!lagrangian) return "K is not Lagrangian";
  if (!support) return "K violates dJ(u) = rho(e)";
  if (!transversal) return "K meets T (+) 0 (+) 0 nontrivially";
  if (!onto_a) return "K cap (T (+) 0 (+) E) does not project isomorphically onto A";
  return {};
}

HamiltonianReport check_hamiltonian_fiber(const HamiltonianFiber& h) {
  HamiltonianReport r;
  const std::size_t n = h.tangent_dim, e = h.pair.dim(), total = h.ambient_dim();
  if (h.K.ambient_dim() != total) throw DimensionError("hamiltonian fiber: K has wrong ambient dimension");
  if (h.dJ.rows() != h.pair.base_dim() || h.dJ.cols() != n) throw DimensionError("hamiltonian fiber: dJ has wrong shape");
  r.lagrangian = is_lagrangian(h.form(), h.K);
  r.support = true;
  const QMatrix& b = h.K.basis();
  for (std::size_t i = 0; i < h.K.dim() && r.support; ++i) {
    QVector lhs = h.dJ.apply(b.row(i).subspan(0, n));
    QVector rhs = h.pair.anchor.apply(b.row(i).subspan(2 * n, e));
    r.support = lhs == rhs;
  }
  const Subspace tangent = Subspace::coordinate(total, 0, n);
  r.transversal = h.K.intersect(tangent).dim() == 0;
  const Subspace slice = h.K.intersect(tangent.sum(Subspace::coordinate(total, 2 * n, e)));
  r.onto_a = slice.dim() == h.pair.rank() && coordinate_projection(slice, 2 * n, e) == h.pair.a;
  return r;
}

MorphismFiber as_morphism(const HamiltonianFiber& h) {
  const std::size_t n = h.tangent_dim;
  ManinPairPoint source{QuadraticLieAlgebra::abelian(SplitForm::tangent_cotangent(n).negated()),
                        Subspace::coordinate(2 * n, 0, n), "tangent-double"};
  ManinPairPoint target{QuadraticLieAlgebra::abelian(h.pair.form), h.pair.a, "target"};
  return {std::move(source), std::move(target), h.K};
}

QMatrix extract_action(const HamiltonianFiber& h) {
  const std::size_t n = h.tangent_dim, e = h.pair.dim(), m = h.pair.rank();
  if (h.K.intersect(Subspace::coordinate(h.ambient_dim(), 0, n)).dim() != 0)
    throw InvalidFiberError("extract_action: action vectors are not unique (K meets T)");
  const auto cols = index_range(n, n + e);
  QMatrix rho(n, m);
  for (std::size_t k = 0; k < m; ++k) {
    QVector values(n + e);
    for (std::size_t c = 0; c < e; ++c) values[n + c] = h.pair.a.basis()(k, c);
    auto v = find_with_components(h.K, cols, values);
    if (!v) throw InvalidFiberError("extract_action: no action vector for basis element " + std::to_string(k));
    for (std::size_t i = 0; i < n; ++i) rho(i, k) = (*v)[i];
  }
  return rho;
}

bool cotangent_surjective(const HamiltonianFiber& h) {
  return coordinate_projection(h.K, h.tangent_dim, h.tangent_dim).dim() == h.tangent_dim;
}

bool alpha_admits_e_in_a(const HamiltonianFiber& h, std::span<const Rational> alpha) {
  const std::size_t n = h.tangent_dim;
  const Subspace restricted =
      h.K.intersect(Subspace::coordinate(h.ambient_dim(), 0, 2 * n).sum(embed(h.pair.a, h.ambient_dim(), 2 * n)));
  return find_with_components(restricted, index_range(n, n), alpha).has_value();
}

bool transverse_to_complement(const HamiltonianFiber& h, const Subspace& complement) {
  return h.K.intersect(embed(complement, h.ambient_dim(), 2 * h.tangent_dim)).dim() == 0;
}

}  // namespace manin
