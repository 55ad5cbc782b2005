#include "manin/exact_linear.hpp"

#include <numeric>

namespace manin {

Subspace Subspace::span(std::size_t ambient_dim, const QMatrix& rows) {
  if (rows.rows() > 0 && rows.cols() != ambient_dim)
    throw DimensionError("span: rows have length " + std::to_string(rows.cols()) + ", ambient dimension is " +
                         std::to_string(ambient_dim));
  Subspace s(ambient_dim);
  if (rows.rows() == 0) return s;
  auto ech = rref(rows);
  s.basis_ = std::move(ech.reduced);
  s.pivots_ = std::move(ech.pivots);
  return s;
}

Subspace Subspace::full(std::size_t ambient_dim) { return span(ambient_dim, QMatrix::identity(ambient_dim)); }

Subspace Subspace::coordinate(std::size_t ambient_dim, std::size_t first, std::size_t count) {
  if (first + count > ambient_dim) throw DimensionError("coordinate subspace out of range");
  QMatrix rows(count, ambient_dim);
  for (std::size_t i = 0; i < count; ++i) rows(i, first + i) = 1;
  return span(ambient_dim, rows);
}

std::optional<QVector> Subspace::coordinates(std::span<const Rational> v) const {
  if (v.size() != ambient_) throw DimensionError("coordinates: vector length mismatch");
  QVector c(dim());
  QVector rebuilt(ambient_);
  for (std::size_t r = 0; r < dim(); ++r) {
    c[r] = v[pivots_[r]];
    if (sgn(c[r]) == 0) continue;
    auto b = basis_.row(r);
    for (std::size_t j = 0; j < ambient_; ++j)
      if (sgn(b[j]) != 0) rebuilt[j] += c[r] * b[j];
  }
  for (std::size_t j = 0; j < ambient_; ++j)
    if (rebuilt[j] != v[j]) return std::nullopt;
  return c;
}

bool Subspace::contains(std::span<const Rational> v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw DimensionError("contains: ambient dimension mismatch");
  if (other.dim() > dim()) return false;
  for (std::size_t r = 0; r < other.dim(); ++r)
    if (!contains(other.basis_.row(r))) return false;
  return true;
}

QMatrix Subspace::annihilator() const {
  if (dim() == 0) return QMatrix::identity(ambient_);
  return kernel(basis_);
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw DimensionError("intersect: ambient dimension mismatch");
  if (dim() == 0 || other.dim() == 0) return zero(ambient_);
  QMatrix constraints = vstack(annihilator(), other.annihilator());
  if (constraints.rows() == 0) return full(ambient_);
  return span(ambient_, kernel(constraints));
}

Subspace Subspace::sum(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw DimensionError("sum: ambient dimension mismatch");
  return span(ambient_, vstack(basis_, other.basis_));
}

Subspace Subspace::image(const QMatrix& map) const {
  if (map.cols() != ambient_) throw DimensionError("image: map has wrong source dimension");
  if (dim() == 0) return zero(map.rows());
  return span(map.rows(), basis_ * map.transpose());
}

Subspace Subspace::preimage(const QMatrix& map, const Subspace& target) {
  if (map.rows() != target.ambient_dim()) throw DimensionError("preimage: map has wrong target dimension");
  if (target.dim() == target.ambient_dim()) return full(map.cols());
  return span(map.cols(), kernel(target.annihilator() * map));
}

QMatrix Subspace::echelon_completion() const {
  std::vector<bool> used(ambient_, false);
  for (auto p : pivots_) used[p] = true;
  QMatrix c(ambient_ - dim(), ambient_);
  std::size_t r = 0;
  for (std::size_t j = 0; j < ambient_; ++j)
    if (!used[j]) c(r++, j) = 1;
  return c;
}

Subspace canonicalize(std::span<const QVector> rows, std::size_t ambient_dim) {
  return Subspace::span(ambient_dim, QMatrix::from_rows(rows, ambient_dim));
}

Subspace coordinate_projection(const Subspace& u, std::size_t first, std::size_t count) {
  if (first + count > u.ambient_dim()) throw DimensionError("coordinate_projection out of range");
  if (u.dim() == 0) return Subspace::zero(count);
  return Subspace::span(count, u.basis().block(0, first, u.dim(), count));
}

Subspace embed(const Subspace& u, std::size_t ambient_dim, std::size_t offset) {
  if (offset + u.ambient_dim() > ambient_dim) throw DimensionError("embed out of range");
  QMatrix rows(u.dim(), ambient_dim);
  rows.set_block(0, offset, u.basis());
  return Subspace::span(ambient_dim, rows);
}

std::optional<QVector> find_with_components(const Subspace& u, std::span<const std::size_t> cols,
                                            std::span<const Rational> values) {
  if (cols.size() != values.size()) throw DimensionError("find_with_components: length mismatch");
  const QMatrix& b = u.basis();
  QMatrix sys(cols.size(), u.dim());
  for (std::size_t t = 0; t < cols.size(); ++t) {
    if (cols[t] >= u.ambient_dim()) throw DimensionError("find_with_components: column out of range");
    for (std::size_t r = 0; r < u.dim(); ++r) sys(t, r) = b(r, cols[t]);
  }
  auto lambda = solve(sys, values);
  if (!lambda) return std::nullopt;
  QVector v(u.ambient_dim());
  for (std::size_t r = 0; r < u.dim(); ++r) {
    if (sgn((*lambda)[r]) == 0) continue;
    for (std::size_t j = 0; j < u.ambient_dim(); ++j) v[j] += (*lambda)[r] * b(r, j);
  }
  return v;
}

std::vector<std::size_t> index_range(std::size_t first, std::size_t count) {
  std::vector<std::size_t> out(count);
  std::iota(out.begin(), out.end(), first);
  return out;
}

std::string Signature::to_string() const {
  return "(" + std::to_string(positive) + ", " + std::to_string(negative) +
         (zero ? ", degenerate " + std::to_string(zero) : std::string{}) + ")";
}

Signature signature_of(const QMatrix& symmetric) {
  if (!symmetric.is_symmetric()) throw DimensionError("signature: matrix is not symmetric");
  QMatrix m = symmetric;
  const std::size_t n = m.rows();
  auto swap_index = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(m(a, j), m(b, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(m(i, a), m(i, b));
  };
  Signature sig;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && sgn(m(p, p)) == 0) ++p;
    if (p == n) {
      // No diagonal pivot left: fold an off-diagonal entry onto the diagonal.
      std::size_t a = n, b = n;
      for (std::size_t i = k; i < n && a == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (sgn(m(i, j)) != 0) {
            a = i;
            b = j;
            break;
          }
      if (a == n) {
        sig.zero += n - k;
        break;
      }
      for (std::size_t j = 0; j < n; ++j) m(a, j) += m(b, j);
      for (std::size_t i = 0; i < n; ++i) m(i, a) += m(i, b);
      p = a;
    }
    swap_index(k, p);
    const Rational pivot = m(k, k);
    (sgn(pivot) > 0 ? sig.positive : sig.negative) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(m(i, k)) == 0) continue;
      const Rational f = m(i, k) / pivot;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      for (std::size_t j = k; j < n; ++j) m(j, i) = m(i, j);
    }
  }
  return sig;
}

SplitForm::SplitForm(QMatrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw DimensionError("Gram matrix must be square");
  if (!gram_.is_symmetric()) throw DimensionError("Gram matrix must be symmetric");
}

SplitForm SplitForm::tangent_cotangent(std::size_t n) {
  QMatrix g(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, n + i) = 1;
    g(n + i, i) = 1;
  }
  return SplitForm(std::move(g));
}

SplitForm SplitForm::diagonal(std::span<const Rational> entries) { return SplitForm(QMatrix::diagonal(entries)); }

Rational SplitForm::pair(std::span<const Rational> u, std::span<const Rational> v) const {
  if (u.size() != dim() || v.size() != dim()) throw DimensionError("pair: vector length mismatch");
  Rational s;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (sgn(u[i]) == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j)
      if (sgn(v[j]) != 0 && sgn(gram_(i, j)) != 0) s += u[i] * gram_(i, j) * v[j];
  }
  return s;
}

Signature SplitForm::signature() const { return signature_of(gram_); }

bool SplitForm::nondegenerate() const { return rank(gram_) == dim(); }

SplitForm direct_sum(const SplitForm& a, const SplitForm& b) { return SplitForm(block_diag(a.gram(), b.gram())); }

Subspace orthogonal_complement(const SplitForm& form, const Subspace& u) {
  if (u.ambient_dim() != form.dim()) throw DimensionError("orthogonal_complement: dimension mismatch");
  if (!form.nondegenerate()) throw DegenerateFormError("orthogonal_complement: Gram matrix is degenerate");
  if (u.dim() == 0) return Subspace::full(form.dim());
  return Subspace::span(form.dim(), kernel(u.basis() * form.gram()));
}

bool is_isotropic(const SplitForm& form, const Subspace& u) {
  if (u.ambient_dim() != form.dim()) throw DimensionError("is_isotropic: dimension mismatch");
  const QMatrix& b = u.basis();
  return (b * form.gram() * b.transpose()).is_zero();
}

bool is_lagrangian(const SplitForm& form, const Subspace& u) {
  if (u.ambient_dim() != form.dim()) throw DimensionError("is_lagrangian: dimension mismatch");
  const Signature sig = form.signature();
  if (!sig.split())
    throw SignatureError("form has signature " + sig.to_string() +
                         "; Lagrangian subspaces require split signature (n, n)");
  return 2 * u.dim() == form.dim() && is_isotropic(form, u);
}

LinearRelation::LinearRelation(std::size_t source_dim, std::size_t target_dim, Subspace graph)
    : source_(source_dim), target_(target_dim), graph_(std::move(graph)) {
  if (graph_.ambient_dim() != source_ + target_)
    throw DimensionError("relation graph lives in dimension " + std::to_string(graph_.ambient_dim()) +
                         ", expected " + std::to_string(source_ + target_));
}

LinearRelation LinearRelation::graph_of(const QMatrix& map) {
  const std::size_t n = map.cols(), m = map.rows();
  QMatrix rows(n, n + m);
  rows.set_block(0, 0, QMatrix::identity(n));
  rows.set_block(0, n, map.transpose());
  return {n, m, Subspace::span(n + m, rows)};
}

LinearRelation LinearRelation::identity(std::size_t n) { return graph_of(QMatrix::identity(n)); }

LinearRelation LinearRelation::transpose() const {
  std::vector<std::size_t> order(source_ + target_);
  std::iota(order.begin(), order.begin() + target_, source_);
  std::iota(order.begin() + target_, order.end(), 0);
  return {target_, source_, Subspace::span(source_ + target_, graph_.basis().select_cols(order))};
}

LinearRelation compose(const LinearRelation& r, const LinearRelation& s) {
  if (r.target_dim() != s.source_dim())
    throw DimensionError("compose: middle dimensions differ (" + std::to_string(r.target_dim()) + " vs " +
                         std::to_string(s.source_dim()) + ")");
  const std::size_t v = r.source_dim(), w = r.target_dim(), z = s.target_dim();
  const QMatrix& rb = r.graph().basis();
  const QMatrix& sb = s.graph().basis();
  // Coefficient pairs (lambda, mu) whose middle components agree.
  QMatrix middle(rb.rows() + sb.rows(), w);
  middle.set_block(0, 0, rb.block(0, v, rb.rows(), w));
  middle.set_block(rb.rows(), 0, -sb.block(0, 0, sb.rows(), w));
  QMatrix coeffs = kernel(middle.transpose());
  if (coeffs.rows() == 0) return {v, z, Subspace::zero(v + z)};
  QMatrix outer(coeffs.rows(), v + z);
  outer.set_block(0, 0, coeffs.block(0, 0, coeffs.rows(), rb.rows()) * rb.block(0, 0, rb.rows(), v));
  outer.set_block(0, v, coeffs.block(0, rb.rows(), coeffs.rows(), sb.rows()) * sb.block(0, w, sb.rows(), z));
  return {v, z, Subspace::span(v + z, outer)};
}

std::optional<QMatrix> is_graph_over_factor(const LinearRelation& r, Factor factor) {
  const std::size_t n = r.source_dim(), m = r.target_dim();
  const QMatrix& b = r.graph().basis();
  const bool over_source = factor == Factor::source;
  const std::size_t base = over_source ? n : m;
  if (r.graph().dim() != base) return std::nullopt;
  if (base == 0) return QMatrix(over_source ? m : n, 0);
  QMatrix base_part = over_source ? b.block(0, 0, base, n) : b.block(0, n, base, m);
  QMatrix fiber_part = over_source ? b.block(0, n, base, m) : b.block(0, 0, base, n);
  auto inv = inverse(base_part);
  if (!inv) return std::nullopt;
  return ((*inv) * fiber_part).transpose();
}

}  // namespace manin
