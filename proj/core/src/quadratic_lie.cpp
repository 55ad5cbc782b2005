#include "manin/quadratic_lie.hpp"

#include <stdexcept>

namespace manin {

namespace {

std::string triple(std::size_t i, std::size_t j, std::size_t k) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

std::vector<Rational> zero_constants(std::size_t n) { return std::vector<Rational>(n * n * n); }

}  // namespace

QuadraticLieAlgebra::QuadraticLieAlgebra(std::size_t dim, std::vector<Rational> constants, SplitForm form)
    : dim_(dim), c_(std::move(constants)), form_(std::move(form)) {
  if (c_.size() != dim_ * dim_ * dim_) throw DimensionError("structure constants must have dim^3 entries");
  if (form_.dim() != dim_) throw DimensionError("pairing dimension differs from algebra dimension");
}

QuadraticLieAlgebra QuadraticLieAlgebra::abelian(SplitForm form) {
  const std::size_t n = form.dim();
  return {n, zero_constants(n), std::move(form)};
}

bool QuadraticLieAlgebra::is_abelian() const {
  for (const auto& x : c_)
    if (sgn(x) != 0) return false;
  return true;
}

QVector QuadraticLieAlgebra::bracket(std::span<const Rational> x, std::span<const Rational> y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DimensionError("bracket: vector length mismatch");
  QVector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (sgn(y[j]) == 0) continue;
      const Rational w = x[i] * y[j];
      for (std::size_t k = 0; k < dim_; ++k)
        if (sgn(c(i, j, k)) != 0) out[k] += w * c(i, j, k);
    }
  }
  return out;
}

QVector QuadraticLieAlgebra::bracket_basis(std::size_t i, std::size_t j) const {
  QVector out(dim_);
  for (std::size_t k = 0; k < dim_; ++k) out[k] = c(i, j, k);
  return out;
}

QMatrix QuadraticLieAlgebra::ad(std::span<const Rational> x) const {
  QMatrix m(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    QVector col = bracket(x, unit_vector(dim_, j));
    for (std::size_t k = 0; k < dim_; ++k) m(k, j) = col[k];
  }
  return m;
}

std::string jacobi_failure(const LieConstants& g) {
  const std::size_t n = g.dim;
  // [e_i,[e_j,e_k]] + cyclic, expanded in structure constants.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t out = 0; out < n; ++out) {
          Rational s;
          for (std::size_t m = 0; m < n; ++m) {
            s += g.at(j, k, m) * g.at(i, m, out);
            s += g.at(k, i, m) * g.at(j, m, out);
            s += g.at(i, j, m) * g.at(k, m, out);
          }
          if (sgn(s) != 0) return triple(i, j, k);
        }
  return {};
}

QuadraticLieReport check_quadratic_lie(const QuadraticLieAlgebra& d) {
  QuadraticLieReport r;
  const std::size_t n = d.dim();
  for (std::size_t i = 0; i < n && r.antisymmetric; ++i)
    for (std::size_t j = i; j < n && r.antisymmetric; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (d.c(i, j, k) != -d.c(j, i, k)) {
          r.antisymmetric = false;
          r.failures.push_back("antisymmetry " + triple(i, j, k));
          break;
        }
  if (auto w = jacobi_failure(LieConstants{n, d.constants()}); !w.empty()) {
    r.jacobi = false;
    r.failures.push_back("jacobi " + w);
  }
  const QMatrix& g = d.form().gram();
  for (std::size_t i = 0; i < n && r.ad_invariant; ++i)
    for (std::size_t j = 0; j < n && r.ad_invariant; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        // <[e_i,e_j],e_k> + <e_j,[e_i,e_k]>
        Rational s;
        for (std::size_t m = 0; m < n; ++m) s += d.c(i, j, m) * g(m, k) + g(j, m) * d.c(i, k, m);
        if (sgn(s) != 0) {
          r.ad_invariant = false;
          r.failures.push_back("ad-invariance " + triple(i, j, k));
          break;
        }
      }
  r.nondegenerate = d.form().nondegenerate();
  if (!r.nondegenerate) r.failures.push_back("pairing is degenerate");
  r.signature = d.form().signature();
  return r;
}

bool is_subalgebra(const QuadraticLieAlgebra& d, const Subspace& u) {
  if (u.ambient_dim() != d.dim()) throw DimensionError("is_subalgebra: dimension mismatch");
  const QMatrix& b = u.basis();
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = i + 1; j < u.dim(); ++j)
      if (!u.contains(d.bracket(b.row(i), b.row(j)))) return false;
  return true;
}

bool is_manin_pair(const QuadraticLieAlgebra& d, const Subspace& g) {
  return is_lagrangian(d.form(), g) && is_subalgebra(d, g);
}

ManinPairPoint make_group_pair_double(const LieConstants& g, const QMatrix& kappa) {
  const std::size_t n = g.dim;
  if (kappa.rows() != n || kappa.cols() != n) throw DimensionError("kappa has wrong shape");
  if (!kappa.is_symmetric()) throw std::invalid_argument("kappa is not symmetric");
  QuadraticLieAlgebra single(n, g.c, SplitForm(kappa));
  auto rep = check_quadratic_lie(single);
  if (!rep.ad_invariant) throw std::invalid_argument("kappa is not ad-invariant");
  if (!rep.nondegenerate) throw std::invalid_argument("kappa is degenerate");
  if (!rep.jacobi) throw std::invalid_argument("constants violate Jacobi: " + rep.failures.front());

  const std::size_t m = 2 * n;
  std::vector<Rational> c(m * m * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        c[(i * m + j) * m + k] = g.at(i, j, k);
        c[((n + i) * m + n + j) * m + n + k] = g.at(i, j, k);
      }
  QuadraticLieAlgebra d(m, std::move(c), SplitForm(block_diag(kappa, -kappa)));
  QMatrix diag(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    diag(i, i) = 1;
    diag(i, n + i) = 1;
  }
  return {std::move(d), Subspace::span(m, diag), {}};
}

ManinPairPoint direct_sum(const ManinPairPoint& a, const ManinPairPoint& b) {
  const std::size_t n = a.d.dim(), m = b.d.dim(), t = n + m;
  std::vector<Rational> c(t * t * t);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[(i * t + j) * t + k] = a.d.c(i, j, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) c[((n + i) * t + n + j) * t + n + k] = b.d.c(i, j, k);
  QMatrix rows(a.rank() + b.rank(), t);
  rows.set_block(0, 0, a.g.basis());
  rows.set_block(a.rank(), n, b.g.basis());
  std::string name = a.name.empty() || b.name.empty() ? std::string{} : a.name + "+" + b.name;
  return {QuadraticLieAlgebra(t, std::move(c), direct_sum(a.d.form(), b.d.form())), Subspace::span(t, rows),
          std::move(name)};
}

namespace catalog {

LieConstants so3() {
  LieConstants g{3, zero_constants(3)};
  auto set = [&](std::size_t i, std::size_t j, std::size_t k) {
    g.c[(i * 3 + j) * 3 + k] = 1;
    g.c[(j * 3 + i) * 3 + k] = -1;
  };
  set(0, 1, 2);
  set(1, 2, 0);
  set(2, 0, 1);
  return g;
}

QMatrix so3_killing_dot() { return QMatrix::identity(3); }

LieConstants sl2() {
  // basis (h, e, f)
  LieConstants g{3, zero_constants(3)};
  auto set = [&](std::size_t i, std::size_t j, std::size_t k, int v) {
    g.c[(i * 3 + j) * 3 + k] = v;
    g.c[(j * 3 + i) * 3 + k] = -v;
  };
  set(0, 1, 1, 2);
  set(0, 2, 2, -2);
  set(1, 2, 0, 1);
  return g;
}

QMatrix sl2_trace_form() { return QMatrix{{2, 0, 0}, {0, 0, 1}, {0, 1, 0}}; }

ManinPairPoint abelian(std::size_t n) {
  QVector diag(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = 1;
    diag[n + i] = -1;
  }
  QMatrix g(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = 1;
    g(i, n + i) = 1;
  }
  return {QuadraticLieAlgebra::abelian(SplitForm::diagonal(diag)), Subspace::span(2 * n, g),
          "abelian-r" + std::to_string(2 * n)};
}

ManinPairPoint so3_double() {
  auto p = make_group_pair_double(so3(), so3_killing_dot());
  p.name = "so3-double";
  return p;
}

ManinPairPoint sl2_double() {
  auto p = make_group_pair_double(sl2(), sl2_trace_form());
  p.name = "sl2-double";
  return p;
}

ManinPairPoint sl2_double_standard() {
  auto p = sl2_double();
  p.g = Subspace::span(6, QMatrix{{1, 0, 0, -1, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 1}});
  p.name = "sl2-double-standard";
  return p;
}

ManinPairPoint bialgebra_double() {
  const std::size_t n = 2, m = 4;
  // [e1,e2] = e2 on g, [f1,f2] = f2 on the dual.
  LieConstants g{n, zero_constants(n)}, h{n, zero_constants(n)};
  g.c[(0 * n + 1) * n + 1] = 1;
  g.c[(1 * n + 0) * n + 1] = -1;
  h.c = g.c;
  std::vector<Rational> c(m * m * m);
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> Rational& { return c[(i * m + j) * m + k]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        at(i, j, k) = g.at(i, j, k);
        at(n + i, n + j, n + k) = h.at(i, j, k);
      }
  // [e_i, f^j] = -sum_k g(i,k,j) f^k + sum_l h(j,l,i) e_l
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        at(i, n + j, n + k) = -g.at(i, k, j);
        at(n + j, i, n + k) = g.at(i, k, j);
      }
      for (std::size_t l = 0; l < n; ++l) {
        at(i, n + j, l) = h.at(j, l, i);
        at(n + j, i, l) = -h.at(j, l, i);
      }
    }
  QMatrix gram(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    gram(i, n + i) = 1;
    gram(n + i, i) = 1;
  }
  return {QuadraticLieAlgebra(m, std::move(c), SplitForm(gram)), Subspace::coordinate(m, 0, n), "bialgebra-double"};
}

std::vector<std::string> names() {
  return {"abelian-r2", "abelian-r4", "so3-double", "sl2-double", "sl2-double-standard", "bialgebra-double"};
}

ManinPairPoint by_name(const std::string& name) {
  if (name == "abelian-r2") return abelian(1);
  if (name == "abelian-r4") return abelian(2);
  if (name == "so3-double") return so3_double();
  if (name == "sl2-double") return sl2_double();
  if (name == "sl2-double-standard") return sl2_double_standard();
  if (name == "bialgebra-double") return bialgebra_double();
  throw std::out_of_range("unknown catalog pair '" + name + "'");
}

}  // namespace catalog

}  // namespace manin
