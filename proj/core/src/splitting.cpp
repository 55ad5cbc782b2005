#include "manin/splitting.hpp"

#include <bit>
#include <stdexcept>

namespace manin {

QVector IsotropicSplitting::apply(std::span<const Rational> xi) const {
  if (xi.size() != rank()) throw DimensionError("splitting: covector length mismatch");
  QVector out(images.cols());
  for (std::size_t k = 0; k < rank(); ++k) {
    if (sgn(xi[k]) == 0) continue;
    for (std::size_t c = 0; c < images.cols(); ++c) out[c] += xi[k] * images(k, c);
  }
  return out;
}

Subspace IsotropicSplitting::image() const { return Subspace::span(images.cols(), images); }

QVector dual_projection(const SplitForm& form, const Subspace& a, std::span<const Rational> e) {
  QVector p(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) p[k] = form.pair(e, a.basis().row(k));
  return p;
}

IsotropicSplitting make_isotropic_splitting(const SplitForm& form, const Subspace& a) {
  const std::size_t m = a.dim();
  if (2 * m != form.dim()) throw std::invalid_argument("make_isotropic_splitting: A is not half-dimensional");
  const QMatrix c = a.echelon_completion();
  const QMatrix& g = form.gram();
  const QMatrix& ab = a.basis();
  QMatrix p = c * g * ab.transpose();
  auto pinv = inverse(p);
  if (!pinv) throw std::invalid_argument("make_isotropic_splitting: pairing degenerate on A");
  QMatrix cn = (*pinv) * c;
  QMatrix b = cn * g * cn.transpose();
  QMatrix j = cn - Rational(1, 2) * (b * ab);
  IsotropicSplitting out{std::move(j)};
  if (!check_splitting(form, a, out).ok()) throw std::invalid_argument("make_isotropic_splitting: A is not isotropic");
  return out;
}

IsotropicSplitting make_isotropic_splitting(const ManinPairPoint& pair) {
  return make_isotropic_splitting(pair.d.form(), pair.g);
}

IsotropicSplitting shift_splitting(const Subspace& a, const IsotropicSplitting& j, const QMatrix& lambda) {
  if (lambda.rows() != j.rank() || lambda.cols() != a.dim()) throw DimensionError("shift_splitting: bad shape");
  return {j.images + lambda * a.basis()};
}

SplittingReport check_splitting(const SplitForm& form, const Subspace& a, const IsotropicSplitting& j) {
  SplittingReport r;
  if (j.images.cols() != form.dim() || j.rank() != a.dim()) return r;
  const QMatrix& g = form.gram();
  r.isotropic = (j.images * g * j.images.transpose()).is_zero();
  r.right_inverse = (j.images * g * a.basis().transpose()) == QMatrix::identity(a.dim());
  return r;
}

LieConstants subalgebra_constants(const ManinPairPoint& pair) {
  const std::size_t m = pair.g.dim();
  LieConstants out{m, std::vector<Rational>(m * m * m)};
  const QMatrix& b = pair.g.basis();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < m; ++l) {
      auto coords = pair.g.coordinates(pair.d.bracket(b.row(i), b.row(l)));
      if (!coords) throw std::invalid_argument("subalgebra_constants: A is not closed under the bracket");
      for (std::size_t k = 0; k < m; ++k) out.c[(i * m + l) * m + k] = (*coords)[k];
    }
  return out;
}

bool QuasiBialgebraData::antisymmetric() const {
  const std::size_t m = rank;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < m; ++l)
      for (std::size_t k = 0; k < m; ++k) {
        if (f(k, i, l) != -f(k, l, i)) return false;
        if (x(i, l, k) != -x(l, i, k) || x(i, l, k) != -x(i, k, l)) return false;
      }
  return true;
}

Multivector QuasiBialgebraData::chi_multivector() const {
  Multivector out;
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t l = i + 1; l < rank; ++l)
      for (std::size_t p = l + 1; p < rank; ++p)
        out.add((1u << i) | (1u << l) | (1u << p), x(i, l, p));
  return out;
}

Multivector QuasiBialgebraData::differential(std::size_t k) const {
  Multivector out;
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t l = i + 1; l < rank; ++l) out.add((1u << i) | (1u << l), -f(k, i, l));
  return out;
}

QuasiBialgebraData derive_quasi_data(const ManinPairPoint& pair, const IsotropicSplitting& j) {
  const std::size_t m = pair.g.dim();
  if (j.rank() != m) throw DimensionError("derive_quasi_data: splitting rank differs from rank of A");
  QuasiBialgebraData out;
  out.rank = m;
  out.F.assign(m * m * m, Rational{});
  out.chi.assign(m * m * m, Rational{});
  out.rho_astar = QMatrix(0, m);
  const auto& form = pair.d.form();
  const QMatrix& a = pair.g.basis();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < m; ++l) {
      const QVector br = pair.d.bracket(j.images.row(i), j.images.row(l));
      for (std::size_t k = 0; k < m; ++k) {
        out.F[(k * m + i) * m + l] = form.pair(br, a.row(k));
        out.chi[(i * m + l) * m + k] = form.pair(br, j.images.row(k));
      }
    }
  return out;
}

namespace {

using Mask = Multivector::Mask;

// Applies a map on generators (of any fixed output degree) as a derivation
// with Koszul sign (-1)^{position * parity}.
template <typename OnGenerator>
Multivector extend_derivation(const Multivector& p, bool odd, OnGenerator&& on_generator) {
  Multivector out;
  for (const auto& [mask, coeff] : p.terms()) {
    Mask before = 0;
    int position = 0;
    for (Mask rest = mask; rest; rest &= rest - 1) {
      const Mask bit = rest & (~rest + 1);
      const Mask after = mask & ~(before | bit);
      Multivector image = on_generator(static_cast<std::size_t>(std::countr_zero(bit)));
      Multivector term = wedge(wedge(Multivector::monomial(before), image), Multivector::monomial(after));
      const Rational sign = (odd && position % 2) ? -1 : 1;
      out += (sign * coeff) * term;
      before |= bit;
      ++position;
    }
  }
  return out;
}

Multivector lie_derivative(const LieConstants& a, std::size_t b, const Multivector& p) {
  return extend_derivation(p, false, [&](std::size_t c) {
    Multivector img;
    for (std::size_t k = 0; k < a.dim; ++k) img.add(Mask{1} << k, a.at(b, c, k));
    return img;
  });
}

}  // namespace

Multivector apply_differential(const QuasiBialgebraData& data, const Multivector& p) {
  return extend_derivation(p, true, [&](std::size_t k) { return data.differential(k); });
}

Multivector schouten_with_chi(const LieConstants& a_bracket, const QuasiBialgebraData& data, const Multivector& p) {
  const Multivector chi = data.chi_multivector();
  // [chi, b] = -L_b chi, extended as an even derivation.
  return extend_derivation(p, false, [&](std::size_t b) { return Rational(-1) * lie_derivative(a_bracket, b, chi); });
}

QuasiJacobiReport check_quasi_jacobi(const LieConstants& a_bracket, const QuasiBialgebraData& data) {
  QuasiJacobiReport r;
  const std::size_t m = data.rank;
  if (a_bracket.dim != m) throw DimensionError("check_quasi_jacobi: rank mismatch");
  for (Mask mask = 1; mask < (Mask{1} << m); ++mask) {
    if (degree(mask) > 3) continue;
    const Multivector p = Multivector::monomial(mask);
    const Multivector lhs = apply_differential(data, apply_differential(data, p));
    const Multivector rhs = schouten_with_chi(a_bracket, data, p);
    if (!(lhs == rhs)) {
      r.d_squared = false;
      r.failure = "d^2 differs from [chi, .] on monomial " + p.to_string();
      break;
    }
  }
  if (!apply_differential(data, data.chi_multivector()).is_zero()) {
    r.d_chi = false;
    if (r.failure.empty()) r.failure = "d chi is nonzero";
  }
  return r;
}

}  // namespace manin
