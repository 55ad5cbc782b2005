#include "manin/rational.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace manin {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

void require_same_shape(const QMatrix& a, const QMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;
  mpz_class p(std::string(num), 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) return std::nullopt;
  Rational r(p, q);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("QMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(std::span<const QVector> rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw DimensionError("ragged rows: row " + std::to_string(i) + " has length " +
                           std::to_string(rows[i].size()) + ", expected " + std::to_string(cols));
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

QMatrix QMatrix::diagonal(std::span<const Rational> entries) {
  QMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

QVector QMatrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return {r.begin(), r.end()};
}

QVector QMatrix::col_vector(std::size_t j) const {
  QVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
  QMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void QMatrix::set_block(std::size_t r0, std::size_t c0, const QMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw DimensionError("set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

QMatrix QMatrix::select_cols(std::span<const std::size_t> cols) const {
  QMatrix m(rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = (*this)(i, cols[j]);
  return m;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool QMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool QMatrix::is_skew() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if ((*this)(i, j) != -(*this)(j, i)) return false;
  return true;
}

QVector QMatrix::apply(std::span<const Rational> x) const {
  if (x.size() != cols_) throw DimensionError("apply: vector length mismatch");
  QVector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("product: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " * " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  QMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  require_same_shape(a, b, "sum");
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  require_same_shape(a, b, "difference");
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

QMatrix operator-(const QMatrix& a) {
  QMatrix c = a;
  for (auto& q : c.data_) q = -q;
  return c;
}

QMatrix operator*(const Rational& s, const QMatrix& a) {
  QMatrix c = a;
  for (auto& q : c.data_) q *= s;
  return c;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string QMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

QMatrix hstack(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hstack: row count mismatch");
  QMatrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

QMatrix vstack(const QMatrix& a, const QMatrix& b) {
  if (a.rows() == 0) return b.rows() == 0 ? QMatrix(0, std::max(a.cols(), b.cols())) : b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw DimensionError("vstack: column count mismatch");
  QMatrix c(a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

QMatrix block_diag(const QMatrix& a, const QMatrix& b) {
  QMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), a.cols(), b);
  return c;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

QVector unit_vector(std::size_t n, std::size_t i) {
  QVector v(n);
  v.at(i) = 1;
  return v;
}

QVector operator+(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector sum: length mismatch");
  QVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

QVector operator-(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector difference: length mismatch");
  QVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

QVector operator*(const Rational& s, const QVector& a) {
  QVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

Echelon rref(QMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < cols; ++j)
        if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {m.block(0, 0, r, cols), std::move(pivots)};
}

std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

QMatrix kernel(const QMatrix& m) {
  const auto [red, pivots] = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  QMatrix k(n - pivots.size(), n);
  std::size_t out = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    k(out, f) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) k(out, pivots[r]) = -red(r, f);
    ++out;
  }
  return k;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse: matrix not square");
  const std::size_t n = m.rows();
  auto [red, pivots] = rref(hstack(m, QMatrix::identity(n)));
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
  return red.block(0, n, n, n);
}

std::optional<QVector> solve(const QMatrix& m, std::span<const Rational> b) {
  if (b.size() != m.rows()) throw DimensionError("solve: rhs length mismatch");
  QMatrix aug(m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = b[i];
  const auto [red, pivots] = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  QVector x(m.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = red(r, m.cols());
  return x;
}

}  // namespace manin
