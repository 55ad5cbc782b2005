#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace manin {

/// Exact scalar of the algebraic tier.
using Rational = mpq_class;
using QVector = std::vector<Rational>;

/// Thrown when operands have incompatible shapes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "p", "-p" or "p/q" (no whitespace). Returns nullopt on malformed input
/// or zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Dense row-major matrix over Q. Vectors are rows when a matrix lists a
/// spanning set, columns when a matrix acts as a linear map.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(std::span<const QVector> rows, std::size_t cols);
  static QMatrix diagonal(std::span<const Rational> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  QVector row_vector(std::size_t i) const;
  QVector col_vector(std::size_t j) const;

  QMatrix transpose() const;
  QMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const QMatrix& b);
  QMatrix select_cols(std::span<const std::size_t> cols) const;

  bool is_zero() const;
  bool is_symmetric() const;
  bool is_skew() const;

  QVector apply(std::span<const Rational> x) const;  // this * x

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a);
  friend QMatrix operator*(const Rational& s, const QMatrix& a);
  friend bool operator==(const QMatrix& a, const QMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

QMatrix hstack(const QMatrix& a, const QMatrix& b);
QMatrix vstack(const QMatrix& a, const QMatrix& b);
QMatrix block_diag(const QMatrix& a, const QMatrix& b);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
bool is_zero(std::span<const Rational> v);
QVector unit_vector(std::size_t n, std::size_t i);
QVector operator+(const QVector& a, const QVector& b);
QVector operator-(const QVector& a, const QVector& b);
QVector operator*(const Rational& s, const QVector& a);

/// Reduced row-echelon form with pivot columns.
struct Echelon {
  QMatrix reduced;  // only the nonzero rows
  std::vector<std::size_t> pivots;
};
Echelon rref(QMatrix m);

std::size_t rank(const QMatrix& m);
/// Basis of {x : m x = 0}, one vector per row.
QMatrix kernel(const QMatrix& m);
std::optional<QMatrix> inverse(const QMatrix& m);
/// Some solution of m x = b, if consistent.
std::optional<QVector> solve(const QMatrix& m, std::span<const Rational> b);

}  // namespace manin
