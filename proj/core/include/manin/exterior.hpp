#pragma once

// Sparse exterior algebra on a rational vector space with a fixed basis.
// A monomial a_{i1} ^ ... ^ a_{ir} with i1 < ... < ir is keyed by its bitmask.

#include <cstdint>
#include <map>

#include "manin/rational.hpp"

namespace manin {

class Multivector {
 public:
  using Mask = std::uint32_t;

  Multivector() = default;
  static Multivector monomial(Mask mask, Rational coeff = 1);
  static Multivector generator(std::size_t i) { return monomial(Mask{1} << i); }

  const std::map<Mask, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(Mask mask, const Rational& coeff);

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(const Rational& s, const Multivector& a);
  friend Multivector wedge(const Multivector& a, const Multivector& b);
  friend bool operator==(const Multivector&, const Multivector&) = default;

  std::string to_string() const;

 private:
  std::map<Mask, Rational> terms_;
};

/// Sign of moving the generators of b past those of a into sorted order, or 0
/// if a and b share a generator.
int wedge_sign(Multivector::Mask a, Multivector::Mask b);
int degree(Multivector::Mask m);

}  // namespace manin
