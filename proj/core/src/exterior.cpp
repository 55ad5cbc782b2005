#include "manin/exterior.hpp"

#include <bit>

namespace manin {

int degree(Multivector::Mask m) { return std::popcount(m); }

int wedge_sign(Multivector::Mask a, Multivector::Mask b) {
  if (a & b) return 0;
  // count pairs (i in a, j in b) with i > j
  int inversions = 0;
  for (Multivector::Mask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(a >> (j + 1));
  }
  return inversions % 2 ? -1 : 1;
}

Multivector Multivector::monomial(Mask mask, Rational coeff) {
  Multivector m;
  m.add(mask, coeff);
  return m;
}

void Multivector::add(Mask mask, const Rational& coeff) {
  if (sgn(coeff) == 0) return;
  auto [it, inserted] = terms_.try_emplace(mask, coeff);
  if (!inserted) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Multivector& Multivector::operator+=(const Multivector& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

Multivector operator*(const Rational& s, const Multivector& a) {
  Multivector out;
  if (sgn(s) == 0) return out;
  for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, s * c);
  return out;
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  Multivector out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_)
      if (int s = wedge_sign(ma, mb)) out.add(ma | mb, s * ca * cb);
  return out;
}

std::string Multivector::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += manin::to_string(c);
    for (Mask rest = m; rest; rest &= rest - 1) out += " a" + std::to_string(std::countr_zero(rest));
  }
  return out;
}

}  // namespace manin
