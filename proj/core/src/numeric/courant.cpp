#include "manin/numeric/courant.hpp"

#include <cmath>

#include "manin/numeric/fiber.hpp"
#include "manin/numeric/so3.hpp"

namespace manin::numeric {

Field CourantNumeric::bracket_field(Field a, Field b, double h) const {
  return [fn = bracket_fn, a = std::move(a), b = std::move(b), h](const Vec& x) { return fn(a, b, x, h); };
}

Field CourantNumeric::anchor_field(Field e) const {
  return [rho = anchor, e = std::move(e)](const Vec& x) { return Vec(rho(x) * e(x)); };
}

Field CourantNumeric::dual_field(Field beta) const {
  return [rho = anchor, gi = gram_inv, beta = std::move(beta)](const Vec& x) {
    return Vec(gi * rho(x).transpose() * beta(x));
  };
}

FormField constant_three_form(std::size_t n, std::size_t i, std::size_t j, std::size_t k, double c) {
  return three_form(n, [=](const Vec&, std::size_t a, std::size_t b, std::size_t d) {
    // value on the sorted triple
    std::array<std::size_t, 3> t{i, j, k};
    int sign = 1;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2 - p; ++q)
        if (t[q] > t[q + 1]) {
          std::swap(t[q], t[q + 1]);
          sign = -sign;
        }
    if (t[0] == t[1] || t[1] == t[2]) return 0.0;
    return (t[0] == a && t[1] == b && t[2] == d) ? sign * c : 0.0;
  });
}

FormField three_form(std::size_t n, std::function<double(const Vec&, std::size_t, std::size_t, std::size_t)> value) {
  return [n, value = std::move(value)](const Vec& x) {
    Vec out = Vec::Zero(static_cast<Eigen::Index>(n * n * n));
    auto at = [n](std::size_t i, std::size_t j, std::size_t k) { return static_cast<Eigen::Index>((i * n + j) * n + k); };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          const double v = value(x, i, j, k);
          out[at(i, j, k)] = v;
          out[at(j, k, i)] = v;
          out[at(k, i, j)] = v;
          out[at(j, i, k)] = -v;
          out[at(i, k, j)] = -v;
          out[at(k, j, i)] = -v;
        }
    return out;
  };
}

double closedness_residual(const FormField& phi, std::size_t n, const Vec& x, double h) {
  if (n < 4) return 0;
  const Mat d = jacobian(phi, x, h);
  auto at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return d(static_cast<Eigen::Index>((i * n + j) * n + k), static_cast<Eigen::Index>(l));
  };
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          const double v = at(j, k, l, i) - at(i, k, l, j) + at(i, j, l, k) - at(i, j, k, l);
          worst = std::max(worst, std::abs(v));
        }
  return worst;
}

namespace {

Vec standard_bracket(std::size_t n_, const FormField& phi, const Field& a, const Field& b, const Vec& x, double h) {
  const Eigen::Index n = static_cast<Eigen::Index>(n_);
  const Vec ea = a(x), eb = b(x);
  const Mat da = jacobian(a, x, h), db = jacobian(b, x, h);
  const Vec v = ea.head(n), al = ea.tail(n), v2 = eb.head(n), al2 = eb.tail(n);
  const Mat dv = da.topRows(n), dal = da.bottomRows(n), dv2 = db.topRows(n), dal2 = db.bottomRows(n);
  Vec out(2 * n);
  out.head(n) = dv2 * v - dv * v2;
  Vec form = dal2 * v + dv.transpose() * al2 - (dal * v2 - dal.transpose() * v2);
  if (phi) {
    const Vec p = phi(x);
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) s += p[(j * n + k) * n + i] * v[j] * v2[k];
      form[i] += s;
    }
  }
  out.tail(n) = form;
  return out;
}

}  // namespace

CourantNumeric make_standard_unchecked(std::size_t dim, FormField phi) {
  CourantNumeric c;
  c.name = phi ? "standard-twisted" : "standard";
  c.base_dim = dim;
  c.rank = 2 * dim;
  c.gram = standard_gram(dim);
  c.gram_inv = c.gram;
  const Eigen::Index n = static_cast<Eigen::Index>(dim);
  c.anchor = [n](const Vec&) {
    Mat a = Mat::Zero(n, 2 * n);
    a.leftCols(n) = Mat::Identity(n, n);
    return a;
  };
  c.bracket_fn = [dim, phi = std::move(phi)](const Field& a, const Field& b, const Vec& x, double h) {
    return standard_bracket(dim, phi, a, b, x, h);
  };
  return c;
}

CourantNumeric make_standard_twisted(std::size_t dim, FormField phi, const std::vector<Vec>& points, double tol,
                                     double h) {
  if (phi) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      const double r = closedness_residual(phi, dim, points[p], h);
      if (r >= tol)
        throw NotClosedError("make_standard_twisted: d phi = " + std::to_string(r) + " at sample " + std::to_string(p));
    }
  }
  return make_standard_unchecked(dim, std::move(phi));
}

CourantNumeric make_dressing_courant(const ManinPairPoint& pair, std::size_t base_dim, MatrixField anchor,
                                     const std::vector<Vec>& validate_at, double tol, double h) {
  CourantNumeric c;
  c.name = pair.name.empty() ? "dressing" : pair.name + "-dressing";
  c.base_dim = base_dim;
  c.rank = pair.d.dim();
  c.gram = to_double(pair.d.form().gram());
  c.gram_inv = c.gram.inverse();
  c.anchor = std::move(anchor);
  const std::size_t r = c.rank;
  std::vector<double> constants;
  for (const auto& q : pair.d.constants()) constants.push_back(q.get_d());
  c.bracket_fn = [r, constants = std::move(constants), anchor = c.anchor, gram = c.gram, gram_inv = c.gram_inv](
                     const Field& a, const Field& b, const Vec& x, double h) {
    const Vec e1 = a(x), e2 = b(x);
    const Mat rho = anchor(x);
    const Mat d1 = jacobian(a, x, h), d2 = jacobian(b, x, h);
    Vec out = Vec::Zero(static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const double w = e1[i] * e2[j];
        if (w == 0) continue;
        for (std::size_t k = 0; k < r; ++k) out[k] += w * constants[(i * r + j) * r + k];
      }
    out += d2 * (rho * e1) - d1 * (rho * e2) + gram_inv * rho.transpose() * (d1.transpose() * gram * e2);
    return out;
  };
  if (!validate_at.empty()) require_axioms(c, validate_at, tol, h);
  return c;
}

CourantNumeric make_so3_dressing(const std::vector<Vec>& validate_at) {
  return make_dressing_courant(catalog::so3_double(), 3, so3::dressing_anchor, validate_at);
}

SectionLibrary SectionLibrary::standard(std::size_t base_dim, std::size_t rank) {
  SectionLibrary lib;
  const Eigen::Index n = static_cast<Eigen::Index>(base_dim), r = static_cast<Eigen::Index>(rank);
  auto unit = [r](Eigen::Index i) { return Vec(Vec::Unit(r, i % r)); };
  const Eigen::Index mid = r / 2, last = r - 1, x1 = 1 % n, xl = n - 1;

  // generic constants, so that trilinear identities see every direction
  Vec ca(r), cb(r), cc(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    ca[i] = 1;
    cb[i] = (i % 2 ? -1.0 : 1.0) * static_cast<double>(i + 1) / static_cast<double>(r);
    cc[i] = static_cast<double>((i * i + 1) % 3) - 1;
  }
  for (const Vec* v : {&ca, &cb, &cc}) lib.sections.push_back(constant_field(*v));
  lib.section_names.insert(lib.section_names.end(), {"const-a", "const-b", "const-c"});
  lib.sections.push_back([=](const Vec& x) { return Vec(x[0] * unit(1) - x[xl] * unit(r - 2 + r)); });
  lib.section_names.push_back("linear-a");
  lib.sections.push_back([=](const Vec& x) { return Vec(x[x1] * unit(0) + 2 * x[0] * unit(last) + unit(mid)); });
  lib.section_names.push_back("linear-b");
  lib.sections.push_back(
      [=](const Vec& x) { return Vec(0.5 * x[0] * x[x1] * unit(mid) - 0.5 * x[xl] * x[xl] * unit(1) + 0.25 * x[0] * x[0] * unit(last)); });
  lib.section_names.push_back("quadratic");

  auto dx = [n](Eigen::Index i) { return Vec(Vec::Unit(n, i)); };
  lib.one_forms.push_back(constant_field(dx(0)));
  lib.one_forms.push_back(constant_field(dx(xl)));
  lib.one_forms.push_back([=](const Vec& x) { return Vec(x[x1] * dx(0) + x[0] * x[0] * dx(xl)); });

  lib.functions.push_back([](const Vec& x) { return x[0]; });
  lib.functions.push_back([=](const Vec& x) { return x[0] * x[x1] + 0.5 * x[xl] * x[xl]; });
  lib.functions.push_back([=](const Vec& x) { return std::sin(x[0]) * std::cos(x[xl]); });
  return lib;
}

bool AxiomReport::pass() const { return worst() < tol; }

double AxiomReport::worst() const {
  double w = 0;
  for (const auto& [name, r] : entries()) w = std::max(w, r->value);
  return w;
}

std::vector<std::pair<std::string, const Residual*>> AxiomReport::entries() const {
  return {{"c1", &c1}, {"c2", &c2}, {"c3", &c3}, {"c4", &c4}, {"c5", &c5},
          {"rho-rho-star", &rho_rho_star}, {"dual-bracket", &dual_bracket}};
}

AxiomReport check_axioms_numeric(const CourantNumeric& c, const std::vector<Vec>& points, const SectionLibrary& lib,
                                 double tol, double h) {
  AxiomReport rep;
  rep.tol = tol;
  const auto& e = lib.sections;
  const std::size_t ns = e.size();
  std::vector<std::vector<Field>> brackets(ns, std::vector<Field>(ns));
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < ns; ++j) brackets[i][j] = c.bracket_field(e[i], e[j], h);
  std::vector<Field> anchored;
  for (const auto& s : e) anchored.push_back(c.anchor_field(s));

  for (std::size_t p = 0; p < points.size(); ++p) {
    const Vec& x = points[p];
    const Mat rho = c.anchor(x);
    rep.rho_rho_star.update(max_abs(Mat(rho * c.gram_inv * rho.transpose())), p, {});

    for (std::size_t i = 0; i < ns; ++i) {
      const Vec ei = e[i](x);
      const Vec rho_ei = rho * ei;
      // c2
      const ScalarField norm = [&](const Vec& y) { return c.pairing(e[i](y), e[i](y)); };
      const Vec c2 = brackets[i][i](x) - 0.5 * c.gram_inv * rho.transpose() * gradient(norm, x, h);
      rep.c2.update(max_abs(c2), p, {i, i, 0});

      for (std::size_t j = 0; j < ns; ++j) {
        const Vec bij = brackets[i][j](x);
        // c4
        rep.c4.update(max_abs(Vec(rho * bij - lie_bracket(anchored[i], anchored[j], x, h))), p, {i, j, 0});
        // c5
        for (std::size_t f = 0; f < lib.functions.size(); ++f) {
          const auto& fn = lib.functions[f];
          const Field scaled = [&](const Vec& y) { return Vec(fn(y) * e[j](y)); };
          const Vec lhs = c.bracket(e[i], scaled, x, h);
          const Vec rhs = fn(x) * bij + gradient(fn, x, h).dot(rho_ei) * e[j](x);
          rep.c5.update(max_abs(Vec(lhs - rhs)), p, {i, j, f});
        }
        for (std::size_t k = 0; k < ns; ++k) {
          // c1
          const Vec lhs = c.bracket(e[i], brackets[j][k], x, h);
          const Vec rhs = c.bracket(brackets[i][j], e[k], x, h) + c.bracket(e[j], brackets[i][k], x, h);
          rep.c1.update(max_abs(Vec(lhs - rhs)), p, {i, j, k});
          // c3
          const ScalarField inner = [&](const Vec& y) { return c.pairing(e[j](y), e[k](y)); };
          const double l3 = directional(inner, x, rho_ei, h);
          const double r3 = c.pairing(bij, e[k](x)) + c.pairing(e[j](x), brackets[i][k](x));
          rep.c3.update(std::abs(l3 - r3), p, {i, j, k});
        }
      }
    }
    for (std::size_t a = 0; a < lib.one_forms.size(); ++a)
      for (std::size_t b = 0; b < lib.one_forms.size(); ++b) {
        const Vec v = c.bracket(c.dual_field(lib.one_forms[a]), c.dual_field(lib.one_forms[b]), x, h);
        rep.dual_bracket.update(max_abs(v), p, {a, b, 0});
      }
  }
  return rep;
}

void require_axioms(const CourantNumeric& c, const std::vector<Vec>& points, double tol, double h) {
  const AxiomReport rep = check_axioms_numeric(c, points, SectionLibrary::standard(c.base_dim, c.rank), tol, h);
  if (rep.pass()) return;
  for (const auto& [name, r] : rep.entries())
    if (r->value >= tol)
      throw AxiomError(c.name + ": axiom " + name + " residual " + std::to_string(r->value) + " at sample " +
                       std::to_string(r->point));
}

double convergence_ratio(const CourantNumeric& c, const Field& a, const Field& b, const Vec& x, double h) {
  const Vec b1 = c.bracket(a, b, x, h), b2 = c.bracket(a, b, x, h / 2), b4 = c.bracket(a, b, x, h / 4);
  return (b1 - b2).norm() / (b2 - b4).norm();
}

ExactSplittingNumeric make_exact_splitting(const CourantNumeric& c, double h) {
  if (c.rank != 2 * c.base_dim) throw std::invalid_argument("make_exact_splitting: " + c.name + " is not exact");
  ExactSplittingNumeric out;
  out.s = [anchor = c.anchor, gram = c.gram](const Vec& x) { return isotropic_section(anchor(x), gram); };
  out.phi = three_form(c.base_dim, [c, s = out.s, h](const Vec& x, std::size_t i, std::size_t j, std::size_t k) {
    auto column = [&s](std::size_t t) {
      return Field([s, t](const Vec& y) { return Vec(s(y).col(static_cast<Eigen::Index>(t))); });
    };
    return c.pairing(s(x).col(static_cast<Eigen::Index>(i)), c.bracket(column(j), column(k), x, h));
  });
  return out;
}

SplittingResiduals check_exact_splitting(const CourantNumeric& c, const ExactSplittingNumeric& split,
                                         const std::vector<Vec>& points, double h) {
  SplittingResiduals r;
  const Eigen::Index n = static_cast<Eigen::Index>(c.base_dim);
  for (const auto& x : points) {
    const Mat s = split.s(x);
    r.right_inverse = std::max(r.right_inverse, max_abs(Mat(c.anchor(x) * s - Mat::Identity(n, n))));
    r.isotropy = std::max(r.isotropy, max_abs(Mat(s.transpose() * c.gram * s)));
    r.closedness = std::max(r.closedness, closedness_residual(split.phi, c.base_dim, x, h));
  }
  return r;
}

Field projected_section(SubspaceField l, Vec ref) {
  return [l = std::move(l), ref = std::move(ref)](const Vec& x) {
    const Mat b = row_basis(l(x));
    return Vec(b.transpose() * (b * ref));
  };
}

SubspaceField dirac_of_pair(const CourantNumeric& c, const Mat& a, const ExactSplittingNumeric& split) {
  return [gram = c.gram, anchor = c.anchor, a, s = split.s](const Vec& x) {
    PairData p{gram, a, Mat(), anchor(x)};
    return numeric::dirac_of_pair(p, s(x));
  };
}

DiracFieldReport check_dirac_field(const SubspaceField& l, std::size_t n, const FormField& phi,
                                   const std::vector<Vec>& points, double h) {
  DiracFieldReport rep;
  const CourantNumeric std_c = make_standard_unchecked(n, phi);
  for (const auto& x : points) {
    const Mat raw = l(x);
    const Mat basis = row_basis(raw);
    if (basis.rows() != static_cast<Eigen::Index>(n)) {
      ++rep.rank_drops;
      continue;
    }
    rep.lagrangian = std::max(rep.lagrangian, max_abs(Mat(raw * std_c.gram * raw.transpose())));
    std::vector<Field> sections;
    for (Eigen::Index a = 0; a < basis.rows(); ++a) sections.push_back(projected_section(l, basis.row(a).transpose()));
    for (std::size_t a = 0; a < sections.size(); ++a)
      for (std::size_t b = a + 1; b < sections.size(); ++b) {
        const Vec w = std_c.bracket(sections[a], sections[b], x, h);
        rep.integrability = std::max(rep.integrability, lagrangian_residual(w, basis, std_c.gram));
      }
  }
  return rep;
}

}  // namespace manin::numeric
