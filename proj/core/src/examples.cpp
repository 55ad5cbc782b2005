#include "manin/examples.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include "manin/dictionary.hpp"
#include "manin/reduction.hpp"

namespace manin {

using numeric::Mat;
using numeric::Residual;
using numeric::Vec;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::error:
      break;
  }
  return "error";
}

Outcome below(double residual, double tol, std::string witness) {
  return {residual < tol, residual, std::move(witness)};
}

CheckResult timed(const std::string& name, double tol, const std::function<Outcome()>& body) {
  CheckResult r;
  r.name = name;
  r.tol = tol;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = body();
    r.status = o.pass ? CheckStatus::pass : CheckStatus::fail;
    r.residual = o.residual;
    r.witness = o.witness;
  } catch (const std::exception& e) {
    r.status = CheckStatus::error;
    r.residual = NAN;
    r.witness = e.what();
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

// Shared report computed inside the first check that needs it, so that its
// time and any exception are attributed to a check.
template <class T>
class Lazy {
 public:
  explicit Lazy(std::function<T()> make) : make_(std::move(make)) {}
  const T& get() {
    if (!value_) value_ = make_();
    return *value_;
  }

 private:
  std::function<T()> make_;
  std::optional<T> value_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string at(const Residual& r) {
  std::ostringstream os;
  os << "point " << r.point << " items (" << r.items[0] << "," << r.items[1] << "," << r.items[2] << ")";
  return os.str();
}

Outcome residual_below(const Residual& r, double tol) { return below(r.value, tol, at(r)); }

Outcome predicate(bool ok, std::string witness = {}) { return {ok, ok ? 0.0 : 1.0, std::move(witness)}; }

void add_axioms(std::vector<CheckResult>& out, const numeric::CourantNumeric& c, const std::vector<Vec>& pts,
                const ExampleParams& p) {
  Lazy<numeric::AxiomReport> rep([&] {
    return check_axioms_numeric(c, pts, numeric::SectionLibrary::standard(c.base_dim, c.rank), p.tol, p.step);
  });
  const std::vector<std::string> names = {"c1", "c2", "c3", "c4", "c5", "rho-rho-star", "dual-bracket"};
  for (std::size_t i = 0; i < names.size(); ++i)
    out.push_back(timed("axiom-" + names[i], p.tol, [&] { return residual_below(*rep.get().entries()[i].second, p.tol); }));
}

// Sections with nonvanishing third derivatives, for the step-halving ratio.
std::pair<numeric::Field, numeric::Field> transcendental_sections(std::size_t n, std::size_t r) {
  const Eigen::Index last = static_cast<Eigen::Index>(r) - 1, xl = static_cast<Eigen::Index>(n) - 1;
  numeric::Field a = [r, xl](const Vec& x) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(r));
    v[0] = std::sin(x[0]) * std::cos(x[xl]);
    v[1] = std::exp(0.5 * x[xl]);
    return v;
  };
  numeric::Field b = [r, last](const Vec& x) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(r));
    v[last] = std::cos(x[0] + 0.3);
    v[0] = std::sin(2 * x[0]) * x[0];
    return v;
  };
  return {a, b};
}

CheckResult convergence_check(const numeric::CourantNumeric& c, const Vec& x) {
  return timed("fd-convergence-ratio", 0.5, [&] {
    const auto [a, b] = transcendental_sections(c.base_dim, c.rank);
    const double ratio = numeric::convergence_ratio(c, a, b, x, 1e-2);
    return below(std::abs(ratio - 4), 0.5, "ratio " + fmt(ratio));
  });
}

std::vector<Vec> chart_points(const ExampleParams& p) {
  return numeric::sample_ball(3, numeric::so3::kChartRadius, p.samples, p.seed);
}

std::vector<CheckResult> run_standard_twisted(const ExampleParams& p) {
  std::vector<CheckResult> out;
  const auto pts = numeric::sample_ball(3, 1.0, p.samples, p.seed);
  const auto c = numeric::make_standard_twisted(3, numeric::constant_three_form(3, 0, 1, 2), pts, p.tol, p.step);
  add_axioms(out, c, pts, p);
  out.push_back(timed("twist-term", p.tol, [&] {
    Vec ex = Vec::Zero(6), ey = Vec::Zero(6), expected = Vec::Zero(6);
    ex[0] = 1;
    ey[1] = 1;
    expected[5] = 1;  // dz
    double worst = 0;
    for (const auto& x : pts)
      worst = std::max(worst, numeric::max_abs(Vec(
                                  c.bracket(numeric::constant_field(ex), numeric::constant_field(ey), x, p.step) -
                                  expected)));
    return below(worst, p.tol);
  }));
  out.push_back(convergence_check(c, pts.front()));
  return out;
}

std::vector<CheckResult> run_nonclosed_control(const ExampleParams& p) {
  std::vector<CheckResult> out;
  const auto pts = numeric::sample_ball(4, 1.0, p.samples, p.seed);
  const auto phi = numeric::three_form(4, [](const Vec& x, std::size_t i, std::size_t j, std::size_t k) {
    return i == 0 && j == 1 && k == 2 ? x[3] : 0.0;
  });
  out.push_back(timed("closedness-gate-rejects", 0, [&] {
    try {
      numeric::make_standard_twisted(4, phi, pts, p.tol, p.step);
    } catch (const numeric::NotClosedError& e) {
      return predicate(true, e.what());
    }
    return predicate(false, "non-closed form accepted");
  }));
  out.push_back(timed("c1-exceeds-1e-3", 1e-3, [&] {
    const auto c = numeric::make_standard_unchecked(4, phi);
    const auto rep =
        numeric::check_axioms_numeric(c, pts, numeric::SectionLibrary::standard(4, 8), p.tol, p.step);
    return Outcome{rep.c1.value > 1e-3, rep.c1.value, at(rep.c1)};
  }));
  return out;
}

std::vector<CheckResult> run_dressing(const ExampleParams& p) {
  std::vector<CheckResult> out;
  const auto pts = chart_points(p);
  const ManinPairPoint pair = catalog::so3_double();
  const auto c = numeric::make_so3_dressing();
  const Mat a = numeric::to_double(pair.g.basis());
  add_axioms(out, c, pts, p);
  out.push_back(timed("constants-bracket-to-d", p.tol, [&] {
    double worst = 0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        Vec expected(6);
        const QVector e = pair.d.bracket_basis(i, j);
        for (Eigen::Index t = 0; t < 6; ++t) expected[t] = e[static_cast<std::size_t>(t)].get_d();
        const auto ei = numeric::constant_field(Vec::Unit(6, static_cast<Eigen::Index>(i)));
        const auto ej = numeric::constant_field(Vec::Unit(6, static_cast<Eigen::Index>(j)));
        for (const auto& x : pts) worst = std::max(worst, numeric::max_abs(Vec(c.bracket(ei, ej, x, p.step) - expected)));
      }
    return below(worst, p.tol);
  }));
  out.push_back(timed("g-closure", p.tol, [&] {
    double worst = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.rows(); ++j)
        for (const auto& x : pts) {
          const Vec w = c.bracket(numeric::constant_field(a.row(i).transpose()),
                                  numeric::constant_field(a.row(j).transpose()), x, p.step);
          worst = std::max(worst, numeric::lagrangian_residual(w, a, c.gram));
        }
    return below(worst, p.tol);
  }));
  const auto split = numeric::make_exact_splitting(c, p.step);
  Lazy<numeric::SplittingResiduals> sr([&] { return numeric::check_exact_splitting(c, split, pts, p.step); });
  out.push_back(timed("splitting-right-inverse", 1e-10, [&] { return below(sr.get().right_inverse, 1e-10); }));
  out.push_back(timed("splitting-isotropic", 1e-10, [&] { return below(sr.get().isotropy, 1e-10); }));
  out.push_back(timed("phi-closed", p.tol, [&] { return below(sr.get().closedness, p.tol); }));
  out.push_back(timed("phi-bi-invariant", p.tol, [&] {
    // a bi-invariant 3-form is a constant multiple of det J_l in exponential coordinates
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& x : pts) {
      const double q = split.phi(x)[(0 * 3 + 1) * 3 + 2] / numeric::so3::left_jacobian(x).determinant();
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    return below((hi - lo) / std::max(std::abs(hi), 1e-300), p.tol, "ratio in [" + fmt(lo) + ", " + fmt(hi) + "]");
  }));
  const auto ls = numeric::dirac_of_pair(c, a, split);
  Lazy<numeric::DiracFieldReport> dr([&] { return numeric::check_dirac_field(ls, 3, split.phi, pts, p.step); });
  out.push_back(timed("ls-lagrangian", p.tol, [&] { return below(dr.get().lagrangian, p.tol); }));
  out.push_back(timed("ls-integrable", p.tol, [&] { return below(dr.get().integrability, p.tol); }));
  out.push_back(timed("ls-rank", 0, [&] {
    return predicate(dr.get().rank_drops == 0, std::to_string(dr.get().rank_drops) + " rank drops");
  }));
  out.push_back(convergence_check(c, pts.front()));
  return out;
}

std::vector<CheckResult> run_canonical(const ExampleParams& p) {
  std::vector<CheckResult> out;
  const auto pts = chart_points(p);
  const ManinPairPoint pair = catalog::so3_double();
  const Mat a = numeric::to_double(pair.g.basis());
  const auto c = numeric::make_so3_dressing();
  out.push_back(timed("k-lagrangian-exact", 0, [&] {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto fiber = numeric::canonical_fiber_exact(numeric::frozen_so3_pair(numeric::so3::freeze(pts[i])));
      const auto rep = check_hamiltonian_fiber(fiber);
      if (!is_lagrangian(fiber.form(), fiber.K) || !rep.ok())
        return predicate(false, "point " + std::to_string(i) + ": " + rep.failure());
    }
    return predicate(true, std::to_string(pts.size()) + " frozen fibers");
  }));
  out.push_back(timed("strong-dirac-exact", 0, [&] {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto pf = numeric::frozen_so3_pair(numeric::so3::freeze(pts[i]));
      const auto id = numeric::exact_isotropic_section(pf);
      const auto fiber = numeric::canonical_fiber_exact(pf);
      const auto l = dirac_from_k(fiber, id);
      const auto rep = check_strong_dirac_point(l.L, QMatrix::identity(3), dirac_of_pair_point(pf, id));
      if (!rep.ok()) return predicate(false, "point " + std::to_string(i) + ": " + rep.failure());
    }
    return predicate(true);
  }));
  const auto lib = numeric::SectionLibrary::standard(3, 6);
  Lazy<numeric::GeneratorBracketReport> gb(
      [&] { return numeric::canonical_generator_brackets(c, a, pts, lib.one_forms, p.step); });
  out.push_back(timed("generators-aa", p.tol, [&] { return residual_below(gb.get().aa, p.tol); }));
  out.push_back(timed("generators-ab", p.tol, [&] {
    const auto& g = gb.get();
    return g.ab.value >= g.ba.value ? residual_below(g.ab, p.tol) : residual_below(g.ba, p.tol);
  }));
  out.push_back(timed("generators-bb", p.tol, [&] { return residual_below(gb.get().bb, p.tol); }));
  out.push_back(timed("strong-dirac-numeric", p.tol, [&] {
    const auto pl = numeric::so3_canonical_pipeline();
    const auto rep = numeric::check_strong_dirac(numeric::induced_dirac(pl), 3, pl.J, pl.dJ, pl.L, pl.split.phi, 3,
                                                 pts, p.tol, p.step);
    const double r = std::max({rep.forward_defect, rep.integrability.integrability, rep.integrability.lagrangian});
    return Outcome{rep.pass(p.tol), r, "min transversality " + std::to_string(rep.min_transversality)};
  }));
  out.push_back(timed("orbit-tangency", p.tol, [&] {
    const double t0 = 1.5;
    std::vector<Vec> sphere;
    for (const auto& x : numeric::sample_ball(3, 1.0, p.samples, p.seed + 1))
      if (x.norm() > 1e-3) sphere.push_back(t0 * x.normalized());
    const numeric::ScalarField con = [t0](const Vec& x) { return x.squaredNorm() - t0 * t0; };
    return below(numeric::orbit_tangency(c, a, {con}, sphere, p.step), p.tol);
  }));
  return out;
}

std::vector<CheckResult> run_strong_dirac_control(const ExampleParams& p) {
  // L_X = graph(0) = T over R^2, J constant into R^2 with L_S = T^*
  const numeric::SubspaceField lx = [](const Vec&) {
    Mat l = Mat::Zero(2, 4);
    l(0, 0) = 1;
    l(1, 1) = 1;
    return l;
  };
  const numeric::SubspaceField ls = [](const Vec&) {
    Mat l = Mat::Zero(2, 4);
    l(0, 2) = 1;
    l(1, 3) = 1;
    return l;
  };
  const numeric::Field J = [](const Vec&) { return Vec(Vec::Zero(2)); };
  const numeric::MatrixField dJ = [](const Vec&) { return Mat(Mat::Zero(2, 2)); };
  const auto pts = numeric::sample_ball(2, 1.0, p.samples, p.seed);
  std::vector<CheckResult> out;
  out.push_back(timed("transversality-fails", 0, [&] {
    const auto rep = numeric::check_strong_dirac(lx, 2, J, dJ, ls, {}, 2, pts, p.tol, p.step);
    const bool none = std::none_of(rep.transversal.begin(), rep.transversal.end(), [](bool b) { return b; });
    return Outcome{none && !rep.pass(p.tol), rep.min_transversality, "transversality fails at every sample"};
  }));
  return out;
}

numeric::QuasiPoissonReport quasi_report(const IsotropicSplitting& j, const std::vector<Vec>& pts,
                                         const ExampleParams& p) {
  const ManinPairPoint pair = catalog::so3_double();
  auto pl = numeric::so3_canonical_pipeline();
  pl.j = numeric::to_double(j.images);
  const auto t = numeric::QuasiTensors::from(derive_quasi_data(pair, j));
  const auto fns = numeric::jacobiator_functions(3, {[](const Vec& x) { return numeric::so3::trace(x); }});
  return numeric::check_quasi_poisson(pl.fields(), t, pts, fns, p.step);
}

void add_quasi(std::vector<CheckResult>& out, const std::string& prefix, const IsotropicSplitting& j,
               const std::vector<Vec>& pts, const ExampleParams& p) {
  Lazy<numeric::QuasiPoissonReport> r([&] { return quasi_report(j, pts, p); });
  out.push_back(timed(prefix + "qpois1", p.nested_tol, [&] {
    Outcome o = residual_below(r.get().qpois1, p.nested_tol);
    o.witness += " scale " + fmt(r.get().scale1);
    return o;
  }));
  out.push_back(timed(prefix + "qpois2", p.nested_tol, [&] {
    Outcome o = residual_below(r.get().qpois2, p.nested_tol);
    o.witness += " scale " + fmt(r.get().scale2);
    return o;
  }));
  out.push_back(timed(prefix + "qpois3", p.tol, [&] { return residual_below(r.get().qpois3, p.tol); }));
}

IsotropicSplitting shifted_so3_splitting() {
  const ManinPairPoint pair = catalog::so3_double();
  QMatrix lambda(3, 3);
  lambda(0, 1) = Rational(1, 2);
  lambda(1, 0) = Rational(-1, 2);
  lambda(1, 2) = 1;
  lambda(2, 1) = -1;
  lambda(0, 2) = Rational(-1, 3);
  lambda(2, 0) = Rational(1, 3);
  return shift_splitting(pair.g, make_isotropic_splitting(pair), lambda);
}

std::vector<CheckResult> run_quasi_poisson(const ExampleParams& p) {
  std::vector<CheckResult> out;
  const auto pts = chart_points(p);
  const ManinPairPoint pair = catalog::so3_double();
  const IsotropicSplitting j = make_isotropic_splitting(pair);
  out.push_back(timed("quasi-jacobi-exact", 0, [&] {
    const auto rep = check_quasi_jacobi(subalgebra_constants(pair), derive_quasi_data(pair, j));
    return predicate(rep.ok(), rep.failure);
  }));
  add_quasi(out, "", j, pts, p);
  add_quasi(out, "shifted-", shifted_so3_splitting(), pts, p);
  out.push_back(timed("pi-frozen-vs-pipeline", p.tol, [&] {
    const auto pl = numeric::so3_canonical_pipeline();
    double worst = 0;
    std::size_t where = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto fp = numeric::so3::freeze(pts[i]);
      const auto pf = numeric::frozen_so3_pair(fp);
      const auto id = numeric::exact_isotropic_section(pf);
      const auto q = pi_from_dirac({dirac_of_pair_point(pf, id)}, QMatrix::identity(3), pf, id, j);
      const Mat jl_inv = numeric::so3::left_jacobian_inverse(fp.theta);
      const Mat chart = jl_inv * numeric::to_double(q.Pi) * jl_inv.transpose();
      const double r = numeric::max_abs(Mat(chart - pl.pi(fp.theta)));
      if (r > worst) worst = r, where = i;
    }
    return below(worst, p.tol, "point " + std::to_string(where));
  }));
  out.push_back(timed("qpois3-frozen-exact", 0, [&] {
    const QuasiBialgebraData qd = derive_quasi_data(pair, j);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto pf = numeric::frozen_so3_pair(numeric::so3::freeze(pts[i]));
      const auto id = numeric::exact_isotropic_section(pf);
      const auto q = pi_from_dirac({dirac_of_pair_point(pf, id)}, QMatrix::identity(3), pf, id, j);
      const QMatrix rho_astar = pf.anchor * j.images.transpose();
      if (!(q.Pi.transpose() == q.rho_X * rho_astar.transpose()))
        return predicate(false, "point " + std::to_string(i));
    }
    return predicate(true, std::to_string(pts.size()) + " frozen fibers");
  }));
  return out;
}

std::vector<CheckResult> run_linear_poisson(const ExampleParams& p) {
  std::vector<CheckResult> out;
  const auto pts = numeric::sample_ball(3, 2.0, p.samples, p.seed);
  const numeric::MatrixField lin = [](const Vec& x) {
    Mat pi(3, 3);
    pi << 0, x[2], -x[1], -x[2], 0, x[0], x[1], -x[0], 0;
    return pi;
  };
  const auto fns = numeric::jacobiator_functions(3, {[](const Vec& x) { return std::sin(x[0]) * x[1]; }});
  out.push_back(timed("jacobiator", p.tol, [&] {
    return residual_below(numeric::jacobiator_residual(lin, pts, fns, p.step), p.tol);
  }));
  out.push_back(timed("zero-structure", 0, [&] {
    numeric::QuasiPoissonFields q;
    q.dim = 3;
    q.pi = [](const Vec&) { return Mat(Mat::Zero(3, 3)); };
    q.rho_x = [](const Vec&) { return Mat(3, 0); };
    q.dJ = [](const Vec&) { return Mat(0, 3); };
    q.rho_astar = [](const Vec&) { return Mat(0, 0); };
    const auto r = numeric::check_quasi_poisson(q, {}, pts, fns, p.step);
    const double worst = std::max({r.qpois1.value, r.qpois2.value, r.qpois3.value});
    return Outcome{worst == 0, worst, {}};
  }));
  return out;
}

numeric::ObservableFunction theta_fn(std::string name, std::function<double(const Vec&, double)> f) {
  return numeric::observable(std::move(name), [f](const Vec& x) { return f(x, x.head(3).norm()); });
}

std::vector<CheckResult> run_reduction(const ExampleParams& p) {
  using numeric::observable;
  std::vector<CheckResult> out;
  const auto sp = numeric::so3_plane_space();
  const auto pts = numeric::sample_ball(5, 2.0, p.samples, p.seed);
  const auto tr = theta_fn("tr", [](const Vec&, double t) { return 1 + 2 * std::cos(t); });
  const auto p1 = observable("p1", [](const Vec& x) { return x[3]; });
  const auto p2 = theta_fn("p2w", [](const Vec& x, double t) { return x[4] * (1 + t * t / 4); });
  const auto mix = theta_fn("mix", [](const Vec& x, double t) { return x[3] * x[4] + std::cos(t) * x[3]; });
  const auto th1 = observable("theta1", [](const Vec& x) { return x[0]; });
  const auto th2p = observable("theta2+p1", [](const Vec& x) { return x[1] + x[3]; });
  const std::vector<numeric::ObservableFunction> inv = {tr, p1, p2, mix};

  out.push_back(timed("admissible-iff-invariant", 0, [&] {
    for (const auto& f : {tr, p1, p2, mix, th1, th2p}) {
      const auto c = numeric::invariant_check(sp, f, pts, p.tol, p.step);
      if (!c.consistent()) return predicate(false, f.name + ": invariant and admissible disagree");
    }
    for (const auto& f : inv)
      if (!numeric::invariant_check(sp, f, pts, p.tol, p.step).all_invariant())
        return predicate(false, f.name + " should be invariant");
    for (const auto& f : {th1, th2p}) {
      const auto c = numeric::invariant_check(sp, f, pts, p.tol, p.step);
      if (std::any_of(c.invariant.begin(), c.invariant.end(), [](bool b) { return b; }))
        return predicate(false, f.name + " should not be invariant");
    }
    return predicate(true, "6 functions");
  }));

  Lazy<numeric::PoissonAlgebraReport> alg([&] { return numeric::check_poisson_algebra(sp, inv, pts, p.step); });
  out.push_back(timed("skew", p.tol, [&] { return residual_below(alg.get().skew, p.tol); }));
  out.push_back(timed("u-matches-pi", p.tol, [&] { return residual_below(alg.get().pi_route, p.tol); }));
  out.push_back(timed("u-in-ker-dJ", p.tol, [&] { return residual_below(alg.get().anchor, p.tol); }));
  out.push_back(timed("jacobi", p.nested_tol, [&] { return residual_below(alg.get().jacobi, p.nested_tol); }));
  out.push_back(timed("u-bracket-commutator", p.nested_tol,
                      [&] { return residual_below(alg.get().commutator, p.nested_tol); }));
  out.push_back(timed("bracket-invariant", p.nested_tol,
                      [&] { return residual_below(alg.get().closure, p.nested_tol); }));

  numeric::OrbitDescription orbit{
      "conjugacy-class-1.5",
      {observable("c", [](const Vec& y) { return y.squaredNorm() - 2.25; }, [](const Vec& y) { return Vec(2 * y); })},
      {}};
  const auto psi = observable("psi", [](const Vec& x) { return std::sin(x[3]) + x[0] * x[4]; });
  const std::vector<std::pair<numeric::ObservableFunction, numeric::ObservableFunction>> pairs = {
      {mix, p2}, {p1, p2}, {mix, p1}, {tr, mix}};
  out.push_back(timed("orbit-samples", 0, [&] {
    orbit.samples = numeric::sample_preimage(sp, orbit, numeric::sample_ball(5, 2.5, p.samples, p.seed + 7));
    return predicate(orbit.samples.size() == p.samples, std::to_string(orbit.samples.size()) + " projected");
  }));
  Lazy<std::vector<numeric::ReductionReport>> reps([&] {
    std::vector<numeric::ReductionReport> out;
    for (const auto& [f, g] : pairs) out.push_back(numeric::reduce_to_orbit(sp, orbit, f, g, psi, p.tol, p.step));
    return out;
  });
  auto worst_of = [&](auto member) {
    Residual w;
    for (std::size_t i = 0; i < reps.get().size(); ++i) {
      const Residual& r = reps.get()[i].*member;
      if (r.value >= w.value) w = {r.value, r.point, {i, 0, 0}};
    }
    return w;
  };
  out.push_back(timed("orbit-transversal", 0, [&] {
    double m = INFINITY;
    for (const auto& r : reps.get()) m = std::min(m, r.min_transversality);
    return Outcome{m > 1e-3, m, "smallest singular value"};
  }));
  out.push_back(timed("action-tangent-to-preimage", p.tol,
                      [&] { return residual_below(worst_of(&numeric::ReductionReport::tangency), p.tol); }));
  out.push_back(timed("extension-independence", p.nested_tol, [&] {
    return residual_below(worst_of(&numeric::ReductionReport::extension), p.nested_tol);
  }));
  out.push_back(timed("restriction-poisson-map", p.tol, [&] {
    Outcome o = residual_below(worst_of(&numeric::ReductionReport::restriction), p.tol);
    o.witness += ", " + std::to_string(pairs.size()) + " pairs";
    return o;
  }));
  out.push_back(timed("whole-base-consistency", p.tol, [&] {
    const numeric::OrbitDescription whole{"S", {}, pts};
    return residual_below(numeric::reduce_to_orbit(sp, whole, mix, p2, psi, p.tol, p.step).restriction, p.tol);
  }));
  out.push_back(timed("dressing-orbit-extension", p.nested_tol, [&] {
    const auto cs = numeric::so3_canonical_space();
    numeric::OrbitDescription sphere{"sphere-1", {observable("c", [](const Vec& y) { return y.squaredNorm() - 1; })}, {}};
    sphere.samples = numeric::sample_preimage(cs, sphere, chart_points(p));
    const auto f = observable("tr", [](const Vec& x) { return 1 + 2 * std::cos(x.norm()); });
    const auto g = observable("c3", [](const Vec& x) { return std::cos(x.norm() / 2); });
    const auto r = numeric::reduce_to_orbit(cs, sphere, f, g, observable("psi", [](const Vec& x) { return x[0]; }),
                                            p.tol, p.step);
    return residual_below(r.extension, p.nested_tol);
  }));
  return out;
}

std::vector<CheckResult> run_symplectic(const ExampleParams& p) {
  using numeric::observable;
  std::vector<CheckResult> out;
  const auto sp = numeric::symplectic_plane();
  const auto pts = numeric::sample_ball(2, 2.0, p.samples, p.seed);
  const auto fx = observable("x", [](const Vec& x) { return x[0]; });
  const auto fy = observable("y", [](const Vec& x) { return x[1]; });
  out.push_back(timed("bracket-x-y", 1e-8, [&] {
    double worst = 0;
    for (const auto& x : pts) worst = std::max(worst, std::abs(numeric::poisson_bracket(sp, fx, fy, x) - 1));
    return below(worst, 1e-8);
  }));
  out.push_back(timed("bracket-x-x", 1e-8, [&] {
    double worst = 0;
    for (const auto& x : pts) worst = std::max(worst, std::abs(numeric::poisson_bracket(sp, fx, fx, x)));
    return below(worst, 1e-8);
  }));
  out.push_back(timed("u-x-is-d-y", 1e-8, [&] {
    double worst = 0;
    for (const auto& x : pts)
      worst = std::max(worst, numeric::max_abs(Vec(numeric::hamiltonian_vector(sp, fx, x).u - Vec::Unit(2, 1))));
    return below(worst, 1e-8);
  }));
  out.push_back(timed("constant-has-zero-u", 1e-12, [&] {
    const auto one = observable("1", [](const Vec&) { return 1.0; });
    double worst = 0;
    for (const auto& x : pts) worst = std::max(worst, numeric::max_abs(numeric::hamiltonian_vector(sp, one, x).u));
    return below(worst, 1e-12);
  }));
  Lazy<numeric::PoissonAlgebraReport> alg([&] {
    return numeric::check_poisson_algebra(sp,
                                          {fx, fy, observable("xy", [](const Vec& x) { return x[0] * x[1]; }),
                                           observable("sin x", [](const Vec& x) { return std::sin(x[0]); })},
                                          pts, p.step);
  });
  out.push_back(timed("jacobi", p.nested_tol, [&] { return residual_below(alg.get().jacobi, p.nested_tol); }));
  out.push_back(timed("u-bracket-commutator", p.nested_tol,
                      [&] { return residual_below(alg.get().commutator, p.nested_tol); }));
  return out;
}

}  // namespace

const std::vector<ExampleInfo>& example_registry() {
  static const std::vector<ExampleInfo> registry = {
      {"standard-twisted-r3", "T (+) T* over R^3 twisted by dx^dy^dz", run_standard_twisted},
      {"nonclosed-control-r4", "twist by x4 dx1^dx2^dx3 on R^4; must be rejected", run_nonclosed_control},
      {"dressing-so3", "so(3) (+) so(3) over SO(3): axioms, splitting, L_S", run_dressing},
      {"canonical-so3", "canonical Hamiltonian space X = SO(3)", run_canonical},
      {"strong-dirac-control-r2", "degenerate form with constant J; must fail transversality",
       run_strong_dirac_control},
      {"quasi-poisson-so3", "quasi-Poisson identities of the canonical SO(3) space", run_quasi_poisson},
      {"linear-poisson-so3dual", "linear Poisson structure on so(3)*", run_linear_poisson},
      {"reduction-so3", "Poisson algebra and orbit reduction on SO(3) x R^2", run_reduction},
      {"symplectic-r2", "symplectic R^2 over the zero pair", run_symplectic},
  };
  return registry;
}

const ExampleInfo* find_example(const std::string& name) {
  for (const auto& e : example_registry())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace manin
