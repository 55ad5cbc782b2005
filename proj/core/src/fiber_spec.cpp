#include "manin/fiber_spec.hpp"

#include "manin/numeric/hamiltonian.hpp"

namespace manin {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionError("fiber: " + what);
}

}  // namespace

void FiberSpec::validate() const {
  const std::size_t e = pair.dim(), b = pair.base_dim(), n = tangent_dim;
  require(pair.a.ambient_dim() == e, "A does not live in E");
  require(pair.anchor.cols() == e, "anchor must have dim E columns");
  require(j.images.rows() == pair.rank() && j.images.cols() == e, "splitting must be rank(A) x dim E");
  if (!check_splitting(pair.form, pair.a, j).ok()) throw std::invalid_argument("fiber: splitting is not isotropic");
  require(dJ.rows() == b && dJ.cols() == n, "dJ must be base_dim x tangent_dim");
  if (quasi) {
    require(quasi->Pi.rows() == n && quasi->Pi.cols() == n, "pi must be tangent x tangent");
    if (!quasi->Pi.is_skew()) throw std::invalid_argument("fiber: pi is not skew");
    require(quasi->rho_X.rows() == n && quasi->rho_X.cols() == pair.rank(), "action must be tangent x rank(A)");
  }
  if (dirac) require(dirac->ambient_dim() == 2 * n, "dirac rows must have 2 tangent entries");
  if (k) require(k->tangent_dim == n && k->K.ambient_dim() == 2 * n + e, "K has the wrong ambient dimension");
  if (!quasi && !dirac && !k) throw std::invalid_argument("fiber: needs pi/action, dirac or K data");
  if (id) require(id->s.rows() == e && id->s.cols() == b, "section must be dim E x base_dim");
}

std::optional<ExactIdentification> FiberSpec::identification() const {
  if (id) return id;
  const std::size_t e = pair.dim(), b = pair.base_dim();
  if (e != 2 * b) return std::nullopt;
  if (b == 0) return ExactIdentification{QMatrix(0, 0)};
  if (rank(pair.anchor) != b || !inverse(pair.anchor * pair.anchor.transpose())) return std::nullopt;
  ExactIdentification s = numeric::exact_isotropic_section(pair);
  if (!check_identification(pair, s)) return std::nullopt;
  return s;
}

FiberSpec canonical_fiber_spec(const PairFiber& pair, const IsotropicSplitting& j) {
  FiberSpec f;
  f.name = "canonical";
  f.pair = pair;
  f.j = j;
  f.tangent_dim = pair.base_dim();
  f.dJ = QMatrix::identity(pair.base_dim());
  f.k = numeric::canonical_fiber_exact(pair);
  return f;
}

std::optional<DictMode> parse_dict_mode(const std::string& s) {
  if (s == "qp-to-dirac") return DictMode::qp_to_dirac;
  if (s == "dirac-to-qp") return DictMode::dirac_to_qp;
  if (s == "roundtrip") return DictMode::roundtrip;
  return std::nullopt;
}

DictRun run_dictionary(const FiberSpec& f, DictMode mode) {
  f.validate();
  DictRun run;
  const std::optional<ExactIdentification> id = f.identification();
  auto need_id = [&]() -> const ExactIdentification& {
    if (!id) throw std::invalid_argument("no exact identification: E is not T_S (+) T_S^* over this fiber");
    return *id;
  };
  auto check = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    run.checks.push_back(timed(name, 0, [&] {
      const auto [ok, witness] = body();
      return Outcome{ok, ok ? 0.0 : 1.0, witness};
    }));
  };
  auto equal = [](bool ok) { return std::pair<bool, std::string>{ok, ok ? "" : "results differ"}; };
  auto quasi = [&]() -> QuasiPoissonPointData {
    if (f.quasi) return *f.quasi;
    if (f.k) return pi_from_k(*f.k, f.j);
    return pi_from_dirac({*f.dirac}, f.dJ, f.pair, need_id(), f.j);
  };
  auto dirac = [&]() -> Subspace {
    if (f.dirac) return *f.dirac;
    if (f.k) return dirac_from_k(*f.k, need_id()).L;
    return l_from_quasi(*f.quasi, f.pair, f.j, need_id(), f.dJ).L;
  };

  if (mode == DictMode::qp_to_dirac) {
    check("k-from-quasi-valid", [&] {
      const QuasiPoissonPointData q = quasi();
      run.quasi = q;
      run.k = k_from_quasi(q, f.pair, f.j, f.dJ);
      const auto rep = check_hamiltonian_fiber(*run.k);
      return std::pair<bool, std::string>{rep.ok(), rep.ok() ? "" : rep.failure()};
    });
    check("closed-form-composite", [&] {
      if (!run.k) throw std::invalid_argument("no K");
      run.dirac = dirac_from_k(*run.k, need_id()).L;
      return equal(l_from_quasi(*run.quasi, f.pair, f.j, need_id(), f.dJ).L == *run.dirac);
    });
    check("strong-dirac", [&] {
      if (!run.dirac) throw std::invalid_argument("no L");
      const auto rep = check_strong_dirac_point(*run.dirac, f.dJ, dirac_of_pair_point(f.pair, need_id()));
      return std::pair<bool, std::string>{rep.ok(), rep.ok() ? "" : rep.failure()};
    });
    return run;
  }

  if (mode == DictMode::dirac_to_qp) {
    check("pi-from-dirac", [&] {
      const Subspace l = dirac();
      run.dirac = l;
      run.quasi = pi_from_dirac({l}, f.dJ, f.pair, need_id(), f.j);
      run.k = k_from_dirac({l}, f.dJ, f.pair, need_id());
      return std::pair<bool, std::string>{true, ""};
    });
    check("pi-two-routes", [&] {
      if (!run.k) throw std::invalid_argument("no K");
      return equal(pi_from_k(*run.k, f.j) == *run.quasi);
    });
    return run;
  }

  if (f.quasi || f.k) {
    check("quasi-k-quasi", [&] {
      const QuasiPoissonPointData q = quasi();
      return equal(pi_from_k(k_from_quasi(q, f.pair, f.j, f.dJ), f.j) == q);
    });
  }
  if (f.k) {
    check("k-quasi-k", [&] {
      return equal(k_from_quasi(pi_from_k(*f.k, f.j), f.pair, f.j, f.dJ).K == f.k->K);
    });
  }
  if (id) {
    check("quasi-dirac-quasi", [&] {
      const QuasiPoissonPointData q = quasi();
      const DiracPointData l = l_from_quasi(q, f.pair, f.j, *id, f.dJ);
      return equal(pi_from_dirac(l, f.dJ, f.pair, *id, f.j) == q);
    });
    check("dirac-k-dirac", [&] {
      const Subspace l = dirac();
      return equal(dirac_from_k(k_from_dirac({l}, f.dJ, f.pair, *id), *id).L == l);
    });
    check("dirac-quasi-dirac", [&] {
      const Subspace l = dirac();
      const QuasiPoissonPointData q = pi_from_dirac({l}, f.dJ, f.pair, *id, f.j);
      return equal(l_from_quasi(q, f.pair, f.j, *id, f.dJ).L == l);
    });
    check("closed-form-composite", [&] {
      const QuasiPoissonPointData q = quasi();
      return equal(l_from_quasi(q, f.pair, f.j, *id, f.dJ).L ==
                   dirac_from_k(k_from_quasi(q, f.pair, f.j, f.dJ), *id).L);
    });
    check("subcategory-m", [&] {
      const QuasiPoissonPointData q = quasi();
      const HamiltonianFiber h = k_from_quasi(q, f.pair, f.j, f.dJ);
      const auto rep = subcategory_m(h, dirac_from_k(h, *id), q);
      return std::pair<bool, std::string>{rep.agree(), rep.agree() ? "" : "characterizations disagree"};
    });
  }
  return run;
}

}  // namespace manin
