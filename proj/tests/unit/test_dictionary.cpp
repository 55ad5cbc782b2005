#include <gtest/gtest.h>

#include "generators.hpp"
#include "manin/dictionary.hpp"
#include "manin/numeric/hamiltonian.hpp"

using namespace manin;
using manin::testing::Gen;

namespace {

PairFiber zero_pair() { return {SplitForm(QMatrix(0, 0)), Subspace::zero(0), QMatrix(0, 0)}; }

// {(P^T a, a)} in T (+) T*
Subspace bivector_graph(const QMatrix& pi) {
  const std::size_t n = pi.rows();
  return Subspace::span(2 * n, hstack(pi, QMatrix::identity(n)));
}

// {(u, w u)}
Subspace form_graph(const QMatrix& w) {
  const std::size_t n = w.rows();
  return Subspace::span(2 * n, hstack(QMatrix::identity(n), w.transpose()));
}

QMatrix invertible_skew(Gen& g, std::size_t n) {
  for (;;) {
    QMatrix s = g.skew(n);
    if (inverse(s)) return s;
  }
}

Gen::ValidFiber random_fiber(Gen& g, int t) {
  if (t % 3 == 0) return g.point_valid_fiber(catalog::by_name(catalog::names()[g.index(6)]), 1 + g.index(3));
  const std::size_t b = 1 + g.index(2);
  return g.exact_valid_fiber(b + g.index(3), b);
}

}  // namespace

TEST(KFromQuasi, TrivialData) {
  const auto p = catalog::abelian(1);
  const PairFiber pair = PairFiber::over_point(p);
  const auto j = make_isotropic_splitting(p);
  const HamiltonianFiber h = k_from_quasi({QMatrix(2, 2), QMatrix(2, 1)}, pair, j, QMatrix(0, 2));
  // ((0, alpha), a)
  EXPECT_EQ(h.K, Subspace::span(6, QMatrix{{0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 1, 1}}));
  EXPECT_TRUE(check_hamiltonian_fiber(h).ok());
}

TEST(KFromQuasi, SymplecticPlaneOverZeroPair) {
  const QMatrix pi{{0, 1}, {-1, 0}};
  const HamiltonianFiber h = k_from_quasi({pi, QMatrix(2, 0)}, zero_pair(), {QMatrix(0, 0)}, QMatrix(0, 2));
  EXPECT_EQ(h.K, bivector_graph(pi));
  EXPECT_TRUE(check_hamiltonian_fiber(h).ok());
}

TEST(KFromQuasi, RankThreeActionOnSo3Double) {
  const auto p = catalog::so3_double();
  const QMatrix rho = QMatrix::identity(3);
  const HamiltonianFiber h =
      k_from_quasi({QMatrix(3, 3), rho}, PairFiber::over_point(p), make_isotropic_splitting(p), QMatrix(0, 3));
  EXPECT_TRUE(check_hamiltonian_fiber(h).ok());
  const auto m = as_morphism(h);
  EXPECT_TRUE(check_morphism_fiber(m).ok());
  EXPECT_TRUE(check_morphism_equiv(m));
}

TEST(PiFromK, ZeroBivector) {
  Gen g(41);
  const auto p = catalog::sl2_double();
  const auto j = make_isotropic_splitting(p);
  const QuasiPoissonPointData q{QMatrix(2, 2), g.matrix(2, 3)};
  EXPECT_EQ(pi_from_k(k_from_quasi(q, PairFiber::over_point(p), j, QMatrix(0, 2)), j), q);
}

TEST(PiFromK, BothRoutesAndRoundTrips) {
  Gen g(42);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_fiber(g, t);
    EXPECT_EQ(pi_by_uniqueness(v.h, v.j, v.q.rho_X), v.q.Pi);
    EXPECT_EQ(pi_by_composition(v.h, v.j), v.q.Pi);
    EXPECT_EQ(pi_from_k(v.h, v.j), v.q);
    EXPECT_EQ(k_from_quasi(pi_from_k(v.h, v.j), v.pair, v.j, v.dJ).K, v.h.K);
  }
}

TEST(PiFromK, DependsOnSplitting) {
  // a different j reads the same K as a different Pi, with the same action
  const auto p = catalog::so3_double();
  const auto j0 = make_isotropic_splitting(p);
  const auto j1 = shift_splitting(p.g, j0, QMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}});
  const QuasiPoissonPointData q{QMatrix(3, 3), QMatrix::identity(3)};
  const HamiltonianFiber h = k_from_quasi(q, PairFiber::over_point(p), j0, QMatrix(0, 3));
  const QuasiPoissonPointData q1 = pi_from_k(h, j1);
  EXPECT_EQ(q1.rho_X, q.rho_X);
  EXPECT_FALSE(q1.Pi.is_zero());
  EXPECT_TRUE(q1.Pi.is_skew());
}

TEST(DiracFromK, ZeroTangentGivesZero) {
  Gen g(43);
  auto ef = g.exact_fiber(2);
  const auto j = make_isotropic_splitting(ef.pair.form, ef.pair.a);
  const HamiltonianFiber h = k_from_quasi({QMatrix(0, 0), QMatrix(0, 2)}, ef.pair, j, QMatrix(2, 0));
  EXPECT_EQ(dirac_from_k(h, ef.id).L.ambient_dim(), 0u);
}

TEST(DiracFromK, SymplecticCaseIsInverseForm) {
  // A = 0: L = {(P^T a, a)} = {(u, (P^T)^{-1} u)}
  Gen g(44);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 * (1 + g.index(2));
    const QMatrix pi = invertible_skew(g, n);
    const QuasiPoissonPointData q{pi, QMatrix(n, 0)};
    const ExactIdentification id{QMatrix(0, 0)};
    const HamiltonianFiber h = k_from_quasi(q, zero_pair(), {QMatrix(0, 0)}, QMatrix(0, n));
    const Subspace l = dirac_from_k(h, id).L;
    EXPECT_EQ(l, form_graph(*inverse(pi.transpose())));
    EXPECT_EQ(l_from_quasi(q, zero_pair(), {QMatrix(0, 0)}, id, QMatrix(0, n)).L, l);
    // and back: Pi^T = w^{-1} for L = graph(w)
    const QMatrix w = g.skew(n);
    if (!inverse(w)) continue;
    const auto back = pi_from_dirac({form_graph(w)}, QMatrix(0, n), zero_pair(), id, {QMatrix(0, 0)});
    EXPECT_EQ(back.Pi.transpose(), *inverse(w));
  }
}

TEST(DiracFromK, ZeroBivectorOntoActionGivesFormGraph) {
  Gen g(45);
  int onto = 0;
  for (int t = 0; t < 30; ++t) {
    auto ef = g.exact_fiber(2);
    const auto j = make_isotropic_splitting(ef.pair.form, ef.pair.a);
    const QMatrix rho_x = ef.pair.anchor * ef.pair.a.basis().transpose();  // dJ = id
    if (rank(rho_x) < 2) continue;
    ++onto;
    const HamiltonianFiber h = k_from_quasi({QMatrix(2, 2), rho_x}, ef.pair, j, QMatrix::identity(2));
    const Subspace l = dirac_from_k(h, ef.id).L;
    EXPECT_EQ(l.intersect(Subspace::coordinate(4, 2, 2)).dim(), 0u);
    EXPECT_TRUE(is_lagrangian(SplitForm::tangent_cotangent(2), l));
    EXPECT_EQ(l, l_from_quasi({QMatrix(2, 2), rho_x}, ef.pair, j, ef.id, QMatrix::identity(2)).L);
  }
  EXPECT_GT(onto, 5);
}

TEST(KFromDirac, CanonicalExample) {
  Gen g(46);
  for (int t = 0; t < 30; ++t) {
    const std::size_t b = 1 + g.index(3);
    auto ef = g.exact_fiber(b);
    const Subspace ls = dirac_of_pair_point(ef.pair, ef.id);
    const HamiltonianFiber h = k_from_dirac({ls}, QMatrix::identity(b), ef.pair, ef.id);
    EXPECT_EQ(h.K, numeric::canonical_fiber_exact(ef.pair).K);
    EXPECT_TRUE(check_hamiltonian_fiber(h).ok());
  }
}

TEST(KFromDirac, StrongDiracConditionsMatchValidity) {
  Gen g(47);
  int valid = 0, invalid = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t b = 1 + g.index(2), n = 1 + g.index(3);
    auto ef = g.exact_fiber(b);
    const Subspace l = g.lagrangian(n);
    const QMatrix dj = g.sparse_matrix(b, n, 0.6);
    const HamiltonianFiber h = k_from_dirac({l}, dj, ef.pair, ef.id);
    EXPECT_TRUE(is_lagrangian(h.form(), h.K));
    const bool strong = check_strong_dirac_point(l, dj, dirac_of_pair_point(ef.pair, ef.id)).ok();
    EXPECT_EQ(check_hamiltonian_fiber(h).ok(), strong);
    (strong ? valid : invalid)++;
  }
  EXPECT_GT(valid, 10);
  EXPECT_GT(invalid, 10);
}

TEST(KFromDirac, NondegenerateFormOverPoint) {
  // T_S = 0, dJ = 0: valid iff L cap T = 0, i.e. w nondegenerate
  Gen g(48);
  const ExactIdentification id{QMatrix(0, 0)};
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + g.index(4);
    const QMatrix w = g.skew(n, 1);
    const HamiltonianFiber h = k_from_dirac({form_graph(w)}, QMatrix(0, n), zero_pair(), id);
    EXPECT_EQ(check_hamiltonian_fiber(h).ok(), inverse(w).has_value());
  }
}

TEST(Dictionary, RoundTripsThroughDirac) {
  Gen g(49);
  for (int t = 0; t < 100; ++t) {
    const std::size_t b = 1 + g.index(2);
    const auto v = g.exact_valid_fiber(b + g.index(3), b);
    const DiracPointData l = dirac_from_k(v.h, v.id);
    EXPECT_TRUE(check_strong_dirac_point(l.L, v.dJ, dirac_of_pair_point(v.pair, v.id)).ok());
    EXPECT_EQ(k_from_dirac(l, v.dJ, v.pair, v.id).K, v.h.K);
    EXPECT_EQ(dirac_from_k(k_from_dirac(l, v.dJ, v.pair, v.id), v.id), l);
    EXPECT_EQ(l_from_quasi(v.q, v.pair, v.j, v.id, v.dJ), l);
    EXPECT_EQ(pi_from_dirac(l, v.dJ, v.pair, v.id, v.j), v.q);
  }
}

TEST(Dictionary, ZeroDataClosedFormMatchesComposite) {
  Gen g(50);
  auto ef = g.exact_fiber(2);
  const auto j = make_isotropic_splitting(ef.pair.form, ef.pair.a);
  const std::size_t n = 3;
  QMatrix dj(2, n);
  dj(0, 0) = 1;
  dj(1, 1) = 1;
  const QuasiPoissonPointData q{QMatrix(n, n), QMatrix(n, 2)};
  const auto closed = l_from_quasi(q, ef.pair, j, ef.id, dj);
  EXPECT_EQ(closed, dirac_from_k(k_from_quasi(q, ef.pair, j, dj), ef.id));
}

TEST(Dictionary, PiFromDiracRejectsWeakDirac) {
  // L = T over a nonzero base with dJ = 0: forward image is T_S* -> not a graph
  Gen g(51);
  auto ef = g.exact_fiber(1);
  const auto j = make_isotropic_splitting(ef.pair.form, ef.pair.a);
  EXPECT_THROW(pi_from_dirac({Subspace::coordinate(2, 0, 1)}, QMatrix(1, 1), ef.pair, ef.id, j), PreconditionError);
}

TEST(Dictionary, SubcategoryCharacterizationsAgree) {
  Gen g(52);
  int inside = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t b = 1 + g.index(2);
    const auto v = g.exact_valid_fiber(b + g.index(3), b);
    const auto rep = subcategory_m(v.h, dirac_from_k(v.h, v.id), v.q);
    EXPECT_TRUE(rep.agree());
    inside += rep.k_onto_tangent;
  }
  EXPECT_GT(inside, 0);
  EXPECT_LT(inside, 100);
}

TEST(Identification, DefaultSectionIsValid) {
  Gen g(53);
  for (int t = 0; t < 30; ++t) {
    auto ef = g.exact_fiber(1 + g.index(3));
    EXPECT_TRUE(check_identification(ef.pair, ef.id));
    EXPECT_TRUE(check_identification(ef.pair, numeric::exact_isotropic_section(ef.pair)));
    const QMatrix c = exact_coordinates(ef.pair, ef.id);
    EXPECT_EQ(rank(c), ef.pair.dim());
  }
}

TEST(ForwardBackward, IdentityMapIsIdentity) {
  Gen g(54);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + g.index(3);
    const Subspace l = g.lagrangian(n);
    EXPECT_EQ(forward_image(l, QMatrix::identity(n)), l);
    EXPECT_EQ(backward_image(l, QMatrix::identity(n)), l);
  }
}

TEST(ForwardBackward, BackwardAfterForwardIsIdentityForInjectiveMaps) {
  Gen g(55);
  for (int t = 0; t < 100; ++t) {
    const std::size_t q = 1 + g.index(3), m = q + g.index(3);
    const QMatrix f = g.injective(m, q);
    const Subspace l = g.lagrangian(q);
    const Subspace fl = forward_image(l, f);
    EXPECT_TRUE(is_lagrangian(SplitForm::tangent_cotangent(m), fl));
    EXPECT_EQ(backward_image(fl, f), l);
  }
}

TEST(ForwardBackward, ForwardAfterBackwardNeedsSupport) {
  Gen g(56);
  int violators = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t q = 1 + g.index(2), m = q + 1 + g.index(2);
    const QMatrix f = g.injective(m, q);
    const Subspace lp = g.lagrangian(m);
    const Subspace tangent_part = coordinate_projection(lp, 0, m);
    const Subspace image = Subspace::span(m, f.transpose());
    const bool supported = image.contains(tangent_part);
    violators += !supported;
    EXPECT_EQ(forward_image(backward_image(lp, f), f) == lp, supported);
  }
  EXPECT_GT(violators, 10);
}
