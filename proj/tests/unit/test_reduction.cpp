#include <gtest/gtest.h>

#include <cmath>

#include "manin/dictionary.hpp"
#include "manin/reduction.hpp"

using namespace manin;
using namespace manin::numeric;

namespace {

PairFiber zero_pair() { return {SplitForm(QMatrix(0, 0)), Subspace::zero(0), QMatrix(0, 0)}; }

double angle(const Vec& x) { return x.head(3).norm(); }

ObservableFunction trace_fn() {
  return observable("tr", [](const Vec& x) { return 1 + 2 * std::cos(angle(x)); });
}

}  // namespace

TEST(HamiltonianVectorExact, SymplecticPlane) {
  // Pi = d_x ^ d_y: u_x = Pi^T dx = d_y, {x, y} = dy(u_x) = 1
  const QMatrix pi{{0, 1}, {-1, 0}};
  const HamiltonianFiber h = k_from_quasi({pi, QMatrix(2, 0)}, zero_pair(), {QMatrix(0, 0)}, QMatrix(0, 2));
  const auto ux = hamiltonian_vector(h, QVector{1, 0});
  ASSERT_TRUE(ux);
  EXPECT_EQ(*ux, (QVector{0, 1}));
  EXPECT_EQ(dot(QVector{0, 1}, *ux), 1);
  EXPECT_EQ(dot(QVector{1, 0}, *ux), 0);
  const auto uy = hamiltonian_vector(h, QVector{0, 1});
  EXPECT_EQ(dot(QVector{1, 0}, *uy), -1);
}

TEST(HamiltonianVectorExact, ConstantFunctionHasZeroVector) {
  const QMatrix pi{{0, 3}, {-3, 0}};
  const HamiltonianFiber h = k_from_quasi({pi, QMatrix(2, 0)}, zero_pair(), {QMatrix(0, 0)}, QMatrix(0, 2));
  EXPECT_EQ(*hamiltonian_vector(h, QVector{0, 0}), (QVector{0, 0}));
}

TEST(HamiltonianVectorExact, InadmissibleAndNonUnique) {
  // A acting by d_x: df must kill the action to be admissible
  const auto p = catalog::abelian(1);
  const HamiltonianFiber h = k_from_quasi({QMatrix(2, 2), QMatrix{{1}, {0}}}, PairFiber::over_point(p),
                                          make_isotropic_splitting(p), QMatrix(0, 2));
  EXPECT_FALSE(hamiltonian_vector(h, QVector{1, 0}));
  EXPECT_TRUE(hamiltonian_vector(h, QVector{0, 1}));
  HamiltonianFiber bad = h;
  bad.K = Subspace::span(6, QMatrix{{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 1}});
  EXPECT_THROW(hamiltonian_vector(bad, QVector{0, 0}), InvalidFiberError);
}

TEST(PoissonBracket, SymplecticPlaneNumeric) {
  const auto s = symplectic_plane();
  const auto x = observable("x", [](const Vec& v) { return v[0]; });
  const auto y = observable("y", [](const Vec& v) { return v[1]; });
  const auto one = observable("one", [](const Vec&) { return 1.0; });
  for (const Vec& pt : sample_ball(2, 1.0, 5, 1)) {
    EXPECT_NEAR(poisson_bracket(s, x, y, pt), 1.0, 1e-9);
    EXPECT_NEAR(poisson_bracket(s, y, x, pt), -1.0, 1e-9);
    EXPECT_NEAR(poisson_bracket(s, x, x, pt), 0.0, 1e-9);
    EXPECT_NEAR(poisson_bracket(s, one, y, pt), 0.0, 1e-12);
    const auto u = hamiltonian_vector(s, x, pt);
    EXPECT_TRUE(u.admissible);
    EXPECT_LT((u.u - Vec::Unit(2, 1)).norm(), 1e-9);
  }
}

TEST(PoissonBracket, EveryFunctionInvariantWithoutAction) {
  const auto s = symplectic_plane();
  const auto f = observable("f", [](const Vec& v) { return std::sin(v[0]) * v[1]; });
  const auto c = invariant_check(s, f, sample_ball(2, 1.0, 5, 2));
  EXPECT_TRUE(c.all_invariant());
  EXPECT_TRUE(c.consistent());
}

TEST(Invariance, TraceIsInvariantCoordinateIsNot) {
  const auto s = so3_canonical_space();
  const auto pts = sample_ball(3, 2.0, 10, 3);
  const auto tr = invariant_check(s, trace_fn(), pts);
  EXPECT_TRUE(tr.all_invariant());
  EXPECT_TRUE(tr.consistent());
  const auto x1 = invariant_check(s, observable("x1", [](const Vec& v) { return v[0]; }), pts);
  EXPECT_TRUE(x1.consistent());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_FALSE(x1.invariant[i]);
    EXPECT_GT(x1.residual[i], 1e-3);
  }
}

TEST(Invariance, ClassFunctionsCommuteOnTheCanonicalSpace) {
  const auto s = so3_canonical_space();
  const auto g = observable("cos2", [](const Vec& x) { return std::cos(2 * angle(x)); });
  for (const Vec& pt : sample_ball(3, 2.0, 5, 4)) EXPECT_NEAR(poisson_bracket(s, trace_fn(), g, pt), 0.0, 1e-6);
}

TEST(PoissonAlgebra, PlaneFactorBracketIsLambda) {
  // Pi on the R^2 factor is lambda d_p1 ^ d_p2, so {p1, p2} = lambda
  const auto s = so3_plane_space();
  const auto p1 = observable("p1", [](const Vec& x) { return x[3]; });
  const auto p2 = observable("p2", [](const Vec& x) { return x[4]; });
  for (const Vec& pt : sample_ball(5, 2.0, 10, 5)) {
    const double lambda = 1 + (1 - std::cos(angle(pt))) / 2;
    EXPECT_NEAR(poisson_bracket(s, p1, p2, pt), lambda, 1e-6);
  }
}

TEST(PoissonAlgebra, InvariantFunctionsCloseUnderBracket) {
  const auto s = so3_plane_space();
  const auto pts = sample_ball(5, 2.0, 8, 6);
  const auto p1 = observable("p1", [](const Vec& x) { return x[3]; });
  const auto mix = observable("mix", [](const Vec& x) { return x[3] * x[4] + std::cos(angle(x)) * x[3]; });
  const auto tr = trace_fn();
  const auto rep = check_poisson_algebra(s, {tr, p1, mix}, pts);
  EXPECT_LT(rep.skew.value, 1e-6);
  EXPECT_LT(rep.pi_route.value, 1e-6);
  EXPECT_LT(rep.anchor.value, 1e-6);
  EXPECT_LT(rep.jacobi.value, 1e-4);
  EXPECT_LT(rep.commutator.value, 1e-4);
  EXPECT_LT(rep.closure.value, 1e-4);
  EXPECT_TRUE(invariant_check(s, bracket_function(s, mix, p1), pts, 1e-4).all_invariant());
  const auto one = observable("one", [](const Vec&) { return 1.0; });
  for (const Vec& pt : pts) EXPECT_NEAR(poisson_bracket(s, mix, one, pt), 0.0, 1e-12);
}

TEST(PoissonAlgebra, BracketOfInadmissibleThrows) {
  const auto s = so3_canonical_space();
  const auto x1 = observable("x1", [](const Vec& v) { return v[0]; });
  EXPECT_THROW(poisson_bracket(s, x1, trace_fn(), sample_ball(3, 1.0, 1, 7)[0]), InadmissibleError);
}

TEST(Reduction, DressingOrbitPreimage) {
  const auto s = so3_plane_space();
  OrbitDescription orbit{"sphere",
                         {observable("c", [](const Vec& y) { return y.squaredNorm() - 1.0; },
                                     [](const Vec& y) { return Vec(2 * y); })},
                         {}};
  orbit.samples = sample_preimage(s, orbit, sample_ball(5, 2.0, 8, 8));
  ASSERT_EQ(orbit.samples.size(), 8u);
  for (const Vec& x : orbit.samples) EXPECT_NEAR(x.head(3).squaredNorm(), 1.0, 1e-10);
  const auto mix = observable("mix", [](const Vec& x) { return x[3] * x[4] + std::cos(angle(x)) * x[3]; });
  const auto p1 = observable("p1", [](const Vec& x) { return x[3]; });
  const auto psi = observable("psi", [](const Vec& x) { return x[0] + x[3] * x[3]; });
  const auto rep = reduce_to_orbit(s, orbit, mix, p1, psi);
  EXPECT_GT(rep.min_transversality, 1e-3);
  EXPECT_LT(rep.tangency.value, 1e-6);
  EXPECT_LT(rep.invariance.value, 1e-6);
  EXPECT_LT(rep.extension.value, 1e-4);
  EXPECT_LT(rep.restriction.value, 1e-4);
}

TEST(Reduction, IdentityOrbitIsNotTransverse) {
  // tr R = 3 only at the identity, where the constraint gradient vanishes
  const auto s = so3_plane_space();
  OrbitDescription orbit{"identity", {observable("c", [](const Vec& y) { return y.squaredNorm(); })}, {Vec::Zero(5)}};
  const auto p1 = observable("p1", [](const Vec& x) { return x[3]; });
  EXPECT_THROW(reduce_to_orbit(s, orbit, p1, p1, p1), TransversalityError);
}
