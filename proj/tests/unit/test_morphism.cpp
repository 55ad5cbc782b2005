#include <gtest/gtest.h>

#include "generators.hpp"
#include "manin/morphism.hpp"

using namespace manin;
using manin::testing::Gen;

namespace {

ManinPairPoint product_pair(const ManinPairPoint& a, const ManinPairPoint& b) {
  ManinPairPoint bbar = b;
  bbar.d = QuadraticLieAlgebra(b.d.dim(), b.d.constants(), b.d.form().negated());
  return direct_sum(a, bbar);
}

// Independent reading of the definition: for each xi in a basis of A1*, the
// elements of K over (xi, *) must have a unique second projection.
bool brute_def(const MorphismFiber& m) {
  const std::size_t e1 = m.source.d.dim(), e2 = m.target.d.dim();
  const std::size_t r1 = m.source.rank(), r2 = m.target.rank();
  QMatrix proj(r1 + r2, e1 + e2);  // (p1, p2)
  for (std::size_t k = 0; k < r1; ++k) {
    const QMatrix g = m.source.d.form().gram();
    for (std::size_t i = 0; i < e1; ++i)
      for (std::size_t c = 0; c < e1; ++c) proj(k, i) += g(i, c) * m.source.g.basis()(k, c);
  }
  for (std::size_t k = 0; k < r2; ++k) {
    const QMatrix g = m.target.d.form().gram();
    for (std::size_t i = 0; i < e2; ++i)
      for (std::size_t c = 0; c < e2; ++c) proj(r1 + k, e1 + i) += g(i, c) * m.target.g.basis()(k, c);
  }
  const Subspace img = m.K.image(proj);
  const Subspace over_zero = img.intersect(Subspace::coordinate(r1 + r2, r1, r2));
  return coordinate_projection(img, 0, r1).dim() == r1 && over_zero.dim() == 0;
}

}  // namespace

TEST(Morphism, IdentityIsAMorphism) {
  for (const auto& name : catalog::names()) {
    const auto m = identity_morphism(catalog::by_name(name));
    EXPECT_TRUE(check_morphism_fiber(m).ok()) << name;
    EXPECT_TRUE(check_morphism_def(m)) << name;
    EXPECT_TRUE(check_morphism_equiv(m)) << name;
  }
}

TEST(Morphism, ProductOfSubalgebrasIsNot) {
  const auto p = catalog::so3_double();
  MorphismFiber m{p, p, Subspace::span(12, block_diag(p.g.basis(), p.g.basis()))};
  EXPECT_TRUE(check_morphism_fiber(m).ok());
  EXPECT_FALSE(check_morphism_def(m));
  EXPECT_FALSE(check_morphism_equiv(m));
  EXPECT_FALSE(brute_def(m));
}

TEST(Morphism, DefinitionMatchesEquivalentFormOnRandomLagrangianSubalgebras) {
  Gen g(31);
  const std::vector<std::string> small = {"abelian-r2", "abelian-r4", "so3-double", "bialgebra-double"};
  int tried = 0, accepted = 0, morphisms = 0;
  while (accepted < 80 && tried < 5000) {
    ++tried;
    const auto a = catalog::by_name(small[g.index(small.size())]);
    const auto b = catalog::by_name(small[g.index(small.size())]);
    if (a.d.dim() + b.d.dim() > 10) continue;
    const ManinPairPoint prod = product_pair(a, b);
    MorphismFiber m{a, b, g.lagrangian_in(prod.d.form(), prod.g)};
    if (!check_morphism_fiber(m).ok()) continue;
    ++accepted;
    const bool def = check_morphism_def(m);
    morphisms += def;
    EXPECT_EQ(def, check_morphism_equiv(m));
    EXPECT_EQ(def, brute_def(m));
  }
  EXPECT_EQ(accepted, 80);
  EXPECT_GT(morphisms, 0);
  EXPECT_LT(morphisms, accepted);
}

TEST(Morphism, CompositionOfMorphismsIsAMorphism) {
  Gen g(32);
  for (int t = 0; t < 30; ++t) {
    const auto p = catalog::abelian(1 + g.index(2));
    const ManinPairPoint prod = product_pair(p, p);
    auto random_morphism = [&] {
      for (;;) {
        MorphismFiber m{p, p, g.lagrangian_in(prod.d.form(), prod.g)};
        if (check_morphism_fiber(m).ok() && check_morphism_def(m)) return m;
      }
    };
    const MorphismFiber c = compose_morphisms(random_morphism(), random_morphism());
    EXPECT_TRUE(check_morphism_fiber(c).ok());
    EXPECT_TRUE(check_morphism_def(c));
    EXPECT_EQ(compose_morphisms(identity_morphism(p), c).K, c.K);
  }
}

TEST(Morphism, ComposeRejectsMismatchedMiddle) {
  const auto a = identity_morphism(catalog::abelian(1));
  const auto b = identity_morphism(catalog::so3_double());
  EXPECT_THROW(compose_morphisms(a, b), std::invalid_argument);
  EXPECT_TRUE(same_pair(catalog::so3_double(), catalog::so3_double()));
  EXPECT_FALSE(same_pair(catalog::sl2_double(), catalog::sl2_double_standard()));
}

TEST(HamiltonianFiber, RandomFibersAreValidMorphisms) {
  Gen g(33);
  for (int t = 0; t < 60; ++t) {
    const auto v = t % 2 ? g.point_valid_fiber(catalog::by_name(catalog::names()[g.index(6)]), 1 + g.index(3))
                         : g.exact_valid_fiber(2 + g.index(2), 1 + g.index(2));
    const auto rep = check_hamiltonian_fiber(v.h);
    EXPECT_TRUE(rep.ok()) << rep.failure();
    const MorphismFiber m = as_morphism(v.h);
    EXPECT_TRUE(check_morphism_fiber(m).ok());
    EXPECT_TRUE(check_morphism_def(m));
    EXPECT_TRUE(check_morphism_equiv(m));
  }
}

TEST(HamiltonianFiber, ExtractActionRecoversRhoX) {
  Gen g(34);
  for (int t = 0; t < 60; ++t) {
    const auto v = g.exact_valid_fiber(2 + g.index(3), 1 + g.index(2));
    EXPECT_EQ(extract_action(v.h), v.q.rho_X);
  }
}

TEST(HamiltonianFiber, ExtractActionRejectsNonUniqueAction) {
  // K = (T (+) 0) (+) A: every u is an action vector of every a
  const auto p = catalog::abelian(1);
  HamiltonianFiber h;
  h.tangent_dim = 1;
  h.pair = PairFiber::over_point(p);
  h.dJ = QMatrix(0, 1);
  h.K = Subspace::span(4, QMatrix{{1, 0, 0, 0}, {0, 0, 1, 1}});
  EXPECT_THROW(extract_action(h), InvalidFiberError);
  const auto rep = check_hamiltonian_fiber(h);
  EXPECT_TRUE(rep.lagrangian);
  EXPECT_FALSE(rep.transversal);
  EXPECT_FALSE(rep.ok());
}

TEST(HamiltonianFiber, CotangentSurjectiveAndAlphaCondition) {
  Gen g(35);
  for (int t = 0; t < 60; ++t) {
    const auto v = g.point_valid_fiber(catalog::so3_double(), 1 + g.index(3));
    EXPECT_TRUE(cotangent_surjective(v.h));
    const std::size_t n = v.h.tangent_dim;
    QVector alpha = g.matrix(1, n).row_vector(0);
    if (g.coin()) {
      // alpha in ker rho_X^T
      const QMatrix ker = kernel(v.q.rho_X.transpose());
      alpha = ker.rows() ? ker.row_vector(0) : QVector(n);
    }
    const bool expect = is_zero(v.q.rho_X.transpose().apply(alpha));
    EXPECT_EQ(alpha_admits_e_in_a(v.h, alpha), expect);
  }
}

TEST(HamiltonianFiber, TransverseToSplittingImage) {
  Gen g(36);
  for (int t = 0; t < 40; ++t) {
    const auto v = g.exact_valid_fiber(3, 2);
    EXPECT_TRUE(transverse_to_complement(v.h, v.j.image()));
    // A itself is not a complement: K meets 0 (+) 0 (+) A when rho_X has a kernel
    const bool rho_injective = rank(v.q.rho_X) == v.pair.rank();
    EXPECT_EQ(transverse_to_complement(v.h, v.pair.a), rho_injective);
  }
}

TEST(HamiltonianFiber, WrongMomentMapBreaksSupport) {
  Gen g(37);
  auto v = g.exact_valid_fiber(3, 2);
  v.h.dJ = v.h.dJ + QMatrix{{1, 0, 0}, {0, 0, 0}};
  const auto rep = check_hamiltonian_fiber(v.h);
  EXPECT_TRUE(rep.lagrangian);
  EXPECT_FALSE(rep.support);
}
