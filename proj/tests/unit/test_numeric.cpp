#include <gtest/gtest.h>

#include <cmath>

#include "manin/examples.hpp"
#include "manin/numeric/courant.hpp"
#include "manin/numeric/fiber.hpp"
#include "manin/numeric/hamiltonian.hpp"
#include "manin/numeric/so3.hpp"
#include "manin/splitting.hpp"

using namespace manin;
using namespace manin::numeric;

namespace {

template <class Expr>
double amax(const Expr& e) {
  return e.size() ? e.cwiseAbs().maxCoeff() : 0.0;
}

Vec vec(std::initializer_list<double> v) {
  Vec out(v.size());
  std::size_t i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<Vec> so3_points(std::size_t count, std::uint64_t seed) {
  return sample_ball(3, 2.0, count, seed);
}

Mat so3_diagonal_rows() {
  Mat a = Mat::Zero(3, 6);
  for (int k = 0; k < 3; ++k) a(k, k) = a(k, 3 + k) = 1;
  return a;
}

}  // namespace

TEST(FiniteDifference, JacobianOfKnownMap) {
  const Field f = [](const Vec& x) { return vec({x[0] * x[1], std::sin(x[0]) + x[1] * x[1] * x[1]}); };
  const Vec x = vec({0.3, -0.7});
  Mat exact(2, 2);
  exact << x[1], x[0], std::cos(x[0]), 3 * x[1] * x[1];
  EXPECT_LT(amax(jacobian(f, x) - exact), 1e-8);
}

TEST(FiniteDifference, LieBracketOfRotationAndTranslation) {
  // v = (-y, x), w = d_x: [v, w] = -(d_x v) = (0, -1)
  const Field v = [](const Vec& x) { return vec({-x[1], x[0]}); };
  const Field w = constant_field(vec({1, 0}));
  EXPECT_LT(amax(lie_bracket(v, w, vec({0.4, 1.1})) - vec({0, -1})), 1e-10);
}

TEST(FiniteDifference, SampleBallIsSeededAndInside) {
  const auto a = sample_ball(3, 1.5, 50, 7), b = sample_ball(3, 1.5, 50, 7);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_LT(a[i].norm(), 1.5);
  }
}

TEST(FiniteDifference, NullSpace) {
  Mat m(2, 3);
  m << 1, 0, 1, 0, 1, 1;
  const Mat n = null_space(m);
  ASSERT_EQ(n.cols(), 1);
  EXPECT_LT(amax(m * n), 1e-12);
  EXPECT_EQ(numerical_rank(m), 2);
}

TEST(StandardCourant, TwistedBracketOfCoordinateFields) {
  const auto pts = sample_ball(3, 1.0, 4, 1);
  const auto c = make_standard_twisted(3, constant_three_form(3, 0, 1, 2), pts);
  const Field dx = constant_field(vec({1, 0, 0, 0, 0, 0})), dy = constant_field(vec({0, 1, 0, 0, 0, 0}));
  // [[d_x, d_y]] = (0, i_dy i_dx phi) = (0, dz)
  EXPECT_LT(amax(c.bracket(dx, dy, pts[0]) - vec({0, 0, 0, 0, 0, 1})), 1e-10);
  EXPECT_LT(amax(c.bracket(dy, dx, pts[0]) - vec({0, 0, 0, 0, 0, -1})), 1e-10);
}

TEST(StandardCourant, UntwistedAxiomsNearlyExact) {
  const auto pts = sample_ball(3, 1.0, 10, 2);
  const auto c = make_standard_twisted(3, {}, pts);
  const auto rep = check_axioms_numeric(c, pts, SectionLibrary::standard(3, 6));
  EXPECT_TRUE(rep.pass());
  EXPECT_LT(rep.worst(), 1e-8) << rep.worst();
}

TEST(StandardCourant, ClosedTwistPasses) {
  const auto pts = sample_ball(4, 1.0, 10, 3);
  // phi = x3 dx0^dx1^dx2 + x0 dx1^dx2^dx3 - ... built from d(x0 x3 dx1^dx2) is exact, hence closed
  const FormField phi = three_form(4, [](const Vec& x, std::size_t i, std::size_t j, std::size_t k) {
    if (i == 0 && j == 1 && k == 2) return -x[0];
    if (i == 1 && j == 2 && k == 3) return x[3];
    return 0.0;
  });
  EXPECT_LT(closedness_residual(phi, 4, pts[0]), 1e-8);
  const auto c = make_standard_twisted(4, phi, pts);
  EXPECT_TRUE(check_axioms_numeric(c, pts, SectionLibrary::standard(4, 8)).pass());
}

TEST(StandardCourant, NonClosedTwistIsRejected) {
  const auto pts = sample_ball(4, 1.0, 10, 4);
  const FormField phi = three_form(4, [](const Vec& x, std::size_t i, std::size_t j, std::size_t k) {
    return (i == 0 && j == 1 && k == 2) ? x[3] : 0.0;
  });
  EXPECT_GT(closedness_residual(phi, 4, pts[0]), 0.5);
  EXPECT_THROW(make_standard_twisted(4, phi, pts), NotClosedError);
  const auto rep = check_axioms_numeric(make_standard_unchecked(4, phi), pts, SectionLibrary::standard(4, 8));
  EXPECT_FALSE(rep.pass());
  EXPECT_GT(rep.c1.value, 1e-3);
}

TEST(DressingCourant, So3AxiomsAndAnchorIdentity) {
  const auto pts = so3_points(20, 5);
  const auto c = make_so3_dressing(pts);
  const auto rep = check_axioms_numeric(c, pts, SectionLibrary::standard(3, 6));
  EXPECT_TRUE(rep.pass()) << rep.worst();
  EXPECT_LT(rep.rho_rho_star.value, 1e-12);
  for (const Vec& x : pts) EXPECT_LT(amax(c.anchor(x) * c.anchor_dual(x)), 1e-12);
}

TEST(DressingCourant, AnchorMatchesClosedForm) {
  const Vec theta = vec({0.2, -0.4, 0.9});
  const Eigen::Matrix3d r = so3::rotation(theta);
  Mat expect(3, 6);
  expect << -Mat::Identity(3, 3), r;
  expect = so3::left_jacobian_inverse(theta) * expect;
  EXPECT_LT(amax(so3::dressing_anchor(theta) - expect), 1e-14);
  EXPECT_NEAR(so3::trace(theta), r.trace(), 1e-14);
  EXPECT_LT((so3::log(r) - Eigen::Vector3d(theta)).norm(), 1e-12);
}

TEST(DressingCourant, SecondOrderConvergence) {
  const auto pts = so3_points(3, 6);
  const auto c = make_so3_dressing();
  const Field a = [](const Vec& x) { return vec({std::sin(x[0]), x[1] * x[2], 1, 0, x[0] * x[0], 0}); };
  const Field b = [](const Vec& x) { return vec({0, std::cos(x[2]), x[0], x[1], 0, std::exp(0.3 * x[1])}); };
  for (const Vec& x : pts) {
    const double ratio = convergence_ratio(c, a, b, x, 0.05);
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
  }
}

TEST(DressingCourant, WrongAnchorSignFailsConstruction) {
  const auto pts = so3_points(5, 7);
  const MatrixField flipped = [](const Vec& x) -> Mat { return -so3::dressing_anchor(x); };
  EXPECT_THROW(make_dressing_courant(catalog::so3_double(), 3, flipped, pts), AxiomError);
}

TEST(ExactSplitting, UntwistedCanonicalInclusion) {
  const auto pts = sample_ball(3, 1.0, 5, 8);
  const auto c = make_standard_twisted(3, {}, pts);
  const auto split = make_exact_splitting(c);
  Mat incl = Mat::Zero(6, 3);
  incl.topRows(3).setIdentity();
  for (const Vec& x : pts) {
    EXPECT_LT(amax(split.s(x) - incl), 1e-14);
    EXPECT_LT(amax(split.phi(x)), 1e-9);
  }
}

TEST(ExactSplitting, DressingSplittingIsClosed) {
  const auto pts = so3_points(10, 9);
  const auto c = make_so3_dressing();
  const auto res = check_exact_splitting(c, make_exact_splitting(c), pts);
  EXPECT_LT(res.right_inverse, 1e-12);
  EXPECT_LT(res.isotropy, 1e-12);
  EXPECT_LT(res.closedness, 1e-5);
}

TEST(DiracOfPair, TangentCopyAndPoissonGraph) {
  const auto pts = sample_ball(2, 1.0, 3, 10);
  const auto c = make_standard_twisted(2, {}, pts);
  const auto split = make_exact_splitting(c);
  Mat t = Mat::Zero(2, 4);
  t(0, 0) = t(1, 1) = 1;
  // graph of P = [[0, 2], [-2, 0]]: rows (P^T b, b)
  Mat p(2, 2);
  p << 0, 2, -2, 0;
  Mat graph(2, 4);
  graph << p.transpose(), Mat::Identity(2, 2);
  for (const Vec& x : pts) {
    EXPECT_LT(amax(row_basis(dirac_of_pair(c, t, split)(x)) - row_basis(t)), 1e-12);
    const Mat l = dirac_of_pair(c, graph, split)(x);
    for (int r = 0; r < 2; ++r) EXPECT_LT(lagrangian_residual(graph.row(r).transpose(), l, standard_gram(2)), 1e-12);
  }
}

TEST(DiracOfPair, DressingStructureIsIntegrable) {
  const auto pts = so3_points(10, 11);
  const auto c = make_so3_dressing();
  const auto split = make_exact_splitting(c);
  const auto rep = check_dirac_field(dirac_of_pair(c, so3_diagonal_rows(), split), 3, split.phi, pts);
  EXPECT_TRUE(rep.pass(1e-6)) << rep.lagrangian << " " << rep.integrability;
}

TEST(CanonicalSpace, UntwistedTangentCopy) {
  const auto pts = sample_ball(2, 1.0, 2, 12);
  const auto c = make_standard_twisted(2, {}, pts);
  Mat t = Mat::Zero(2, 4);
  t(0, 0) = t(1, 1) = 1;
  const Mat k = canonical_k(c, t, pts[0]);
  // K in (T (+) T*) (+) E with <,>_std (+) <,>_E
  const Mat g = block_diag(standard_gram(2), c.gram);
  EXPECT_LT(amax(k * g * k.transpose()), 1e-14);
  EXPECT_EQ(numerical_rank(k), 4);
}

TEST(CanonicalSpace, DressingGeneratorBracketsAndOrbitTangency) {
  const auto pts = so3_points(10, 13);
  const auto c = make_so3_dressing();
  const auto lib = SectionLibrary::standard(3, 6);
  EXPECT_LT(canonical_generator_brackets(c, so3_diagonal_rows(), pts, lib.one_forms).worst(), 1e-6);
  // the diagonal acts by conjugation, tangent to the level sets of the trace
  EXPECT_LT(orbit_tangency(c, so3_diagonal_rows(), {[](const Vec& x) { return so3::trace(x); }}, pts), 1e-6);
}

TEST(StrongDirac, CanonicalPipeline) {
  const auto pts = so3_points(10, 14);
  const DiracPipeline p = so3_canonical_pipeline();
  const auto ls = dirac_of_pair(p.c, p.a, p.split);
  EXPECT_TRUE(check_strong_dirac(p.L, 3, p.J, p.dJ, ls, p.split.phi, 3, pts).pass(1e-6));
  EXPECT_TRUE(check_strong_dirac(induced_dirac(p), 3, p.J, p.dJ, ls, p.split.phi, 3, pts).pass(1e-6));
}

TEST(StrongDirac, DegenerateFormOverConstantMapFails) {
  const auto pts = sample_ball(2, 1.0, 5, 15);
  const auto s = make_standard_twisted(1, {}, {vec({0})});
  const auto split = make_exact_splitting(s);
  Mat t(1, 2);
  t << 1, 0;
  const SubspaceField lx = [](const Vec&) -> Mat {
    Mat l = Mat::Zero(2, 4);  // graph of the zero form
    l(0, 0) = l(1, 1) = 1;
    return l;
  };
  const Field J = [](const Vec&) { return vec({0}); };
  const MatrixField dJ = [](const Vec&) -> Mat { return Mat::Zero(1, 2); };
  const auto rep = check_strong_dirac(lx, 2, J, dJ, dirac_of_pair(s, t, split), split.phi, 1, pts);
  EXPECT_FALSE(rep.pass(1e-6));
  for (bool b : rep.transversal) EXPECT_FALSE(b);
}

TEST(QuasiPoisson, TrivialDataHasZeroResiduals) {
  const auto pts = sample_ball(2, 1.0, 5, 16);
  QuasiPoissonFields q;
  q.dim = 2;
  q.pi = [](const Vec&) -> Mat { return Mat::Zero(2, 2); };
  q.rho_x = [](const Vec&) -> Mat { return Mat::Zero(2, 1); };
  q.dJ = [](const Vec&) -> Mat { return Mat::Zero(1, 2); };
  q.rho_astar = [](const Vec&) -> Mat { return Mat::Zero(1, 1); };
  QuasiTensors t{1, {0}, {0}};
  const auto rep = check_quasi_poisson(q, t, pts, jacobiator_functions(2));
  EXPECT_EQ(rep.qpois1.value, 0);
  EXPECT_EQ(rep.qpois2.value, 0);
  EXPECT_EQ(rep.qpois3.value, 0);
}

TEST(QuasiPoisson, So3DressingPipeline) {
  const auto pts = so3_points(10, 17);
  const DiracPipeline p = so3_canonical_pipeline();
  const auto pair = catalog::so3_double();
  const auto t = QuasiTensors::from(derive_quasi_data(pair, make_isotropic_splitting(pair)));
  const auto rep = check_quasi_poisson(p.fields(), t, pts, jacobiator_functions(3));
  EXPECT_LT(rep.qpois1.value, 1e-4);
  EXPECT_LT(rep.qpois2.value, 1e-6);
  EXPECT_LT(rep.qpois3.value, 1e-6);
}

TEST(Frozen, CayleyRotationIsExactlyOrthogonal) {
  for (const Vec& x : so3_points(10, 18)) {
    const auto f = so3::freeze(x);
    EXPECT_EQ(f.rotation * f.rotation.transpose(), QMatrix::identity(3));
    EXPECT_LT((to_double(f.rotation) - so3::rotation(x)).cwiseAbs().maxCoeff(), 1e-3);
    const PairFiber pair = frozen_so3_pair(f);
    EXPECT_TRUE((pair.anchor * pair.anchor_dual()).is_zero());
    EXPECT_TRUE(check_identification(pair, exact_isotropic_section(pair)));
  }
}

TEST(Rationalize, NearestFraction) {
  EXPECT_EQ(rationalize(0.5, 16), Rational(1, 2));
  EXPECT_EQ(rationalize(1.0 / 3.0, 3), Rational(1, 3));
}

TEST(Registry, EveryExamplePassesAtSmallSampleCounts) {
  ExampleParams params;
  params.samples = 4;
  params.seed = 3;
  ASSERT_GE(example_registry().size(), 9u);
  for (const auto& ex : example_registry()) {
    for (const auto& r : ex.run(params)) {
      EXPECT_EQ(r.status, CheckStatus::pass) << ex.name << "/" << r.name << ": " << r.residual << " " << r.witness;
    }
  }
  EXPECT_EQ(find_example("no-such-example"), nullptr);
}
