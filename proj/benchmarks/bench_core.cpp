#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "manin/numeric/hamiltonian.hpp"
#include "manin/scene.hpp"

using namespace manin;
using manin::testing::Gen;

static void BM_Rref(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Gen g(1);
  const QMatrix m = g.matrix(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(rref(m));
}
BENCHMARK(BM_Rref)->Arg(4)->Arg(8)->Arg(16)->Arg(24);

static void BM_ComposeRelations(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Gen g(2);
  const auto r = LinearRelation::graph_of(g.matrix(n, n));
  const auto s = LinearRelation(n, n, g.subspace(2 * n, n + 2));
  for (auto _ : state) benchmark::DoNotOptimize(compose(r, s));
}
BENCHMARK(BM_ComposeRelations)->Arg(3)->Arg(6)->Arg(12);

static void BM_KFromQuasi(benchmark::State& state) {
  Gen g(3);
  const auto v = g.exact_valid_fiber(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(k_from_quasi(v.q, v.pair, v.j, v.dJ));
}
BENCHMARK(BM_KFromQuasi)->Arg(2)->Arg(4)->Arg(6);

static void BM_PiFromK(benchmark::State& state) {
  Gen g(4);
  const auto v = g.exact_valid_fiber(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(pi_from_k(v.h, v.j));
}
BENCHMARK(BM_PiFromK)->Arg(2)->Arg(4)->Arg(6);

static void BM_MorphismCriteria(benchmark::State& state) {
  const auto p = catalog::so3_double();
  const auto m = identity_morphism(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_morphism_def(m));
    benchmark::DoNotOptimize(check_morphism_equiv(m));
  }
}
BENCHMARK(BM_MorphismCriteria);

static void BM_ParseScene(benchmark::State& state) {
  std::ifstream in(std::string(MANIN_FIXTURES) + "/scenes/numeric_examples.mp");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  for (auto _ : state) benchmark::DoNotOptimize(scene::parse_scene(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseScene);

static void BM_AxiomCheckSo3(benchmark::State& state) {
  const auto pts = numeric::sample_ball(3, 2.0, static_cast<std::size_t>(state.range(0)), 5);
  const auto c = numeric::make_so3_dressing();
  const auto lib = numeric::SectionLibrary::standard(3, 6);
  for (auto _ : state) benchmark::DoNotOptimize(numeric::check_axioms_numeric(c, pts, lib));
}
BENCHMARK(BM_AxiomCheckSo3)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
