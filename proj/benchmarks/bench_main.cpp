// Microbenchmarks for the hot paths: evaluation, game solving, collapse,
// and model enumeration.

#include <benchmark/benchmark.h>

#include "ckmu/collapse.hpp"
#include "ckmu/formula.hpp"
#include "ckmu/game.hpp"
#include "ckmu/kripke.hpp"
#include "ckmu/semantics.hpp"
#include "ckmu/solver.hpp"

namespace {

ckmu::KripkeModel bench_model(int worlds) {
  return ckmu::gen_ck(42, ckmu::GenBounds{worlds, 2});
}

const char* kNested = "nu X. mu Y. <> (X \\/ Y)";

void BM_Evaluate(benchmark::State& state) {
  const ckmu::KripkeModel m = bench_model(static_cast<int>(state.range(0)));
  const ckmu::FormulaPtr f = ckmu::parse(kNested);
  for (auto _ : state) {
    ckmu::Evaluator ev(m);  // fresh evaluator: defeat the denotation cache
    benchmark::DoNotOptimize(ev.evaluate(f));
  }
}
BENCHMARK(BM_Evaluate)->Arg(4)->Arg(8)->Arg(12);

void BM_BuildAndSolve(benchmark::State& state) {
  const ckmu::KripkeModel m = bench_model(static_cast<int>(state.range(0)));
  const ckmu::FormulaPtr f = ckmu::parse(kNested);
  for (auto _ : state) {
    const ckmu::Arena a = ckmu::build_arena(m, 0, f);
    benchmark::DoNotOptimize(ckmu::solve(a));
  }
}
BENCHMARK(BM_BuildAndSolve)->Arg(4)->Arg(8);

void BM_XCheck(benchmark::State& state) {
  const ckmu::KripkeModel m = bench_model(4);
  const ckmu::FormulaPtr f = ckmu::parse(kNested);
  for (auto _ : state) benchmark::DoNotOptimize(ckmu::xcheck(m, f));
}
BENCHMARK(BM_XCheck);

void BM_Collapse(benchmark::State& state) {
  const ckmu::FormulaPtr f =
      ckmu::well_name(ckmu::parse("nu X. mu Y. <> (X \\/ Y) /\\ [] (P \\/ X)"));
  for (auto _ : state) benchmark::DoNotOptimize(ckmu::collapse(f));
}
BENCHMARK(BM_Collapse);

void BM_EnumerateModels(benchmark::State& state) {
  const ckmu::EnumBounds bounds{2, 1, true, false};
  for (auto _ : state) {
    std::uint64_t n = ckmu::enumerate_models(
        bounds, [](const ckmu::KripkeModel&) { return true; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_EnumerateModels);

}  // namespace

BENCHMARK_MAIN();
