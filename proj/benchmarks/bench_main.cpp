#include <benchmark/benchmark.h>

#include <string>

#include "foliate/chernweil.hpp"
#include "foliate/document.hpp"
#include "foliate/gelfand_fuks.hpp"
#include "foliate/jets.hpp"
#include "foliate/parser.hpp"
#include "foliate/pipeline.hpp"
#include "foliate/woq.hpp"

using namespace foliate;

namespace {

Document corpus(const std::string& name) { return parse_document_file(std::string(FOLIATE_CORPUS_DIR) + "/" + name); }

void BM_Normalize(benchmark::State& state) {
  Expr e = parse_expr("(x^2 - y^2)/(x - y) + (x*y + 1)^3/(1 + x^2) - x*(x + y)");
  for (auto _ : state) benchmark::DoNotOptimize(normalize(e));
}
BENCHMARK(BM_Normalize);

void BM_UniversalC(benchmark::State& state) {
  int q = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ce_differential(universal_c(q, q)));
}
BENCHMARK(BM_UniversalC)->DenseRange(1, 3);

void BM_WOCohomology(benchmark::State& state) {
  int q = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wo_cohomology(q, 0, wo_top_degree(q)));
}
BENCHMARK(BM_WOCohomology)->DenseRange(1, 3);

void BM_ProlongMap(benchmark::State& state) {
  std::vector<Expr> phi = {parse_expr("x + y^2 + x*y*z"), parse_expr("exp(x)*y"), parse_expr("z + sin(x)")};
  std::map<std::string, Expr> at = {{"x", Expr(0)}, {"y", Expr(1)}, {"z", Expr(2)}};
  int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prolong_map(phi, {"x", "y", "z"}, at, k));
}
BENCHMARK(BM_ProlongMap)->DenseRange(1, 3);

void BM_ChernWeil(benchmark::State& state, const char* name) {
  Document d = corpus(name);
  for (auto _ : state) benchmark::DoNotOptimize(run_command("chern-weil", &d, {}));
}
BENCHMARK_CAPTURE(BM_ChernWeil, bott_r4, "bott_r4.fol");
BENCHMARK_CAPTURE(BM_ChernWeil, plane_metric, "plane_metric.fol");

void BM_GodbillonVey(benchmark::State& state, const char* name) {
  Document d = corpus(name);
  for (auto _ : state) benchmark::DoNotOptimize(run_command("gv", &d, {}));
}
BENCHMARK_CAPTURE(BM_GodbillonVey, tilted, "tilted.fol");
BENCHMARK_CAPTURE(BM_GodbillonVey, paraboloid_pullback, "paraboloid_pullback.fol");

}  // namespace
BENCHMARK_MAIN();
