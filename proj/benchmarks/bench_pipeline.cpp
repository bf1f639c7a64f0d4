// Throughput of the analysis stages on the bundled fixtures.

#include <benchmark/benchmark.h>

#include "headergen/pipeline.hpp"

namespace {

using namespace headergen;

const std::string kFig3 = std::string(FIXTURES_DIR) + "/fig3/fig3.ipynb";
const std::string kStubs = std::string(DATA_DIR) + "/stubs";
const std::string kTaxonomy = std::string(DATA_DIR) + "/taxonomy.json";

void BM_Flatten(benchmark::State& state) {
  NotebookDoc nb = load_notebook(kFig3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flatten(nb));
  }
}
BENCHMARK(BM_Flatten);

void BM_Parse(benchmark::State& state) {
  NotebookDoc nb = load_notebook(kFig3);
  CompositeScript script = flatten(nb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_module(script.text));
  }
}
BENCHMARK(BM_Parse);

void BM_FullAnalysis(benchmark::State& state) {
  TypeStubDB stubs = TypeStubDB::load_dir(kStubs);
  TaxonomyDB taxonomy = TaxonomyDB::load_file(kTaxonomy);
  NotebookDoc nb = load_notebook(kFig3);
  for (auto _ : state) {
    NotebookDoc copy = nb;
    benchmark::DoNotOptimize(run_analysis(std::move(copy), stubs, taxonomy));
  }
}
BENCHMARK(BM_FullAnalysis);

void BM_Annotate(benchmark::State& state) {
  TypeStubDB stubs = TypeStubDB::load_dir(kStubs);
  TaxonomyDB taxonomy = TaxonomyDB::load_file(kTaxonomy);
  auto result = run_analysis(load_notebook(kFig3), stubs, taxonomy);
  for (auto _ : state) {
    benchmark::DoNotOptimize(annotate_notebook(*result, taxonomy, {}));
  }
}
BENCHMARK(BM_Annotate);

} // namespace

BENCHMARK_MAIN();
