#include <benchmark/benchmark.h>

#include "ocf/counting.hpp"
#include "ocf/filtration.hpp"

using namespace ocf;

namespace {

QuadSpace space(const std::string& desc, int p, int k = 1) {
  auto [D, kind] = parse_space_desc(desc);
  return standard_space(make_field(p, k), D, kind);
}

// A regular nilpotent witness on the split standard space of dimension D.
NilpotentWitness regular_witness(const QuadSpace& s) {
  SOEnum en = enumerate_so(s);
  const Mat id = Mat::identity(s.F, s.D);
  NilpotentWitness best = make_witness(s, Mat::zero(s.F, s.D, s.D));
  for (const Mat& u : en.unipotents) {
    NilpotentWitness w = make_witness(s, mat_sub(u, id));
    if (w.e > best.e) best = std::move(w);
  }
  return best;
}

void BM_field_mul(benchmark::State& state) {
  const FieldCtx* F = make_field(2, int(state.range(0)));
  int q = int(F->q());
  for (auto _ : state)
    for (int x = 1; x < q; ++x)
      for (int y = 1; y < q; ++y) benchmark::DoNotOptimize(F->mul(uint8_t(x), uint8_t(y)));
}
BENCHMARK(BM_field_mul)->Arg(2)->Arg(4)->Arg(6);

void BM_mat_mul(benchmark::State& state) {
  const FieldCtx* F = make_field(2, 1);
  int n = int(state.range(0));
  Mat a = Mat::identity(F, n);
  for (int i = 0; i + 1 < n; ++i) a.at(i, i + 1) = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mat_mul(a, a));
}
BENCHMARK(BM_mat_mul)->Arg(4)->Arg(8)->Arg(16);

void BM_canonical_filtration(benchmark::State& state) {
  QuadSpace s = space(state.range(0) % 2 ? "D" + std::to_string(state.range(0))
                                         : "D" + std::to_string(state.range(0)) + "+",
                      2);
  NilpotentWitness w = regular_witness(s);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_filtration(w));
}
BENCHMARK(BM_canonical_filtration)->Arg(4)->Arg(5)->Arg(6);

void BM_enumerate_so(benchmark::State& state) {
  QuadSpace s = space("D4+", 2);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_so(s));
}
BENCHMARK(BM_enumerate_so);

void BM_theorem_verification(benchmark::State& state) {
  QuadSpace s = space("D4+", 2);
  for (auto _ : state) benchmark::DoNotOptimize(verify_theorem_1_7(s));
}
BENCHMARK(BM_theorem_verification);

void BM_card_piece(benchmark::State& state) {
  int D = int(state.range(0));
  int type = D % 2 == 0 ? 1 : 0;
  std::vector<PieceLabel> labels = admissible_labels(D, type);
  for (auto _ : state)
    for (const PieceLabel& phi : labels) benchmark::DoNotOptimize(card_piece(phi, D, type));
}
BENCHMARK(BM_card_piece)->Arg(6)->Arg(8)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
