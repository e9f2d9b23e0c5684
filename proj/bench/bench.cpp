#include <benchmark/benchmark.h>

#include <random>

#include "ldic/gf2.hpp"
#include "ldic/regions.hpp"
#include "ldic/scheme.hpp"
#include "ldic/sim.hpp"

using namespace ldic;

namespace {

gf2::Mat random_mat(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gf2::Mat::random(r, c, rng);
}

scheme::SchemeConfig interior(int N) {
  scheme::SchemeConfig c;
  c.params = ChannelParams(2, 1, 1, 2);
  c.dist = FeedbackDist::independent(Rational(1), Rational(1));
  c.N = N;
  c.B = 4;
  c.R1p = c.R2p = Rational(13, 16);
  c.R1c = c.R2c = Rational(9, 16);
  c.r1 = c.r2 = Rational(3, 2);
  return c;
}

void BM_RankPacked(benchmark::State& state) {
  gf2::Mat m = random_mat(std::size_t(state.range(0)), std::size_t(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(m.rank());
}

void BM_RankReference(benchmark::State& state) {
  gf2::Mat m = random_mat(std::size_t(state.range(0)), std::size_t(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(gf2::ref::rank(m));
}

void BM_MulPacked(benchmark::State& state) {
  std::size_t n = std::size_t(state.range(0));
  gf2::Mat a = random_mat(n, n, 2), b = random_mat(n, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}

void BM_MulReference(benchmark::State& state) {
  std::size_t n = std::size_t(state.range(0));
  gf2::Mat a = random_mat(n, n, 2), b = random_mat(n, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gf2::ref::mul(a, b));
}

void BM_RegionEquality(benchmark::State& state) {
  ChannelParams p(3, 2, 2, 3);
  Rational half(1, 2);
  for (auto _ : state) {
    RegionComparison c = region_equal(inner_region(p, half, half), outer_region(p, half, half));
    benchmark::DoNotOptimize(c.equal);
  }
}

void BM_Trial(benchmark::State& state) {
  scheme::SchemeConfig cfg = interior(int(state.range(0)));
  scheme::CodebookSet books = scheme::generate_codebooks(cfg, 7);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    scheme::TrialResult t = scheme::run_trial(cfg, books, seed++, {});
    benchmark::DoNotOptimize(t.ok1);
  }
}

void BM_MonteCarlo(benchmark::State& state) {
  scheme::SchemeConfig cfg = interior(16);
  for (auto _ : state) {
    sim::SimResult r = sim::run_monte_carlo(cfg, int(state.range(0)), 5);
    benchmark::DoNotOptimize(r.err1);
  }
}

}  // namespace

BENCHMARK(BM_RankPacked)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_RankReference)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_MulPacked)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_MulReference)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_RegionEquality);
BENCHMARK(BM_Trial)->Arg(16)->Arg(64);
BENCHMARK(BM_MonteCarlo)->Arg(20);

BENCHMARK_MAIN();
