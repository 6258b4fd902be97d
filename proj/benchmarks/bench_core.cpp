#include <benchmark/benchmark.h>

#include <random>

#include "dysonrg/certify.hpp"
#include "dysonrg/lro.hpp"
#include "dysonrg/rg_map.hpp"

namespace {

using dysonrg::BlockKernel;
using dysonrg::Interval;
using dysonrg::NormWeights;
using dysonrg::SiteSet;

template <class T>
dysonrg::SpinPolynomial<T> majority_input(int depth) {
  const auto seed = dysonrg::majority_seed<T>(40.0);
  dysonrg::HamiltonianSpec spec;
  spec.gamma = 40.0;
  std::vector<typename dysonrg::SpinPolynomial<T>::Term> pad;
  for (int d = 3; d <= depth; ++d)
    pad.push_back({SiteSet::original({0}), SiteSet(dysonrg::Lattice::block, {-d}),
                   T(1e-3 / d)});
  return seed.c0 + dysonrg::hamiltonian_hat<T>(spec, NormWeights(1.0)).poly +
         dysonrg::SpinPolynomial<T>::from_terms(pad);
}

void WalshTransform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> values(std::size_t(1) << n);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : values) v = dist(rng);
  std::vector<int> sig, blk;
  for (int i = 0; i < n - 2; ++i) sig.push_back(i);
  blk.push_back(-1);
  blk.push_back(0);
  for (auto _ : state) {
    auto p = dysonrg::SpinPolynomial<double>::from_values(values, sig, blk);
    benchmark::DoNotOptimize(p);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(WalshTransform)->DenseRange(10, 20, 2);

void BlockSumOutFloat(benchmark::State& state) {
  const auto input = majority_input<double>(static_cast<int>(state.range(0)));
  const BlockKernel kernel = BlockKernel::majority();
  for (auto _ : state) {
    auto f = dysonrg::block_sum_out(input, kernel);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BlockSumOutFloat)->DenseRange(4, 12, 2);

void BlockSumOutInterval(benchmark::State& state) {
  const auto input = majority_input<Interval>(static_cast<int>(state.range(0)));
  const BlockKernel kernel = BlockKernel::majority();
  for (auto _ : state) {
    auto f = dysonrg::block_sum_out(input, kernel);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BlockSumOutInterval)->DenseRange(4, 10, 2);

void ContractionDiagnostic(benchmark::State& state) {
  const auto input = majority_input<double>(6);
  const BlockKernel kernel = BlockKernel::majority();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dysonrg::contraction_diagnostic(input, kernel, NormWeights(1.0)));
  }
}
BENCHMARK(ContractionDiagnostic);

void TorusEnumeration(benchmark::State& state) {
  const dysonrg::TorusModel model(static_cast<int>(state.range(0)), 0.7, 0.3, 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dysonrg::pair_correlations(model));
  }
}
BENCHMARK(TorusEnumeration)->DenseRange(3, 7, 2);

void RegularizerSum(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dysonrg::regularizer_sum(m, 1.5));
  }
}
BENCHMARK(RegularizerSum)->RangeMultiplier(4)->Range(64, 1024);

}  // namespace

BENCHMARK_MAIN();
