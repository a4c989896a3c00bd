// Parallel kernels against the serial pdz::reference versions.

#include <benchmark/benchmark.h>

#include <random>

#include "pdz/fourier.hpp"
#include "pdz/quantize.hpp"
#include "pdz/reference.hpp"

namespace {

pdz::SampledSymbol random_symbol(const pdz::LatticeBox& box)
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::vector<pdz::cplx> s(box.size() * box.size());
    for (auto& v : s) v = {g(rng), g(rng)};
    return pdz::SampledSymbol(box, std::move(s));
}

pdz::LatticeSequence random_sequence(const pdz::LatticeBox& box)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    pdz::LatticeSequence f(box);
    for (auto& v : f.values) v = {g(rng), g(rng)};
    return f;
}

pdz::LatticeBox box_of(const benchmark::State& state) { return pdz::LatticeBox(int(state.range(0)), int(state.range(1))); }

void BM_fourier(benchmark::State& state)
{
    auto f = random_sequence(box_of(state));
    for (auto _ : state) benchmark::DoNotOptimize(pdz::forward_fourier(f));
}

void BM_fourier_reference(benchmark::State& state)
{
    auto f = random_sequence(box_of(state));
    for (auto _ : state) benchmark::DoNotOptimize(pdz::reference::forward_fourier(f));
}

void BM_apply(benchmark::State& state)
{
    const auto box = box_of(state);
    auto s = random_symbol(box);
    auto f = random_sequence(box);
    for (auto _ : state) benchmark::DoNotOptimize(pdz::apply(s, f));
}

void BM_apply_reference(benchmark::State& state)
{
    const auto box = box_of(state);
    auto s = random_symbol(box);
    auto f = random_sequence(box);
    for (auto _ : state) benchmark::DoNotOptimize(pdz::reference::apply(s, f));
}

void BM_matrix(benchmark::State& state)
{
    auto s = random_symbol(box_of(state));
    for (auto _ : state) benchmark::DoNotOptimize(pdz::matrix(s));
}

void BM_matrix_reference(benchmark::State& state)
{
    auto s = random_symbol(box_of(state));
    for (auto _ : state) benchmark::DoNotOptimize(pdz::reference::matrix(s));
}

// (n, N) pairs.
void sizes(benchmark::internal::Benchmark* b)
{
    b->Args({1, 16})->Args({1, 64})->Args({2, 4})->Args({2, 8})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_fourier)->Apply(sizes);
BENCHMARK(BM_fourier_reference)->Apply(sizes);
BENCHMARK(BM_apply)->Apply(sizes);
BENCHMARK(BM_apply_reference)->Apply(sizes);
BENCHMARK(BM_matrix)->Apply(sizes);
BENCHMARK(BM_matrix_reference)->Apply(sizes);

BENCHMARK_MAIN();
