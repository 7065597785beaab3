// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "qpp/algorithms.hpp"
#include "qpp/kernels.hpp"

namespace {

using namespace qpp;

std::vector<Amplitude> random_vector(std::size_t dim, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Amplitude> v(dim);
    for (auto& z : v) z = {g(rng), g(rng)};
    return v;
}

template <void (*Kernel)(std::span<Amplitude>)>
void bm_inplace(benchmark::State& state) {
    auto v = random_vector(std::size_t{1} << state.range(0));
    for (auto _ : state) {
        Kernel(v);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

template <void (*Kernel)(std::span<Amplitude>, std::span<const std::uint8_t>)>
void bm_phase_flip(benchmark::State& state) {
    auto v = random_vector(std::size_t{1} << state.range(0));
    std::vector<std::uint8_t> table(v.size());
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = static_cast<std::uint8_t>(i % 3 == 0);
    for (auto _ : state) {
        Kernel(v, table);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

template <double (*Kernel)(std::span<const Amplitude>)>
void bm_norm(benchmark::State& state) {
    const auto v = random_vector(std::size_t{1} << state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(v));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

template <Matrix (*Kernel)(const Matrix&, const Matrix&)>
void bm_matmul(benchmark::State& state) {
    const std::size_t dim = std::size_t{1} << state.range(0);
    const Matrix a(dim, random_vector(dim * dim));
    const Matrix b(dim, random_vector(dim * dim, 2));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

void bm_grover_run(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto f = OracleFunction::point(n, 1);
    const auto k = GroverAnalysis(std::uint64_t{1} << n).k_approx();
    for (auto _ : state) benchmark::DoNotOptimize(grover_run(f, k).p_solution);
}

}  // namespace

BENCHMARK(bm_inplace<kernels::serial::hadamard_all>)->Name("hadamard_all/serial")->DenseRange(8, 12, 2);
BENCHMARK(bm_inplace<kernels::omp::hadamard_all>)->Name("hadamard_all/omp")->DenseRange(8, 12, 2);
BENCHMARK(bm_inplace<kernels::serial::inversion_about_mean>)->Name("inversion_about_mean/serial")->DenseRange(8, 12, 2);
BENCHMARK(bm_inplace<kernels::omp::inversion_about_mean>)->Name("inversion_about_mean/omp")->DenseRange(8, 12, 2);
BENCHMARK(bm_phase_flip<kernels::serial::phase_flip>)->Name("phase_flip/serial")->DenseRange(8, 12, 2);
BENCHMARK(bm_phase_flip<kernels::omp::phase_flip>)->Name("phase_flip/omp")->DenseRange(8, 12, 2);
BENCHMARK(bm_norm<kernels::serial::norm_squared>)->Name("norm_squared/serial")->DenseRange(8, 12, 2);
BENCHMARK(bm_norm<kernels::omp::norm_squared>)->Name("norm_squared/omp")->DenseRange(8, 12, 2);
BENCHMARK(bm_matmul<kernels::serial::matmul>)->Name("matmul/serial")->DenseRange(4, 7, 1);
BENCHMARK(bm_matmul<kernels::omp::matmul>)->Name("matmul/omp")->DenseRange(4, 7, 1);
BENCHMARK(bm_grover_run)->Name("grover_run")->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
