#include <cmath>

#include <benchmark/benchmark.h>

#include <jcdm/classical.hpp>
#include <jcdm/husimi.hpp>
#include <jcdm/spectra.hpp>
#include <jcdm/wkb.hpp>

using namespace jcdm;

static void BM_Assemble(benchmark::State& st) {
    const auto p = ModelParams::from_J_over_gprime(int(st.range(0)), 0.25);
    const auto b = enumerate_basis(p.N);
    for (auto _ : st) benchmark::DoNotOptimize(assemble_hamiltonian(p, b));
}
BENCHMARK(BM_Assemble)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

static void BM_Diagonalize(benchmark::State& st) {
    const auto p = ModelParams::from_J_over_gprime(int(st.range(0)), 0.25);
    for (auto _ : st) benchmark::DoNotOptimize(diagonalize(p));
}
BENCHMARK(BM_Diagonalize)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_Defects(benchmark::State& st) {
    const auto p = ModelParams::from_J_over_gprime(400, 0.25);
    const auto sol = diagonalize(p);
    for (auto _ : st)
        for (int n = 0; n < sol.size(); n += 16) benchmark::DoNotOptimize(wkb::defect(p, sol.eps[n]));
}
BENCHMARK(BM_Defects)->Unit(benchmark::kMillisecond);

static void BM_Actions(benchmark::State& st) {
    const auto p = ModelParams::from_J_over_gprime(400, 0.25);
    for (auto _ : st) {
        benchmark::DoNotOptimize(wkb::action_S(p, 4, -1.9));
        benchmark::DoNotOptimize(wkb::action_Q(p, 4, -1.6));
    }
}
BENCHMARK(BM_Actions)->Unit(benchmark::kMicrosecond);

static void BM_AveragedImbalance(benchmark::State& st) {
    const int N = 100;
    const classical::Couplings c{1.2 * 2 * std::sqrt(double(N)), 1.0};
    const auto s0 = classical::fig7_initial_state(1.5707963267948966, N);
    for (auto _ : st) benchmark::DoNotOptimize(classical::averaged_imbalance(s0, c, 20.0, 200.0));
}
BENCHMARK(BM_AveragedImbalance)->Unit(benchmark::kMillisecond);

static void BM_Husimi(benchmark::State& st) {
    const auto p = ModelParams::from_J_over_gprime(100, 1.0 / 3);
    const auto sol = diagonalize(p);
    for (auto _ : st) benchmark::DoNotOptimize(husimi::husimi_q(sol, 0));
}
BENCHMARK(BM_Husimi)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
