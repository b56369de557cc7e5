// SPDX-License-Identifier: Apache-2.0
#include "cbreak/kernels.hpp"
#include "cbreak/mesh.hpp"
#include "cbreak/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

cbreak::CollisionKernel kernel_for(int which)
{
    if (which == 0)
        return cbreak::CollisionKernel::product(1.0);
    if (which == 1)
        return cbreak::CollisionKernel::sum();
    return cbreak::CollisionKernel::piecewise_h2(1.0, 0.5, 0.5, 0.5);
}

void BM_Discretize(benchmark::State& state)
{
    auto const mesh = cbreak::Mesh::make_uniform(1e-3, 10, static_cast<std::size_t>(state.range(0)));
    auto const kernel = kernel_for(static_cast<int>(state.range(1)));
    auto const dist = cbreak::BreakageDistribution::dirac_comb({0.4, 0.6}, {1.0, 1.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(cbreak::discretize(kernel, dist, mesh, 6));
}
BENCHMARK(BM_Discretize)->ArgsProduct({{30, 120, 480}, {0, 2}})->Unit(benchmark::kMillisecond);

void BM_Rhs(benchmark::State& state)
{
    auto const cells = static_cast<std::size_t>(state.range(0));
    auto const mesh = cbreak::Mesh::make_uniform(1e-3, 10, cells);
    auto const kernel = kernel_for(static_cast<int>(state.range(1)));
    auto const dist = state.range(2) == 0 ? cbreak::BreakageDistribution::dirac_comb({0.4, 0.6}, {1.0, 1.0})
                                          : cbreak::BreakageDistribution::conditional_uniform();
    auto const disc = cbreak::discretize(kernel, dist, mesh, 6);
    auto const init = cbreak::initial_state(mesh, [](double m) { return std::exp(-m); }, 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(cbreak::rhs(init, disc, mesh));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rhs)->ArgsProduct({{30, 120, 480}, {0, 1}, {0, 1}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
