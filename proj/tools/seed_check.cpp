// SPDX-License-Identifier: Apache-2.0
#include "seed_check.hpp"

#include "cbreak/oracle/reference_oracle.hpp"
#include "cbreak/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace cbreak::tools {

namespace {

double max_abs(std::vector<double> const& v)
{
    double m = 0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

double max_diff(std::vector<double> const& a, std::vector<double> const& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

bool seed_check(RunConfig const& config, std::ostream& log, std::uint64_t seed)
{
    constexpr std::size_t cells = 8;
    constexpr double tolerance = 1e-12;

    Mesh const mesh = make_mesh(config, cells);
    auto const kernel = make_kernel(config.kernel);
    auto const dist = make_breakage(config.breakage);
    auto const disc = discretize(kernel, dist, mesh, config.quadrature_order);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    SolverState state;
    for (std::size_t a = 0; a < cells; ++a)
        state.concentrations.push_back(uniform(rng));

    auto const fast = rhs(state, disc, mesh);
    auto const slow = oracle::brute_force_rhs(state, kernel, dist, mesh, config.quadrature_order);
    double const rate_scale = std::max(oracle::rate_scale(state, kernel, mesh, config.quadrature_order),
                                       std::numeric_limits<double>::min());
    double const rate_error = max_diff(fast, slow) / rate_scale;

    double max_rate = 0;
    for (std::size_t a = 0; a < cells; ++a)
    {
        if (state.concentrations[a] > 0)
            max_rate = std::max(max_rate, -fast[a] / state.concentrations[a]);
    }
    double const dt = max_rate > 0 ? 0.1 / max_rate : 1e-3;
    StabilityBudget const budget{0, 0.5, std::numeric_limits<double>::infinity()};
    auto const step_fast = euler_step(state, disc, mesh, dt, budget);
    auto const step_slow = oracle::euler_step(state, kernel, dist, mesh, dt, budget, config.quadrature_order);
    double const step_error = max_diff(step_fast.concentrations, step_slow.concentrations)
                              / std::max(max_abs(step_slow.concentrations), std::numeric_limits<double>::min());

    bool const ok = rate_error <= tolerance && step_error <= tolerance;
    log << "seed-check (" << cells << " cells, seed " << seed << "): rhs rel. error " << rate_error
        << ", euler step rel. error " << step_error << (ok ? " -> ok" : " -> MISMATCH") << '\n';
    return ok;
}

}  // namespace cbreak::tools
