// SPDX-License-Identifier: Apache-2.0
#include "cbreak/solver.hpp"

#include "cbreak/diagnostics.hpp"
#include "cbreak/error.hpp"
#include "cbreak/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace cbreak {

namespace {

std::string sci(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    return buf;
}


void require_positive_finite(double v, char const* name)
{
    if (!std::isfinite(v) || !(v > 0))
        throw InvalidArgument(std::string(name) + " must be positive and finite");
}

void check_dimensions(SolverState const& state, DiscreteKernels const& disc, Mesh const& mesh)
{
    if (state.concentrations.size() != mesh.size() || disc.size() != mesh.size())
        throw InvalidArgument("state, kernels and mesh sizes differ: "
                              + std::to_string(state.concentrations.size()) + ", "
                              + std::to_string(disc.size()) + ", " + std::to_string(mesh.size()));
}

// relative slack so that dt computed as theta / S is never rejected by rounding
constexpr double dt_slack = 1e-9;

}  // namespace

StabilityBudget stability_constant(double lambda, double domain_max, double l1_init,
                                   double density_bound, double m1_init, double t_final, double theta)
{
    require_positive_finite(lambda, "lambda");
    require_positive_finite(domain_max, "R");
    require_positive_finite(l1_init, "initial L1 norm");
    require_positive_finite(density_bound, "breakage density bound");
    require_positive_finite(m1_init, "initial mass");
    if (!std::isfinite(t_final) || t_final < 0)
        throw InvalidArgument("T must be finite and non-negative");
    if (!(theta > 0 && theta < 1))
        throw InvalidArgument("theta must lie in (0, 1)");

    double const exponent = 2 * lambda * domain_max * density_bound * m1_init * t_final;
    if (!std::isfinite(exponent) || exponent > std::log(std::numeric_limits<double>::max()))
        throw StabilityUnbounded("stability exponent " + std::to_string(exponent)
                                 + " overflows; shrink T or R");
    double const s = lambda * (2 * domain_max * l1_init * std::exp(exponent) + m1_init);
    if (!std::isfinite(s))
        throw StabilityUnbounded("stability constant overflows; shrink T or R");
    return {s, theta, theta / s};
}

SolverState initial_state(Mesh const& mesh, std::function<double(double)> const& init,
                          std::size_t quadrature_order)
{
    auto const& rule = gauss_legendre(quadrature_order);
    SolverState state;
    state.concentrations.resize(mesh.size());
    for (std::size_t a = 0; a < mesh.size(); ++a)
    {
        double const half = 0.5 * mesh.width(a);
        double const mid = mesh.midpoint(a);
        double sum = 0;
        for (std::size_t q = 0; q < rule.order(); ++q)
        {
            double const m = mid + half * rule.nodes[q];
            double const v = init(m);
            if (!std::isfinite(v) || v < 0)
                throw InvalidArgument("initial data is negative or non-finite at volume " + std::to_string(m));
            sum += rule.weights[q] * v;
        }
        state.concentrations[a] = 0.5 * sum;
    }
    return state;
}

std::vector<double> rhs(SolverState const& state, DiscreteKernels const& disc, Mesh const& mesh)
{
    check_dimensions(state, disc, mesh);
    std::size_t const cells = mesh.size();
    auto const& c = state.concentrations;

    // number per cell, G_j = C_j dm_j
    std::vector<double> number(cells);
    for (std::size_t j = 0; j < cells; ++j)
        number[j] = c[j] * mesh.width(j);

    std::vector<double> birth(cells, 0.0);
    std::vector<double> out(cells);
    for (std::size_t j = 0; j < cells; ++j)
    {
        auto const row = disc.collision_row(j);
        double death_rate = 0;
        for (auto const& group : disc.birth_groups(j))
        {
            double partner_sum = 0;
            for (auto l : group.partners)
                partner_sum += row[l] * number[l];
            death_rate += partner_sum;
            if (number[j] == 0 || partner_sum == 0)
                continue;
            double const source = number[j] * partner_sum;
            for (auto const& entry : disc.birth_list(group.list))
                birth[entry.cell] += source * entry.weight;
        }
        out[j] = -c[j] * death_rate;
    }
    for (std::size_t a = 0; a < cells; ++a)
        out[a] += birth[a] / mesh.width(a);
    return out;
}

SolverState euler_step(SolverState const& state, DiscreteKernels const& disc, Mesh const& mesh,
                       double dt, StabilityBudget const& budget, StepReport* report)
{
    if (!std::isfinite(dt) || dt < 0)
        throw InvalidArgument("time step must be finite and non-negative");
    if (dt > budget.dt_max * (1 + dt_slack))
        throw RejectedStep("time step " + sci(dt) + " exceeds stability limit "
                               + sci(budget.dt_max),
                           dt, budget.dt_max);
    check_dimensions(state, disc, mesh);

    SolverState next = state;
    StepReport local;
    local.mass_before = moment(state, mesh, 1);
    if (dt > 0)
    {
        auto const rate = rhs(state, disc, mesh);
        for (std::size_t a = 0; a < mesh.size(); ++a)
        {
            double v = state.concentrations[a] + dt * rate[a];
            if (v < 0)
            {
                if (v < -negativity_tolerance)
                    throw SchemeFailure("concentration in cell " + std::to_string(a) + " fell to "
                                            + sci(v) + " at t = " + sci(state.time + dt),
                                        a, v);
                v = 0;
                ++local.clamped_cells;
            }
            next.concentrations[a] = v;
        }
        next.time = state.time + dt;
        next.step_index = state.step_index + 1;
    }
    local.mass_after = moment(next, mesh, 1);
    if (report)
        *report = local;
    return next;
}

std::size_t step_count(double t_final, double dt)
{
    if (!std::isfinite(t_final) || t_final < 0)
        throw InvalidArgument("t_final must be finite and non-negative");
    if (!std::isfinite(dt) || !(dt > 0))
        throw InvalidArgument("time step must be positive and finite");
    if (t_final == 0)
        return 0;
    // a trailing remainder below 1e-10 dt is absorbed into the previous step
    auto const steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-10));
    return std::max<std::size_t>(steps, 1);
}

RunResult run(SolverState state, DiscreteKernels const& disc, Mesh const& mesh, double t_final,
              double dt, StabilityBudget const& budget, std::span<const Observer> observers)
{
    if (!std::isfinite(t_final) || t_final < state.time)
        throw InvalidArgument("t_final must be finite and not before the state time");
    std::size_t const steps = step_count(t_final - state.time, dt);
    if (steps > 0 && std::min(dt, t_final - state.time) > budget.dt_max * (1 + dt_slack))
        throw RejectedStep("time step " + sci(dt) + " exceeds stability limit "
                               + sci(budget.dt_max),
                           dt, budget.dt_max);

    RunResult result;
    result.series.reserve(steps);
    double const t0 = state.time;
    for (std::size_t n = 0; n < steps; ++n)
    {
        double const target = (n + 1 == steps) ? t_final : t0 + static_cast<double>(n + 1) * dt;
        double const step = target - state.time;
        StepReport report;
        state = euler_step(state, disc, mesh, step, budget, &report);
        state.time = target;

        StepRecord record;
        record.time = state.time;
        record.number = moment(state, mesh, 0);
        record.mass = report.mass_after;
        record.min_concentration =
            *std::min_element(state.concentrations.begin(), state.concentrations.end());
        record.clamped_cells = report.clamped_cells;
        record.relative_mass_change = report.relative_mass_change();
        result.series.push_back(record);
        result.clamped_total += report.clamped_cells;
        result.max_relative_mass_increase =
            std::max(result.max_relative_mass_increase, report.relative_mass_change());

        for (auto const& observer : observers)
            observer(state.time, state.concentrations);
    }
    result.state = std::move(state);
    return result;
}

}  // namespace cbreak
