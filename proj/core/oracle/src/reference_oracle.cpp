// SPDX-License-Identifier: Apache-2.0
#include "cbreak/oracle/reference_oracle.hpp"

#include "cbreak/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cbreak::oracle {

namespace {

std::vector<double> pieces(double lo, double hi, std::vector<double> const& breaks)
{
    std::vector<double> pts{lo};
    for (double b : breaks)
    {
        if (b > lo && b < hi)
            pts.push_back(b);
    }
    std::sort(pts.begin() + 1, pts.end());
    pts.push_back(hi);
    return pts;
}

// (1 / (|I_a| |I_b|)) double integral of K over I_a x I_b, by a tensor rule per smooth piece.
double average_collision(CollisionKernel const& kernel, Rule const& rule, double a_lo, double a_hi, double b_lo,
                         double b_hi)
{
    auto const breaks = kernel.breakpoints();
    auto const xs = pieces(a_lo, a_hi, breaks);
    auto const ys = pieces(b_lo, b_hi, breaks);
    double total = 0;
    for (std::size_t p = 0; p + 1 < xs.size(); ++p)
    {
        for (std::size_t q = 0; q + 1 < ys.size(); ++q)
        {
            double const hx = 0.5 * (xs[p + 1] - xs[p]);
            double const hy = 0.5 * (ys[q + 1] - ys[q]);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            {
                double const x = xs[p] + hx * (1 + rule.nodes[i]);
                for (std::size_t k = 0; k < rule.nodes.size(); ++k)
                {
                    double const y = ys[q] + hy * (1 + rule.nodes[k]);
                    total += hx * hy * rule.weights[i] * rule.weights[k] * eval_collision(kernel, x, y);
                }
            }
        }
    }
    return total / ((a_hi - a_lo) * (b_hi - b_lo));
}

void check_sizes(SolverState const& state, Mesh const& mesh)
{
    if (state.concentrations.size() != mesh.size())
        throw InvalidArgument("state and mesh sizes differ");
}

SolverState advance(SolverState const& state, std::vector<double> const& rate, double dt)
{
    SolverState next{state.concentrations, state.time + dt, state.step_index + 1};
    for (std::size_t a = 0; a < rate.size(); ++a)
    {
        double value = state.concentrations[a] + dt * rate[a];
        if (value < -negativity_tolerance)
            throw SchemeFailure("concentration in cell " + std::to_string(a) + " fell below zero",
                                a, value);
        next.concentrations[a] = value < 0 ? 0.0 : value;
    }
    return next;
}

}  // namespace

std::vector<double> brute_force_rhs(SolverState const& state, CollisionKernel const& kernel,
                                    BreakageDistribution const& dist, Mesh const& mesh, std::size_t quadrature_order)
{
    std::size_t const cells = mesh.size();
    if (cells > max_cells)
        throw InstanceTooLarge("brute_force_rhs refuses " + std::to_string(cells) + " cells (limit "
                               + std::to_string(max_cells) + ")");
    check_sizes(state, mesh);
    Rule const rule = golub_welsch(quadrature_order);
    auto const& c = state.concentrations;

    std::vector<double> out(cells, 0.0);
    for (std::size_t a = 0; a < cells; ++a)
    {
        double const lo_a = mesh.left_edge(a);
        double const hi_a = mesh.right_edge(a);
        double const width_a = hi_a - lo_a;

        double birth = 0;
        for (std::size_t j = a; j < cells; ++j)
        {
            double const width_j = mesh.width(j);
            for (std::size_t l = 0; l < cells; ++l)
            {
                double const width_l = mesh.width(l);
                double const k = average_collision(kernel, rule, mesh.left_edge(j), mesh.right_edge(j),
                                                   mesh.left_edge(l), mesh.right_edge(l));
                double const upper = (a == j) ? mesh.midpoint(a) : hi_a;
                double const w = breakage_interval_integral(dist, lo_a, upper, mesh.midpoint(j), mesh.midpoint(l));
                birth += k * c[j] * width_j * c[l] * width_l * w;
            }
        }

        double death = 0;
        for (std::size_t j = 0; j < cells; ++j)
        {
            double const k = average_collision(kernel, rule, lo_a, hi_a, mesh.left_edge(j), mesh.right_edge(j));
            death += k * c[j] * mesh.width(j);
        }
        out[a] = birth / width_a - c[a] * death;
    }
    return out;
}

double rate_scale(SolverState const& state, CollisionKernel const& kernel, Mesh const& mesh,
                  std::size_t quadrature_order)
{
    check_sizes(state, mesh);
    Rule const rule = golub_welsch(quadrature_order);
    double scale = 0;
    for (std::size_t a = 0; a < mesh.size(); ++a)
    {
        double loss = 0;
        for (std::size_t j = 0; j < mesh.size(); ++j)
        {
            loss += average_collision(kernel, rule, mesh.left_edge(a), mesh.right_edge(a), mesh.left_edge(j),
                                      mesh.right_edge(j))
                    * state.concentrations[j] * mesh.width(j);
        }
        scale = std::max(scale, state.concentrations[a] * loss);
    }
    return scale;
}

SolverState euler_step(SolverState const& state, CollisionKernel const& kernel, BreakageDistribution const& dist,
                       Mesh const& mesh, double dt, StabilityBudget const& budget, std::size_t quadrature_order)
{
    if (!std::isfinite(dt) || dt < 0)
        throw InvalidArgument("time step must be finite and non-negative");
    if (dt > budget.dt_max * (1 + 1e-9))
        throw RejectedStep("time step exceeds stability limit", dt, budget.dt_max);
    if (dt == 0)
        return state;
    return advance(state, brute_force_rhs(state, kernel, dist, mesh, quadrature_order), dt);
}

SolverState rk4_reference_run(SolverState const& state, CollisionKernel const& kernel,
                              BreakageDistribution const& dist, Mesh const& mesh, double t_final, double dt_small,
                              StabilityBudget const& budget, std::size_t quadrature_order)
{
    if (!std::isfinite(dt_small) || dt_small <= 0)
        throw InvalidArgument("reference step must be positive and finite");
    if (dt_small > budget.dt_max / 10 * (1 + 1e-9))
        throw RejectedStep("reference step must not exceed dt_max / 10", dt_small, budget.dt_max);
    if (!std::isfinite(t_final) || t_final < state.time)
        throw InvalidArgument("t_final must be finite and not before the state time");
    check_sizes(state, mesh);

    DiscreteKernels const disc = discretize(kernel, dist, mesh, quadrature_order);
    auto const f = [&](std::vector<double> const& c) {
        return rhs(SolverState{c, 0, 0}, disc, mesh);
    };

    std::size_t const cells = mesh.size();
    SolverState current = state;
    std::size_t const steps = step_count(t_final - state.time, dt_small);
    std::vector<double> stage(cells);
    for (std::size_t n = 0; n < steps; ++n)
    {
        double const target = (n + 1 == steps) ? t_final : state.time + static_cast<double>(n + 1) * dt_small;
        double const h = target - current.time;
        auto const& c = current.concentrations;

        auto const k1 = f(c);
        for (std::size_t a = 0; a < cells; ++a)
            stage[a] = c[a] + 0.5 * h * k1[a];
        auto const k2 = f(stage);
        for (std::size_t a = 0; a < cells; ++a)
            stage[a] = c[a] + 0.5 * h * k2[a];
        auto const k3 = f(stage);
        for (std::size_t a = 0; a < cells; ++a)
            stage[a] = c[a] + h * k3[a];
        auto const k4 = f(stage);

        for (std::size_t a = 0; a < cells; ++a)
            current.concentrations[a] = c[a] + h / 6 * (k1[a] + 2 * k2[a] + 2 * k3[a] + k4[a]);
        current.time = target;
        ++current.step_index;
    }
    return current;
}

}  // namespace cbreak::oracle
