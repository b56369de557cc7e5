// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbreak/kernels.hpp"
#include "cbreak/mesh.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cbreak {

//! Cell-mean concentrations at one time level.
struct SolverState
{
    std::vector<double> concentrations;
    double time = 0;
    std::size_t step_index = 0;

    bool operator==(SolverState const&) const = default;
};

/*!
 * Time-step budget S dt <= theta < 1.
 *
 * S = lambda (2 R |C_in|_1 exp(2 lambda R |B|_inf M1_in T) + M1_in).
 */
struct StabilityBudget
{
    double s = 0;
    double theta = 0.5;
    double dt_max = 0;
};

/*!
 * Evaluate the stability constant and the largest admissible step theta / S.
 *
 * All inputs must be positive and finite except T, which may be zero.
 * Throws StabilityUnbounded if the exponential overflows.
 */
StabilityBudget stability_constant(double lambda, double domain_max, double l1_init,
                                   double density_bound, double m1_init, double t_final,
                                   double theta = 0.5);

//! Cell averages of `init` with a Gauss–Legendre rule; throws on negative node values.
SolverState initial_state(Mesh const& mesh, std::function<double(double)> const& init,
                          std::size_t quadrature_order);

//! dC/dt of the semi-discrete scheme (birth minus death) for every cell.
std::vector<double> rhs(SolverState const& state, DiscreteKernels const& disc, Mesh const& mesh);

//! Values in [-tolerance, 0) are clamped to zero; anything lower is a scheme failure.
inline constexpr double negativity_tolerance = 1e-14;

struct StepReport
{
    std::size_t clamped_cells = 0;
    double mass_before = 0;
    double mass_after = 0;

    //! (mass_after - mass_before) / mass_before, zero for an empty state.
    double relative_mass_change() const noexcept
    {
        return mass_before > 0 ? (mass_after - mass_before) / mass_before : 0.0;
    }
};

/*!
 * One explicit Euler step C^{n+1} = C^n + dt rhs(C^n).
 *
 * Throws RejectedStep when dt exceeds budget.dt_max and SchemeFailure when a
 * concentration drops below -negativity_tolerance.
 */
SolverState euler_step(SolverState const& state, DiscreteKernels const& disc, Mesh const& mesh,
                       double dt, StabilityBudget const& budget, StepReport* report = nullptr);

struct StepRecord
{
    double time = 0;
    double number = 0;
    double mass = 0;
    double min_concentration = 0;
    std::size_t clamped_cells = 0;
    double relative_mass_change = 0;
};

using Observer = std::function<void(double time, std::span<const double> concentrations)>;

struct RunResult
{
    SolverState state;
    //! One record per completed step.
    std::vector<StepRecord> series;
    std::size_t clamped_total = 0;
    double max_relative_mass_increase = 0;
};

/*!
 * Advance to t_final in steps of dt, the last one shortened to land on
 * t_final. Observers see the state after every step.
 */
RunResult run(SolverState state, DiscreteKernels const& disc, Mesh const& mesh, double t_final,
              double dt, StabilityBudget const& budget, std::span<const Observer> observers = {});

//! Number of steps `run` takes for the given horizon.
std::size_t step_count(double t_final, double dt);

}  // namespace cbreak
