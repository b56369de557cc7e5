// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbreak/kernels.hpp"
#include "cbreak/mesh.hpp"
#include "cbreak/solver.hpp"

#include <cstddef>
#include <vector>

namespace cbreak::oracle {

//! Largest instance brute_force_rhs accepts.
inline constexpr std::size_t max_cells = 64;

//! Gauss–Legendre rule on [-1, 1] from the eigen-decomposition of the Jacobi matrix.
struct Rule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};
Rule golub_welsch(std::size_t order);

/*!
 * Dense triple-loop evaluation of the semi-discrete rate.
 *
 * Every collision cell average and birth window is recomputed inline from the
 * kernel and breakage primitives. Throws InstanceTooLarge above max_cells.
 */
std::vector<double> brute_force_rhs(SolverState const& state, CollisionKernel const& kernel,
                                    BreakageDistribution const& dist, Mesh const& mesh,
                                    std::size_t quadrature_order = 6);

/*!
 * Magnitude of the loss term, max_a C_a sum_j K_aj C_j dm_j, as the scale for
 * comparing rates: birth and death can cancel to a net rate far below their size.
 */
double rate_scale(SolverState const& state, CollisionKernel const& kernel, Mesh const& mesh,
                  std::size_t quadrature_order = 6);

//! Explicit Euler on top of brute_force_rhs, with the solver's step and clamping rules.
SolverState euler_step(SolverState const& state, CollisionKernel const& kernel,
                       BreakageDistribution const& dist, Mesh const& mesh, double dt,
                       StabilityBudget const& budget, std::size_t quadrature_order = 6);

/*!
 * Classical fourth-order Runge–Kutta on the same semi-discrete system.
 *
 * Requires dt_small <= budget.dt_max / 10 (RejectedStep otherwise). The last
 * step is shortened to land on t_final. No size guard: the rate comes from
 * the discretized operator so that fine meshes stay affordable.
 */
SolverState rk4_reference_run(SolverState const& state, CollisionKernel const& kernel,
                              BreakageDistribution const& dist, Mesh const& mesh, double t_final,
                              double dt_small, StabilityBudget const& budget,
                              std::size_t quadrature_order = 6);

}  // namespace cbreak::oracle
