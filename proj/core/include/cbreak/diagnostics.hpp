// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbreak/mesh.hpp"
#include "cbreak/solver.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cbreak {

//! Midpoint-rule moment sum_a m_a^order C_a dm_a.
double moment(SolverState const& state, Mesh const& mesh, int order);

inline double total_number(SolverState const& state, Mesh const& mesh)
{
    return moment(state, mesh, 0);
}

inline double total_mass(SolverState const& state, Mesh const& mesh)
{
    return moment(state, mesh, 1);
}

//! Time series of selected moments.
struct MomentSeries
{
    std::vector<int> orders;
    std::vector<double> times;
    //! values[k][i] is moment orders[i] at times[k].
    std::vector<std::vector<double>> values;

    void record(double time, SolverState const& state, Mesh const& mesh);
};

//! |N_I - N_2I| for consecutive entries.
std::vector<double> double_mesh_errors(std::span<const double> totals);

/*!
 * ln(e_k / e_{k+1}) / ln 2 for consecutive errors.
 *
 * Throws DegenerateConvergence when an error is zero or non-finite.
 */
std::vector<double> eoc_from_errors(std::span<const double> errors);

//! EOC from per-mesh totals on successively doubled meshes (needs >= 3 entries).
std::vector<double> eoc_from_totals(std::span<const double> totals);

struct ConvergenceReport
{
    std::vector<std::size_t> cell_counts;
    std::vector<double> totals;
    //! errors[k] = |totals[k] - totals[k + 1]|
    std::vector<double> errors;
    //! eoc[k] uses errors[k] and errors[k + 1]
    std::vector<double> eoc;
};

ConvergenceReport make_convergence_report(std::vector<std::size_t> cell_counts,
                                          std::vector<double> totals);

/*!
 * L1 distance after averaging the fine solution back onto the coarse mesh.
 *
 * The fine mesh must split every coarse cell into two equal halves.
 */
double nested_l1_difference(SolverState const& coarse, Mesh const& coarse_mesh,
                            SolverState const& fine, Mesh const& fine_mesh);

//! Width-weighted average of child-cell pairs onto the coarse mesh.
std::vector<double> restrict_to_coarse(SolverState const& fine, Mesh const& fine_mesh,
                                       Mesh const& coarse_mesh);

}  // namespace cbreak
