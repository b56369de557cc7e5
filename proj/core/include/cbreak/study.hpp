// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbreak/config.hpp"
#include "cbreak/diagnostics.hpp"
#include "cbreak/kernels.hpp"
#include "cbreak/mesh.hpp"
#include "cbreak/solver.hpp"

#include <cstddef>
#include <ostream>
#include <vector>

namespace cbreak {

//! Everything needed to time-step one configuration on one mesh.
struct PreparedRun
{
    Mesh mesh;
    DiscreteKernels disc;
    SolverState initial;
    StabilityBudget budget;
    //! Step actually used: min(c h_max, dt_max) for auto, the configured value for fixed.
    double dt = 0;
    double stability_lambda = 0;
    double density_bound = 0;
};

/*!
 * Build mesh, discrete kernels, initial state and stability budget.
 *
 * Zero initial data has nothing to bound: the budget is then s = 0 with an
 * unlimited dt_max. A fixed dt above dt_max throws RejectedStep here, before
 * any stepping.
 */
PreparedRun prepare_run(RunConfig const& config, std::size_t cells);

//! One observer tick of a single run.
struct MomentRow
{
    double time = 0;
    double m0 = 0;
    double m1 = 0;
    double min_concentration = 0;
    //! dt of the step that produced this row over dt_max (0 for the initial row).
    double budget_usage = 0;
};

struct SingleRunResult
{
    std::vector<MomentRow> rows;
    SolverState final_state;
    StabilityBudget budget;
    double dt = 0;
    std::size_t clamped_total = 0;
    double max_relative_mass_increase = 0;
};

//! Rows at t = 0, every `cadence` steps, and at t_final.
SingleRunResult run_single(RunConfig const& config);

struct LevelResult
{
    std::size_t cells = 0;
    double total_number = 0;
    double dt = 0;
    StabilityBudget budget;
    std::size_t steps = 0;
    double max_relative_mass_increase = 0;
};

struct StudyResult
{
    std::vector<LevelResult> levels;
    ConvergenceReport report;
};

/*!
 * Run every level (up to `threads` at once) and compute errors and EOC.
 *
 * Results are ordered by level index regardless of completion order. The
 * first failing level, by index, is rethrown as StudyFailure; a sequence
 * with a zero error surfaces DegenerateConvergence.
 */
StudyResult run_study(StudyConfig const& config, std::size_t threads = 1);

void write_single_csv(std::ostream& out, SingleRunResult const& result);
void write_single_json(std::ostream& out, SingleRunResult const& result);

//! Columns cells,total_number,error,eoc with "-" where a value is undefined.
void write_study_csv(std::ostream& out, StudyResult const& result);
void write_study_json(std::ostream& out, StudyResult const& result);

}  // namespace cbreak
