// SPDX-License-Identifier: Apache-2.0
#include "cbreak/diagnostics.hpp"

#include "cbreak/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cbreak {

double moment(SolverState const& state, Mesh const& mesh, int order)
{
    if (order < 0)
        throw InvalidArgument("moment order must be >= 0");
    if (state.concentrations.size() != mesh.size())
        throw InvalidArgument("state and mesh sizes differ");
    double sum = 0;
    for (std::size_t a = 0; a < mesh.size(); ++a)
    {
        double const weight = order == 0 ? 1.0 : std::pow(mesh.midpoint(a), order);
        sum += weight * state.concentrations[a] * mesh.width(a);
    }
    return sum;
}

void MomentSeries::record(double time, SolverState const& state, Mesh const& mesh)
{
    if (!times.empty() && !(time > times.back()))
        throw InvalidArgument("moment series times must be strictly increasing");
    std::vector<double> row;
    row.reserve(orders.size());
    for (int order : orders)
        row.push_back(moment(state, mesh, order));
    times.push_back(time);
    values.push_back(std::move(row));
}

std::vector<double> double_mesh_errors(std::span<const double> totals)
{
    std::vector<double> errors;
    for (std::size_t k = 0; k + 1 < totals.size(); ++k)
        errors.push_back(std::abs(totals[k] - totals[k + 1]));
    return errors;
}

std::vector<double> eoc_from_errors(std::span<const double> errors)
{
    if (errors.size() < 2)
        throw InvalidArgument("EOC needs at least two errors");
    std::vector<double> eoc;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k)
    {
        double const num = std::abs(errors[k]);
        double const den = std::abs(errors[k + 1]);
        if (!(num > 0) || !(den > 0) || !std::isfinite(num) || !std::isfinite(den))
            throw DegenerateConvergence("EOC undefined: error pair (" + std::to_string(errors[k]) + ", "
                                        + std::to_string(errors[k + 1]) + ")");
        eoc.push_back(std::log(num / den) / std::numbers::ln2);
    }
    return eoc;
}

std::vector<double> eoc_from_totals(std::span<const double> totals)
{
    if (totals.size() < 3)
        throw InvalidArgument("EOC needs totals from at least three meshes");
    auto const errors = double_mesh_errors(totals);
    return eoc_from_errors(errors);
}

ConvergenceReport make_convergence_report(std::vector<std::size_t> cell_counts, std::vector<double> totals)
{
    if (cell_counts.size() != totals.size())
        throw InvalidArgument("cell counts and totals differ in length");
    for (std::size_t k = 0; k + 1 < cell_counts.size(); ++k)
    {
        if (cell_counts[k + 1] != 2 * cell_counts[k])
            throw InvalidArgument("cell counts must double between levels");
    }
    ConvergenceReport report;
    report.errors = double_mesh_errors(totals);
    report.eoc = eoc_from_totals(totals);
    report.cell_counts = std::move(cell_counts);
    report.totals = std::move(totals);
    return report;
}

std::vector<double> restrict_to_coarse(SolverState const& fine, Mesh const& fine_mesh, Mesh const& coarse_mesh)
{
    if (!coarse_mesh.is_halved_by(fine_mesh))
        throw InvalidArgument("fine mesh is not a two-fold refinement of the coarse mesh");
    if (fine.concentrations.size() != fine_mesh.size())
        throw InvalidArgument("fine state and mesh sizes differ");
    std::vector<double> projected(coarse_mesh.size());
    for (std::size_t a = 0; a < coarse_mesh.size(); ++a)
    {
        std::size_t const left = 2 * a;
        std::size_t const right = left + 1;
        double const mass = fine.concentrations[left] * fine_mesh.width(left)
                            + fine.concentrations[right] * fine_mesh.width(right);
        projected[a] = mass / (fine_mesh.width(left) + fine_mesh.width(right));
    }
    return projected;
}

double nested_l1_difference(SolverState const& coarse, Mesh const& coarse_mesh, SolverState const& fine,
                            Mesh const& fine_mesh)
{
    if (coarse.concentrations.size() != coarse_mesh.size())
        throw InvalidArgument("coarse state and mesh sizes differ");
    auto const projected = restrict_to_coarse(fine, fine_mesh, coarse_mesh);
    double sum = 0;
    for (std::size_t a = 0; a < coarse_mesh.size(); ++a)
        sum += std::abs(coarse.concentrations[a] - projected[a]) * coarse_mesh.width(a);
    return sum;
}

}  // namespace cbreak
