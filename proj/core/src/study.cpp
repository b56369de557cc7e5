// SPDX-License-Identifier: Apache-2.0
#include "cbreak/study.hpp"

#include "cbreak/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace cbreak {

namespace {

std::string format(char const* fmt, double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, value);
    return buf;
}

double min_of(std::span<const double> values)
{
    return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

}  // namespace

PreparedRun prepare_run(RunConfig const& config, std::size_t cells)
{
    validate(config);
    Mesh mesh = make_mesh(config, cells);
    auto const kernel = make_kernel(config.kernel);
    auto const dist = make_breakage(config.breakage);
    DiscreteKernels disc = discretize(kernel, dist, mesh, config.quadrature_order);
    SolverState initial = initial_state(mesh, make_initial(config.initial), config.quadrature_order);

    double const lambda = config.stability.lambda.value_or(kernel.growth_constant().value_or(1.0));
    double const density = config.stability.density_bound.value_or(dist.stability_density_bound(mesh));
    double const l1 = total_number(initial, mesh);
    double const m1 = total_mass(initial, mesh);

    StabilityBudget budget{0, config.dt.theta, std::numeric_limits<double>::infinity()};
    if (l1 > 0 && m1 > 0)
        budget = stability_constant(lambda, mesh.domain_max(), l1, density, m1, config.t_final, config.dt.theta);

    double dt = 0;
    if (config.dt.policy == DtPolicy::fixed)
    {
        dt = config.dt.value;
        if (dt > budget.dt_max * (1 + 1e-9))
            throw RejectedStep("fixed dt " + format("%.6e", dt) + " exceeds the stability limit "
                                   + format("%.6e", budget.dt_max),
                               dt, budget.dt_max);
    }
    else
    {
        dt = std::min(config.dt.c * mesh.h_max(), budget.dt_max);
    }

    return PreparedRun{std::move(mesh), std::move(disc), std::move(initial), budget, dt, lambda, density};
}

SingleRunResult run_single(RunConfig const& config)
{
    auto prep = prepare_run(config, config.mesh.cells);
    SingleRunResult result;
    result.budget = prep.budget;
    result.dt = prep.dt;

    auto const row_for = [&](SolverState const& s, double step_dt) {
        return MomentRow{s.time, total_number(s, prep.mesh), total_mass(s, prep.mesh), min_of(s.concentrations),
                         std::isfinite(prep.budget.dt_max) ? step_dt / prep.budget.dt_max : 0.0};
    };
    result.rows.push_back(row_for(prep.initial, 0));

    std::size_t const steps = step_count(config.t_final, prep.dt);
    std::size_t step = 0;
    double previous_time = prep.initial.time;
    Observer observer = [&](double time, std::span<const double> concentrations) {
        ++step;
        double const step_dt = time - previous_time;
        previous_time = time;
        if (step % config.cadence != 0 && step != steps)
            return;
        SolverState view{std::vector<double>(concentrations.begin(), concentrations.end()), time, step};
        result.rows.push_back(row_for(view, step_dt));
    };

    auto run_result = cbreak::run(prep.initial, prep.disc, prep.mesh, config.t_final, prep.dt, prep.budget,
                                  std::span<const Observer>(&observer, 1));
    result.final_state = std::move(run_result.state);
    result.clamped_total = run_result.clamped_total;
    result.max_relative_mass_increase = run_result.max_relative_mass_increase;
    return result;
}

StudyResult run_study(StudyConfig const& config, std::size_t threads)
{
    validate(config);
    std::size_t const n = config.levels.size();
    std::vector<LevelResult> levels(n);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++)
        {
            try
            {
                auto prep = prepare_run(config.base, config.levels[k]);
                auto res = cbreak::run(prep.initial, prep.disc, prep.mesh, config.base.t_final, prep.dt, prep.budget);
                levels[k] = LevelResult{config.levels[k],
                                        total_number(res.state, prep.mesh),
                                        prep.dt,
                                        prep.budget,
                                        res.state.step_index,
                                        res.max_relative_mass_increase};
            }
            catch (...)
            {
                failures[k] = std::current_exception();
            }
        }
    };

    std::size_t const pool = std::clamp<std::size_t>(threads, 1, n);
    if (pool == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> workers;
        for (std::size_t t = 0; t < pool; ++t)
            workers.emplace_back(worker);
        for (auto& w : workers)
            w.join();
    }

    for (std::size_t k = 0; k < n; ++k)
    {
        if (!failures[k])
            continue;
        try
        {
            std::rethrow_exception(failures[k]);
        }
        catch (std::exception const& e)
        {
            throw StudyFailure(config.levels[k], e.what());
        }
    }

    std::vector<double> totals;
    for (auto const& level : levels)
        totals.push_back(level.total_number);
    StudyResult result;
    result.report = make_convergence_report(config.levels, std::move(totals));
    result.levels = std::move(levels);
    return result;
}

void write_single_csv(std::ostream& out, SingleRunResult const& result)
{
    out << "time,M0,M1,min_concentration,budget_usage\n";
    for (auto const& row : result.rows)
    {
        out << format("%.12e", row.time) << ',' << format("%.12e", row.m0) << ',' << format("%.12e", row.m1) << ','
            << format("%.12e", row.min_concentration) << ',' << format("%.6e", row.budget_usage) << '\n';
    }
}

void write_single_json(std::ostream& out, SingleRunResult const& result)
{
    nlohmann::json rows = nlohmann::json::array();
    for (auto const& row : result.rows)
    {
        rows.push_back({{"time", row.time},
                        {"M0", row.m0},
                        {"M1", row.m1},
                        {"min_concentration", row.min_concentration},
                        {"budget_usage", row.budget_usage}});
    }
    nlohmann::json doc = {{"dt", result.dt},
                          {"stability_constant", result.budget.s},
                          {"dt_max", std::isfinite(result.budget.dt_max) ? nlohmann::json(result.budget.dt_max)
                                                                          : nlohmann::json(nullptr)},
                          {"clamped_cells", result.clamped_total},
                          {"max_relative_mass_increase", result.max_relative_mass_increase},
                          {"rows", rows}};
    out << doc.dump(2) << '\n';
}

void write_study_csv(std::ostream& out, StudyResult const& result)
{
    auto const& r = result.report;
    out << "cells,total_number,error,eoc\n";
    for (std::size_t k = 0; k < r.cell_counts.size(); ++k)
    {
        out << r.cell_counts[k] << ',' << format("%.12e", r.totals[k]) << ','
            << (k >= 1 ? format("%.3e", r.errors[k - 1]) : "-") << ','
            << (k >= 2 ? format("%.4f", r.eoc[k - 2]) : "-") << '\n';
    }
}

void write_study_json(std::ostream& out, StudyResult const& result)
{
    nlohmann::json levels = nlohmann::json::array();
    auto const& r = result.report;
    for (std::size_t k = 0; k < result.levels.size(); ++k)
    {
        auto const& level = result.levels[k];
        nlohmann::json entry = {{"cells", level.cells},
                                {"total_number", level.total_number},
                                {"dt", level.dt},
                                {"steps", level.steps},
                                {"stability_constant", level.budget.s},
                                {"max_relative_mass_increase", level.max_relative_mass_increase},
                                {"error", k >= 1 ? nlohmann::json(r.errors[k - 1]) : nlohmann::json(nullptr)},
                                {"eoc", k >= 2 ? nlohmann::json(r.eoc[k - 2]) : nlohmann::json(nullptr)}};
        levels.push_back(entry);
    }
    out << nlohmann::json{{"levels", levels}}.dump(2) << '\n';
}

}  // namespace cbreak
