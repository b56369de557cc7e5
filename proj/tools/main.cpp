// SPDX-License-Identifier: Apache-2.0
#include "cbreak/config.hpp"
#include "cbreak/error.hpp"
#include "cbreak/study.hpp"

#include "CLI11.hpp"
#include "seed_check.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

struct Options
{
    std::string config;
    std::optional<std::string> output;
    std::optional<std::string> format;
    bool seed_check = false;
    std::size_t threads = 0;
};

cbreak::OutputSpec resolve_output(cbreak::OutputSpec spec, Options const& opts)
{
    if (opts.output)
        spec.path = *opts.output;
    if (opts.format)
        spec.format = *opts.format == "json" ? cbreak::OutputFormat::json : cbreak::OutputFormat::csv;
    return spec;
}

template<class Writer>
void emit(cbreak::OutputSpec const& spec, Writer&& write)
{
    if (spec.path.empty() || spec.path == "-")
    {
        write(std::cout);
        return;
    }
    std::ofstream out(spec.path);
    if (!out)
        throw cbreak::Error("cannot open output file " + spec.path);
    write(out);
}

int run_command(Options const& opts)
{
    auto const config = cbreak::load_config(opts.config);
    auto const* run = std::get_if<cbreak::RunConfig>(&config);
    if (!run)
        throw cbreak::ConfigError("study", "`run` needs a config without a study table");
    if (opts.seed_check && !cbreak::tools::seed_check(*run, std::cerr))
        return 3;
    auto const result = cbreak::run_single(*run);
    auto const spec = resolve_output(run->output, opts);
    emit(spec, [&](std::ostream& out) {
        if (spec.format == cbreak::OutputFormat::json)
            cbreak::write_single_json(out, result);
        else
            cbreak::write_single_csv(out, result);
    });
    std::cerr << "dt " << result.dt << ", dt_max " << result.budget.dt_max << ", clamped cells "
              << result.clamped_total << ", max relative mass increase " << result.max_relative_mass_increase
              << '\n';
    return 0;
}

int study_command(Options const& opts)
{
    auto const config = cbreak::load_config(opts.config);
    auto const* study = std::get_if<cbreak::StudyConfig>(&config);
    if (!study)
        throw cbreak::ConfigError("study", "`study` needs a config with a study table");
    if (opts.seed_check && !cbreak::tools::seed_check(study->base, std::cerr))
        return 3;
    std::size_t const threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    auto const result = cbreak::run_study(*study, threads);
    auto const spec = resolve_output(study->base.output, opts);
    emit(spec, [&](std::ostream& out) {
        if (spec.format == cbreak::OutputFormat::json)
            cbreak::write_study_json(out, result);
        else
            cbreak::write_study_csv(out, result);
    });
    for (auto const& level : result.levels)
    {
        std::cerr << level.cells << " cells: dt " << level.dt << ", " << level.steps << " steps, S "
                  << level.budget.s << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-volume solver for the collision-induced breakage equation"};
    app.require_subcommand(1);
    Options opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--output", opts.output, "Output path (\"-\" for stdout); overrides the config");
        sub->add_option("--format", opts.format, "Output format; overrides the config")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--seed-check", opts.seed_check, "Compare solver and brute-force oracle on a small instance first");
        sub->add_option("--threads", opts.threads, "Worker threads for study levels (0 = hardware)");
    };
    auto* run = app.add_subcommand("run", "Single run: moment time series");
    auto* study = app.add_subcommand("study", "Convergence study: double-mesh errors and EOC");
    add_common(run);
    add_common(study);

    CLI11_PARSE(app, argc, argv);

    try
    {
        return run->parsed() ? run_command(opts) : study_command(opts);
    }
    catch (cbreak::Error const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
