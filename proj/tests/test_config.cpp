// SPDX-License-Identifier: Apache-2.0
#include "cbreak/config.hpp"
#include "cbreak/error.hpp"
#include "cbreak/study.hpp"

#include "doctest.h"

#include <random>
#include <sstream>

using namespace cbreak;

namespace {

std::filesystem::path const config_dir = CBREAK_CONFIG_DIR;

std::string const minimal_run = R"({
  "domain": { "min": 0.001, "max": 10.0 },
  "mesh": { "kind": "uniform", "cells": 20 },
  "kernel": { "type": "product", "lambda": 1.0 },
  "breakage": { "type": "dirac_comb", "fractions": [0.4, 0.6], "weights": [1.0, 1.0] },
  "initial": { "type": "exp_decay" },
  "time": { "t_final": 1.0, "dt": { "policy": "auto" } }
})";

std::string with_study(std::string const& levels)
{
    auto text = minimal_run;
    text.insert(text.rfind('}'), ", \"study\": { \"levels\": " + levels + " }\n");
    return text;
}

std::string replace(std::string text, std::string const& from, std::string const& to)
{
    auto const pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

std::string error_path(std::string const& text)
{
    try
    {
        parse_config(text);
    }
    catch (ConfigError const& e)
    {
        return e.path();
    }
    return "<accepted>";
}

RunConfig run_config(std::string const& text)
{
    return std::get<RunConfig>(parse_config(text));
}

std::string study_csv(StudyConfig const& cfg, std::size_t threads)
{
    std::ostringstream out;
    write_study_csv(out, run_study(cfg, threads));
    return out.str();
}

}  // namespace

TEST_SUITE("config")
{
    TEST_CASE("Test case 1 config parses as a study")
    {
        auto const cfg = load_config(config_dir / "test_case_1.json");
        REQUIRE(std::holds_alternative<StudyConfig>(cfg));
        auto const& study = std::get<StudyConfig>(cfg);
        CHECK(study.levels == std::vector<std::size_t>{30, 60, 120, 240, 480});
        CHECK(study.base.domain_min == 1e-3);
        CHECK(study.base.domain_max == 10);
        CHECK(study.base.kernel.type == KernelType::product);
        CHECK(study.base.breakage.type == BreakageType::dirac_comb);
        CHECK(study.base.breakage.fractions == std::vector<double>{0.4, 0.6});
        CHECK(study.base.breakage.weights == std::vector<double>{1, 1});
        CHECK(study.base.initial.type == InitialType::exp_decay);
        CHECK(study.base.t_final == 1);
        CHECK(study.base.dt.policy == DtPolicy::automatic);

        auto const two = std::get<StudyConfig>(load_config(config_dir / "test_case_2.json"));
        CHECK(two.base.kernel.type == KernelType::sum);
        CHECK(std::holds_alternative<RunConfig>(load_config(config_dir / "single_run.json")));
    }

    TEST_CASE("study levels must double")
    {
        CHECK(error_path(with_study("[30, 50]")) == "study.levels");
        CHECK(error_path(with_study("[30, 60, 100]")) == "study.levels[2]");
        CHECK(error_path(with_study("[30, 60, 120]")) == "<accepted>");
        CHECK(error_path(with_study("[]")) == "study.levels");
    }

    TEST_CASE("theta must lie in (0, 1)")
    {
        auto const text = replace(minimal_run, "\"policy\": \"auto\"", "\"policy\": \"auto\", \"theta\": 1.2");
        CHECK(error_path(text) == "time.dt.theta");
        CHECK(error_path(replace(minimal_run, "\"policy\": \"auto\"", "\"policy\": \"auto\", \"theta\": 0")) == "time.dt.theta");
    }

    TEST_CASE("strict schema with field paths")
    {
        CHECK(error_path(replace(minimal_run, "\"cells\": 20", "\"cells\": 20, \"colour\": 1")) == "mesh.colour");
        CHECK(error_path(replace(minimal_run, "\"type\": \"product\", \"lambda\": 1.0", "\"type\": \"sum\", \"lambda\": 1.0"))
              == "kernel.lambda");
        CHECK(error_path(replace(minimal_run, "\"cells\": 20", "\"cells\": -3")) == "mesh.cells");
        CHECK(error_path(replace(minimal_run, "\"cells\": 20", "\"cells\": 0")) == "mesh.cells");
        CHECK(error_path(replace(minimal_run, "\"min\": 0.001", "\"min\": \"small\"")) == "domain.min");
        CHECK(error_path(replace(minimal_run, "\"min\": 0.001", "\"min\": 20")) == "domain.max");
        CHECK(error_path(replace(minimal_run, "\"kind\": \"uniform\"", "\"kind\": \"log\"")) == "mesh.kind");
        CHECK(error_path(replace(minimal_run, "\"kind\": \"uniform\"", "\"kind\": \"geometric\"")) == "mesh.ratio");
        CHECK(error_path(replace(minimal_run, "\"weights\": [1.0, 1.0]", "\"weights\": [1.0, 2.0]")) == "breakage");
        CHECK(error_path(replace(minimal_run, "\"t_final\": 1.0", "\"t_final\": -1.0")) == "time.t_final");
        CHECK(error_path(replace(minimal_run, "\"policy\": \"auto\"", "\"policy\": \"fixed\"")) == "time.dt.value");
        CHECK(error_path(replace(minimal_run, "\"policy\": \"auto\"", "\"policy\": \"fixed\", \"value\": 0.001, \"c\": 2"))
              == "time.dt.c");
        CHECK(error_path(replace(minimal_run, "\"type\": \"exp_decay\"", "\"type\": \"tabulated\", \"volumes\": [1], \"values\": [1]"))
              == "initial");
        CHECK(error_path(replace(minimal_run, "\"initial\"", "\"initial_\"")) == "initial");
        CHECK(error_path("{ \"domain\": ") == "<document>");
        CHECK(error_path("[1, 2]") == "<root>");
        CHECK(error_path(replace(minimal_run, "\"kernel\": {", "\"quadrature_order\": 0, \"kernel\": {")) == "quadrature_order");
    }

    TEST_CASE("optional tables")
    {
        auto const cfg = run_config(replace(
            minimal_run, "\"initial\"",
            "\"stability\": { \"lambda\": 2, \"density_bound\": 0.5 }, \"observer\": { \"cadence\": 5 }, "
            "\"output\": { \"path\": \"out.csv\", \"format\": \"json\" }, \"quadrature_order\": 8, \"initial\""));
        CHECK(cfg.stability.lambda == 2.0);
        CHECK(cfg.stability.density_bound == 0.5);
        CHECK(cfg.cadence == 5);
        CHECK(cfg.output.path == "out.csv");
        CHECK(cfg.output.format == OutputFormat::json);
        CHECK(cfg.quadrature_order == 8);
    }

    TEST_CASE("tabulated initial data interpolates and holds end values")
    {
        InitialSpec spec{InitialType::tabulated, {1, 2, 4}, {0, 2, 1}};
        auto const f = make_initial(spec);
        CHECK(f(0.5) == 0);
        CHECK(f(1.5) == doctest::Approx(1));
        CHECK(f(3) == doctest::Approx(1.5));
        CHECK(f(10) == 1);
        CHECK_THROWS_AS(make_initial({InitialType::tabulated, {1, 1}, {0, 1}}), InvalidArgument);
        CHECK_THROWS_AS(make_initial({InitialType::tabulated, {1, 2}, {0, -1}}), InvalidArgument);
        CHECK(make_initial({})(2.0) == doctest::Approx(std::exp(-2.0)));
    }

    TEST_CASE("property: serialize then parse is the identity")
    {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(0, 1);
        for (int trial = 0; trial < 200; ++trial)
        {
            RunConfig cfg;
            cfg.domain_min = u(rng) < 0.3 ? 0.0 : u(rng);
            cfg.domain_max = cfg.domain_min + 0.1 + 20 * u(rng);
            cfg.mesh.kind = u(rng) < 0.5 ? MeshKind::uniform : MeshKind::geometric;
            cfg.mesh.cells = 1 + static_cast<std::size_t>(u(rng) * 500);
            if (cfg.mesh.kind == MeshKind::geometric)
                cfg.mesh.ratio = 0.5 + u(rng);
            switch (trial % 3)
            {
            case 0:
                cfg.kernel = {KernelType::product, 0.1 + u(rng)};
                break;
            case 1:
                cfg.kernel = {KernelType::sum};
                break;
            default:
                cfg.kernel = {KernelType::piecewise_h2, 0.1 + u(rng), u(rng), 0.1 + 0.4 * u(rng), 0.5};
            }
            if (u(rng) < 0.5)
            {
                double const f = 0.1 + 0.8 * u(rng);
                cfg.breakage = {BreakageType::dirac_comb, {f, 1 - f}, {1, 1}};
            }
            else
            {
                cfg.breakage = {BreakageType::conditional_uniform, {}, {}};
            }
            if (u(rng) < 0.3)
                cfg.initial = {InitialType::tabulated, {0.0, 1.0, 3.0 + u(rng)}, {1.0, u(rng), 0.0}};
            cfg.t_final = 3 * u(rng);
            cfg.dt.theta = 0.05 + 0.9 * u(rng);
            if (u(rng) < 0.5)
            {
                cfg.dt.policy = DtPolicy::fixed;
                cfg.dt.value = 1e-4 + u(rng);
            }
            else
            {
                cfg.dt.c = 0.1 + u(rng);
            }
            if (u(rng) < 0.5)
                cfg.stability.lambda = 0.5 + u(rng);
            if (u(rng) < 0.5)
                cfg.stability.density_bound = 1e-3 + u(rng);
            cfg.quadrature_order = 1 + static_cast<std::size_t>(u(rng) * 20);
            cfg.cadence = 1 + static_cast<std::size_t>(u(rng) * 50);
            cfg.output = {u(rng) < 0.5 ? "" : "results/out.csv", u(rng) < 0.5 ? OutputFormat::csv : OutputFormat::json};
            validate(cfg);

            Config const single = cfg;
            CHECK(parse_config(serialize_config(single)) == single);

            StudyConfig study{cfg, {cfg.mesh.cells, 2 * cfg.mesh.cells, 4 * cfg.mesh.cells}};
            Config const wrapped = study;
            CHECK(parse_config(serialize_config(wrapped)) == wrapped);
        }
    }
}

TEST_SUITE("study")
{
    TEST_CASE("single run moments for the product kernel")
    {
        auto const result = run_single(run_config(minimal_run));
        REQUIRE(result.rows.size() > 2);
        CHECK(result.rows.front().time == 0);
        CHECK(result.rows.back().time == 1.0);
        for (std::size_t k = 1; k < result.rows.size(); ++k)
        {
            CHECK(result.rows[k].m1 <= result.rows[k - 1].m1 * (1 + 1e-12));
            CHECK(result.rows[k].m0 >= result.rows[k - 1].m0);
            CHECK(result.rows[k].budget_usage <= 1 + 1e-9);
            CHECK(result.rows[k].min_concentration >= 0);
        }
    }

    TEST_CASE("observer cadence")
    {
        auto cfg = run_config(minimal_run);
        cfg.t_final = 0.01;
        cfg.dt = {DtPolicy::fixed, 1e-4};
        cfg.cadence = 30;
        auto const result = run_single(cfg);
        // t = 0, steps 30, 60, 90 and the final step 100
        REQUIRE(result.rows.size() == 5);
        CHECK(result.rows[1].time == doctest::Approx(30e-4));
        CHECK(result.rows[4].time == doctest::Approx(0.01));
    }

    TEST_CASE("zero horizon gives the initial row only")
    {
        auto cfg = run_config(minimal_run);
        cfg.t_final = 0;
        auto const result = run_single(cfg);
        REQUIRE(result.rows.size() == 1);
        CHECK(result.rows[0].time == 0);
        CHECK(result.rows[0].m0 > 0);
        std::ostringstream csv;
        write_single_csv(csv, result);
        CHECK(csv.str().rfind("time,M0,M1,min_concentration,budget_usage\n", 0) == 0);
    }

    TEST_CASE("fixed dt above the stability limit is rejected before stepping")
    {
        auto cfg = run_config(minimal_run);
        cfg.dt = {DtPolicy::fixed, 0.1};
        CHECK_THROWS_AS(run_single(cfg), RejectedStep);
    }

    TEST_CASE("single-run CSV is byte-for-byte deterministic")
    {
        auto cfg = run_config(minimal_run);
        cfg.t_final = 0.2;
        std::ostringstream a, b;
        write_single_csv(a, run_single(cfg));
        write_single_csv(b, run_single(cfg));
        CHECK(a.str() == b.str());
    }

    TEST_CASE("study CSV layout and thread independence")
    {
        auto cfg = std::get<StudyConfig>(parse_config(with_study("[10, 20, 40, 80]")));
        cfg.base.t_final = 0.25;
        auto const sequential = study_csv(cfg, 1);
        CHECK(sequential == study_csv(cfg, 3));
        std::istringstream lines(sequential);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "cells,total_number,error,eoc");
        std::getline(lines, line);
        CHECK(line.rfind("10,", 0) == 0);
        CHECK(line.substr(line.size() - 4) == ",-,-");
        std::getline(lines, line);
        CHECK(line.rfind("20,", 0) == 0);
        CHECK(line.substr(line.size() - 2) == ",-");
        std::getline(lines, line);
        CHECK(line.back() != '-');
    }

    TEST_CASE("study reports per-level data")
    {
        auto cfg = std::get<StudyConfig>(parse_config(with_study("[10, 20, 40]")));
        cfg.base.t_final = 0.1;
        auto const result = run_study(cfg, 2);
        REQUIRE(result.levels.size() == 3);
        for (std::size_t k = 0; k < 3; ++k)
        {
            CHECK(result.levels[k].cells == cfg.levels[k]);
            CHECK(result.levels[k].dt <= result.levels[k].budget.dt_max);
            CHECK(result.levels[k].steps == step_count(0.1, result.levels[k].dt));
        }
        std::ostringstream json;
        write_study_json(json, result);
        CHECK(json.str().find("\"eoc\": null") != std::string::npos);
    }

    TEST_CASE("zero initial data surfaces degenerate convergence")
    {
        auto cfg = std::get<StudyConfig>(parse_config(with_study("[10, 20, 40]")));
        cfg.base.initial = {InitialType::tabulated, {0, 10}, {0, 0}};
        CHECK_THROWS_AS(run_study(cfg), DegenerateConvergence);
    }

    TEST_CASE("a failing level aborts the study and is identified")
    {
        auto cfg = std::get<StudyConfig>(parse_config(with_study("[30, 60, 120]")));
        cfg.base.dt = {DtPolicy::fixed, 4.5e-4};
        try
        {
            run_study(cfg, 2);
            FAIL("expected StudyFailure");
        }
        catch (StudyFailure const& e)
        {
            CHECK(e.cells() == 30);
        }
    }
}
