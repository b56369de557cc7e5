// SPDX-License-Identifier: Apache-2.0
#include "cbreak/diagnostics.hpp"
#include "cbreak/error.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace cbreak;

namespace {

SolverState constant(std::size_t cells, double value)
{
    return SolverState{std::vector<double>(cells, value)};
}

struct Solved
{
    Mesh mesh;
    SolverState state;
};

Solved test_case_one_at_t1(std::size_t cells)
{
    auto mesh = Mesh::make_uniform(1e-3, 10, cells);
    auto const disc = discretize(CollisionKernel::product(1), BreakageDistribution::dirac_comb({0.4, 0.6}, {1, 1}), mesh, 6);
    auto const init = initial_state(mesh, [](double m) { return std::exp(-m); }, 6);
    auto const budget = stability_constant(1, 10, total_number(init, mesh), 2 / (10 - 1e-3), total_mass(init, mesh), 1.0);
    auto result = run(init, disc, mesh, 1.0, std::min(mesh.h_max(), budget.dt_max), budget);
    return {std::move(mesh), std::move(result.state)};
}

}  // namespace

TEST_SUITE("diagnostics")
{
    TEST_CASE("moments of constant states")
    {
        CHECK(moment(constant(1, 1), Mesh::make_uniform(0, 1, 1), 1) == 0.5);
        CHECK(moment(constant(4, 1), Mesh::make_uniform(0, 1, 4), 0) == 1.0);
        CHECK(moment(constant(4, 2), Mesh::make_uniform(0, 2, 4), 2) == doctest::Approx(2 * 0.5 * (0.0625 + 0.5625 + 1.5625 + 3.0625)));
        CHECK_THROWS_AS(moment(constant(4, 1), Mesh::make_uniform(0, 1, 4), -1), InvalidArgument);
    }

    TEST_CASE("first moment of the exponential initial state is second-order accurate")
    {
        double const exact = 0.999500101105821;  // integral of m exp(-m) over [1e-3, 10]
        double previous = 0;
        for (std::size_t cells : {30, 60, 120})
        {
            auto const mesh = Mesh::make_uniform(1e-3, 10, cells);
            auto const state = initial_state(mesh, [](double m) { return std::exp(-m); }, 6);
            double const error = std::abs(moment(state, mesh, 1) - exact);
            CHECK(error <= mesh.h_max() * mesh.h_max());
            if (previous > 0)
                CHECK(previous / error == doctest::Approx(4).epsilon(0.1));
            previous = error;
        }
    }

    TEST_CASE("moment series records in time order")
    {
        auto const mesh = Mesh::make_uniform(0, 1, 4);
        MomentSeries series{{0, 1}, {}, {}};
        series.record(0, constant(4, 1), mesh);
        series.record(0.5, constant(4, 2), mesh);
        CHECK(series.values[1][0] == 2);
        CHECK(series.values[1][1] == 1);
        CHECK_THROWS_AS(series.record(0.5, constant(4, 2), mesh), InvalidArgument);
    }

    TEST_CASE("EOC from tabulated reference errors")
    {
        auto const eoc = eoc_from_errors(std::vector<double>{0.4271e-4, 0.2006e-4, 0.0973e-4});
        REQUIRE(eoc.size() == 2);
        CHECK(eoc[0] == doctest::Approx(1.0902522920299609).epsilon(1e-14));
        CHECK(eoc[1] == doctest::Approx(1.043809895831069).epsilon(1e-14));
        CHECK(std::abs(eoc[0] - 1.0899) <= 5e-4);
    }

    TEST_CASE("EOC from totals with perfect halving")
    {
        auto const eoc = eoc_from_totals(std::vector<double>{4, 2, 1});
        REQUIRE(eoc.size() == 1);
        CHECK(eoc[0] == 1.0);
    }

    TEST_CASE("EOC errors")
    {
        CHECK_THROWS_AS(eoc_from_errors(std::vector<double>{1e-3, 0}), DegenerateConvergence);
        CHECK_THROWS_AS(eoc_from_errors(std::vector<double>{0, 1e-3}), DegenerateConvergence);
        CHECK_THROWS_AS(eoc_from_totals(std::vector<double>{0, 0, 0}), DegenerateConvergence);
        CHECK_THROWS_AS(eoc_from_errors(std::vector<double>{1e-3}), InvalidArgument);
        CHECK_THROWS_AS(eoc_from_totals(std::vector<double>{1, 2}), InvalidArgument);
    }

    TEST_CASE("property: EOC is scale invariant")
    {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(1e-6, 1), scale(1e-8, 1e8);
        for (int trial = 0; trial < 100; ++trial)
        {
            std::vector<double> errors{u(rng), u(rng), u(rng), u(rng)};
            double const s = scale(rng);
            std::vector<double> scaled;
            for (double e : errors)
                scaled.push_back(s * e);
            auto const a = eoc_from_errors(errors);
            auto const b = eoc_from_errors(scaled);
            for (std::size_t k = 0; k < a.size(); ++k)
                CHECK(b[k] == doctest::Approx(a[k]).epsilon(1e-12).scale(1));
        }
    }

    TEST_CASE("convergence report layout")
    {
        auto const report = make_convergence_report({30, 60, 120, 240}, {1.0, 1.5, 1.75, 1.875});
        CHECK(report.errors == std::vector<double>{0.5, 0.25, 0.125});
        CHECK(report.eoc == std::vector<double>{1.0, 1.0});
        CHECK_THROWS_AS(make_convergence_report({30, 50, 100}, {1, 2, 3}), InvalidArgument);
        CHECK_THROWS_AS(make_convergence_report({30, 60}, {1, 2, 3}), InvalidArgument);
    }

    TEST_CASE("nested L1 difference")
    {
        auto const coarse = Mesh::make_uniform(0, 1, 4);
        auto const fine = Mesh::make_uniform(0, 1, 8);
        SolverState const c{{1, 2, 3, 4}};
        SolverState const f{{1, 1, 2, 2, 3, 3, 4, 4}};
        CHECK(nested_l1_difference(c, coarse, f, fine) == 0);
        CHECK(nested_l1_difference(constant(4, 0), coarse, constant(8, 1), fine) == doctest::Approx(1));
        CHECK_THROWS_AS(nested_l1_difference(c, coarse, constant(6, 1), Mesh::make_uniform(0, 1, 6)), InvalidArgument);
        CHECK_THROWS_AS(restrict_to_coarse(constant(8, 1), Mesh::make_uniform(0, 2, 8), coarse), InvalidArgument);

        auto const projected = restrict_to_coarse(SolverState{{0, 2, 4, 4, 1, 3, 0, 0}}, fine, coarse);
        CHECK(projected == std::vector<double>{1, 4, 2, 0});
    }

    TEST_CASE("property: nested L1 difference obeys the triangle inequality over three levels")
    {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(0, 2);
        auto const m0 = Mesh::make_geometric(0, 5, 5, 1.2);
        std::vector<double> e1, e2;
        for (double e : m0.edges())
            e1.push_back(e);
        for (std::size_t k = 0; k + 1 < e1.size(); k += 2)
            e1.insert(e1.begin() + static_cast<long>(k) + 1, 0.5 * (e1[k] + e1[k + 1]));
        auto const m1 = Mesh::from_edges(e1);
        e2 = e1;
        for (std::size_t k = 0; k + 1 < e2.size(); k += 2)
            e2.insert(e2.begin() + static_cast<long>(k) + 1, 0.5 * (e2[k] + e2[k + 1]));
        auto const m2 = Mesh::from_edges(e2);
        REQUIRE(m0.is_halved_by(m1));
        REQUIRE(m1.is_halved_by(m2));

        for (int trial = 0; trial < 50; ++trial)
        {
            SolverState s0, s1, s2;
            for (std::size_t a = 0; a < m0.size(); ++a)
                s0.concentrations.push_back(u(rng));
            for (std::size_t a = 0; a < m1.size(); ++a)
                s1.concentrations.push_back(u(rng));
            for (std::size_t a = 0; a < m2.size(); ++a)
                s2.concentrations.push_back(u(rng));
            SolverState const s2_on_1{restrict_to_coarse(s2, m2, m1)};
            double const d01 = nested_l1_difference(s0, m0, s1, m1);
            double const d12 = nested_l1_difference(s1, m1, s2, m2);
            double const d02 = nested_l1_difference(s0, m0, s2_on_1, m1);
            CHECK(d02 <= d01 + d12 + 1e-12);

            // swapping roles after projection leaves the distance unchanged
            SolverState const s1_on_0{restrict_to_coarse(s1, m1, m0)};
            double swapped = 0;
            for (std::size_t a = 0; a < m0.size(); ++a)
                swapped += std::abs(s1_on_0.concentrations[a] - s0.concentrations[a]) * m0.width(a);
            CHECK(swapped == doctest::Approx(d01).epsilon(1e-14));
        }
    }

    TEST_CASE("self-convergence of Test case 1 in L1")
    {
        auto const s60 = test_case_one_at_t1(60);
        auto const s120 = test_case_one_at_t1(120);
        auto const s240 = test_case_one_at_t1(240);
        double const d1 = nested_l1_difference(s60.state, s60.mesh, s120.state, s120.mesh);
        double const d2 = nested_l1_difference(s120.state, s120.mesh, s240.state, s240.mesh);
        MESSAGE("L1 self-differences 60/120: " << d1 << ", 120/240: " << d2);
        CHECK(d1 > 0);
        CHECK(d2 > 0);
        CHECK(d2 < d1);
    }

    TEST_CASE("first moment matches the solver's mass record exactly")
    {
        auto const mesh = Mesh::make_uniform(1e-3, 10, 20);
        auto const disc = discretize(CollisionKernel::sum(), BreakageDistribution::dirac_comb({0.4, 0.6}, {1, 1}), mesh, 6);
        auto const init = initial_state(mesh, [](double m) { return std::exp(-m); }, 6);
        StabilityBudget const open{0, 0.5, std::numeric_limits<double>::infinity()};
        std::vector<double> masses;
        Observer const obs = [&](double t, std::span<const double> c) {
            masses.push_back(moment(SolverState{{c.begin(), c.end()}, t}, mesh, 1));
        };
        auto const result = run(init, disc, mesh, 0.05, 1e-3, open, std::span(&obs, 1));
        REQUIRE(masses.size() == result.series.size());
        for (std::size_t k = 0; k < masses.size(); ++k)
            CHECK(masses[k] == result.series[k].mass);
    }
}
