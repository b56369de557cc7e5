// SPDX-License-Identifier: Apache-2.0
#include "cbreak/quadrature.hpp"

#include "cbreak/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace cbreak {

namespace {

GaussLegendreRule build_rule(std::size_t order)
{
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    auto const n = static_cast<double>(order);

    // Roots are symmetric; solve for the upper half only.
    for (std::size_t i = 0; i < (order + 1) / 2; ++i)
    {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1;
            double p1 = x;
            for (std::size_t k = 2; k <= order; ++k)
            {
                auto const kk = static_cast<double>(k);
                double const p2 = ((2 * kk - 1) * x * p1 - (kk - 1) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            double const pn = order == 1 ? x : p1;
            double const pm = order == 1 ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1);
            double const dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // recompute derivative at the converged root
        double p0 = 1;
        double p1 = x;
        for (std::size_t k = 2; k <= order; ++k)
        {
            auto const kk = static_cast<double>(k);
            double const p2 = ((2 * kk - 1) * x * p1 - (kk - 1) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        double const pn = order == 1 ? x : p1;
        double const pm = order == 1 ? 1.0 : p0;
        dp = n * (x * pn - pm) / (x * x - 1);
        double const w = 2 / ((1 - x * x) * dp * dp);

        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1)
        rule.nodes[order / 2] = 0;
    return rule;
}

}  // namespace

GaussLegendreRule const& gauss_legendre(std::size_t order)
{
    if (order == 0)
        throw InvalidArgument("quadrature order must be >= 1");
    static std::mutex mutex;
    static std::map<std::size_t, GaussLegendreRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

}  // namespace cbreak
