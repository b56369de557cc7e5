// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace cbreak {

//! Gauss–Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule
{
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t order() const noexcept { return nodes.size(); }
};

/*!
 * Rule with `order` points, exact for polynomials of degree 2*order - 1.
 *
 * Nodes come from Newton iteration on the three-term Legendre recurrence.
 * Rules are cached; the returned reference stays valid for the program
 * lifetime.
 */
GaussLegendreRule const& gauss_legendre(std::size_t order);

//! Integrate f over [lo, hi] with an `order`-point rule.
template<class F>
double integrate(F&& f, double lo, double hi, std::size_t order)
{
    auto const& rule = gauss_legendre(order);
    double const half = 0.5 * (hi - lo);
    double const mid = 0.5 * (hi + lo);
    double sum = 0;
    for (std::size_t q = 0; q < rule.order(); ++q)
        sum += rule.weights[q] * f(mid + half * rule.nodes[q]);
    return half * sum;
}

}  // namespace cbreak
