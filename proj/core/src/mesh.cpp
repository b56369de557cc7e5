// SPDX-License-Identifier: Apache-2.0
#include "cbreak/mesh.hpp"

#include "cbreak/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cbreak {

namespace {

void check_bounds(double domain_min, double domain_max, std::size_t cells)
{
    if (!std::isfinite(domain_min) || !std::isfinite(domain_max))
        throw InvalidArgument("mesh bounds must be finite");
    if (domain_min < 0)
        throw InvalidArgument("mesh domain_min must be >= 0");
    if (!(domain_min < domain_max))
        throw InvalidArgument("mesh requires domain_min < domain_max");
    if (cells == 0)
        throw InvalidArgument("mesh requires at least one cell");
}

}  // namespace

Mesh::Mesh(std::vector<double> edges) : edges_(std::move(edges))
{
    std::size_t const n = edges_.size() - 1;
    midpoints_.resize(n);
    widths_.resize(n);
    for (std::size_t a = 0; a < n; ++a)
    {
        midpoints_[a] = 0.5 * (edges_[a] + edges_[a + 1]);
        widths_[a] = edges_[a + 1] - edges_[a];
    }
    h_max_ = *std::max_element(widths_.begin(), widths_.end());
    h_min_ = *std::min_element(widths_.begin(), widths_.end());
}

Mesh Mesh::make_uniform(double domain_min, double domain_max, std::size_t cells)
{
    check_bounds(domain_min, domain_max, cells);
    std::vector<double> edges(cells + 1);
    double const length = domain_max - domain_min;
    for (std::size_t i = 0; i <= cells; ++i)
        edges[i] = domain_min + length * (static_cast<double>(i) / static_cast<double>(cells));
    edges.front() = domain_min;
    edges.back() = domain_max;
    return Mesh(std::move(edges));
}

Mesh Mesh::make_geometric(double domain_min, double domain_max, std::size_t cells, double ratio)
{
    if (!std::isfinite(ratio) || ratio <= 0)
        throw InvalidArgument("geometric mesh ratio must be finite and positive");
    check_bounds(domain_min, domain_max, cells);
    if (ratio == 1.0)
        return make_uniform(domain_min, domain_max, cells);

    // First width w0 = L (r - 1) / (r^I - 1), written with expm1 so ratios
    // close to one do not cancel.
    double const log_r = std::log(ratio);
    double const length = domain_max - domain_min;
    double const first = length * std::expm1(log_r) / std::expm1(static_cast<double>(cells) * log_r);

    std::vector<double> edges(cells + 1);
    edges[0] = domain_min;
    double width = first;
    for (std::size_t i = 1; i <= cells; ++i)
    {
        edges[i] = edges[i - 1] + width;
        width *= ratio;
    }
    edges.back() = domain_max;
    for (std::size_t i = 1; i <= cells; ++i)
    {
        if (!(edges[i] > edges[i - 1]))
            throw InvalidArgument("geometric ratio too extreme for " + std::to_string(cells)
                                  + " cells: widths underflow");
    }
    return Mesh(std::move(edges));
}

Mesh Mesh::from_edges(std::vector<double> edges)
{
    if (edges.size() < 2)
        throw InvalidArgument("mesh needs at least two edges");
    for (double e : edges)
    {
        if (!std::isfinite(e))
            throw InvalidArgument("mesh edges must be finite");
    }
    if (edges.front() < 0)
        throw InvalidArgument("mesh domain_min must be >= 0");
    for (std::size_t i = 1; i < edges.size(); ++i)
    {
        if (!(edges[i] > edges[i - 1]))
            throw InvalidArgument("mesh edges must be strictly increasing");
    }
    return Mesh(std::move(edges));
}

bool Mesh::is_uniform(double tol) const noexcept
{
    return std::all_of(widths_.begin(), widths_.end(),
                       [&](double w) { return std::abs(w - h_max_) <= tol * h_max_; });
}

std::size_t Mesh::locate_cell(double m) const
{
    if (!(m > edges_.front() && m <= edges_.back()))
        throw OutOfDomain("volume " + std::to_string(m) + " outside ]" + std::to_string(edges_.front())
                          + ", " + std::to_string(edges_.back()) + "]");
    // first edge >= m closes the cell
    auto it = std::lower_bound(edges_.begin() + 1, edges_.end(), m);
    return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

bool Mesh::is_halved_by(Mesh const& fine, double tol) const noexcept
{
    if (fine.size() != 2 * size())
        return false;
    double const scale = std::max(std::abs(domain_max()), h_max_);
    for (std::size_t a = 0; a <= size(); ++a)
    {
        if (std::abs(fine.edges_[2 * a] - edges_[a]) > tol * scale)
            return false;
    }
    for (std::size_t a = 0; a < size(); ++a)
    {
        if (std::abs(fine.edges_[2 * a + 1] - midpoints_[a]) > tol * scale)
            return false;
    }
    return true;
}

}  // namespace cbreak
