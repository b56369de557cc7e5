// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cbreak {

/*!
 * Finite-volume partition of a truncated volume domain.
 *
 * Cell `a` is the half-open interval ]edges[a], edges[a+1]]: a volume that
 * sits exactly on an interior edge belongs to the lower cell. The last edge
 * is the truncation bound R.
 *
 * Immutable after construction.
 */
class Mesh
{
  public:
    static Mesh make_uniform(double domain_min, double domain_max, std::size_t cells);

    //! Widths grow by `ratio` from one cell to the next; ratio == 1 is uniform.
    static Mesh make_geometric(double domain_min, double domain_max, std::size_t cells,
                               double ratio);

    //! Build from explicit edges (strictly increasing, first >= 0).
    static Mesh from_edges(std::vector<double> edges);

    std::size_t size() const noexcept { return widths_.size(); }

    std::span<const double> edges() const noexcept { return edges_; }
    std::span<const double> midpoints() const noexcept { return midpoints_; }
    std::span<const double> widths() const noexcept { return widths_; }

    double left_edge(std::size_t a) const { return edges_[a]; }
    double right_edge(std::size_t a) const { return edges_[a + 1]; }
    double midpoint(std::size_t a) const { return midpoints_[a]; }
    double width(std::size_t a) const { return widths_[a]; }

    double domain_min() const noexcept { return edges_.front(); }
    double domain_max() const noexcept { return edges_.back(); }
    double h_max() const noexcept { return h_max_; }
    double h_min() const noexcept { return h_min_; }

    //! True when every width equals h_max to relative `tol`.
    bool is_uniform(double tol = 1e-12) const noexcept;

    //! Index of the cell with m in ]edges[a], edges[a+1]]; throws OutOfDomain.
    std::size_t locate_cell(double m) const;

    //! True when `fine` splits every cell of this mesh into two equal halves.
    bool is_halved_by(Mesh const& fine, double tol = 1e-12) const noexcept;

    bool operator==(Mesh const&) const = default;

  private:
    explicit Mesh(std::vector<double> edges);

    std::vector<double> edges_;
    std::vector<double> midpoints_;
    std::vector<double> widths_;
    double h_max_ = 0;
    double h_min_ = 0;
};

}  // namespace cbreak
