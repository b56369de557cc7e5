// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbreak/mesh.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace cbreak {

//---------------------------------------------------------------------------//
// Collision kernels K(m, n)
//---------------------------------------------------------------------------//

//! K = lambda m n
struct ProductKernel
{
    double lambda = 1;
};

//! K = m + n
struct SumKernel
{
};

/*!
 * Four-branch kernel selected by which side of unit volume each argument is on:
 *
 *   m < 1, n < 1   : lambda m n
 *   m < 1, n >= 1  : lambda m n^-alpha
 *   m >= 1, n < 1  : lambda m^-alpha n
 *   m >= 1, n >= 1 : lambda (m^zeta n^eta + m^eta n^zeta)
 *
 * Requires 0 < zeta <= eta <= 1, zeta + eta <= 1, alpha >= 0, lambda > 0.
 * Exactly-unit arguments take the large-volume branch.
 */
struct PiecewiseH2Kernel
{
    double lambda = 1;
    double alpha = 0;
    double zeta = 0.5;
    double eta = 0.5;
};

//! User-supplied pointwise kernel.
struct CustomCollisionKernel
{
    std::function<double(double, double)> fn;
    //! Volumes where fn is discontinuous; cell averages split there.
    std::vector<double> breakpoints;
    //! Constant lambda with K(m, n) <= lambda (m + n), if known.
    std::optional<double> growth_constant;
};

class CollisionKernel
{
  public:
    using Variant = std::variant<ProductKernel, SumKernel, PiecewiseH2Kernel, CustomCollisionKernel>;

    static CollisionKernel product(double lambda = 1);
    static CollisionKernel sum();
    static CollisionKernel piecewise_h2(double lambda, double alpha, double zeta, double eta);
    static CollisionKernel custom(CustomCollisionKernel kernel);

    //! Pointwise value; both arguments must be positive.
    double operator()(double m, double n) const;

    /*!
     * Mean of K over the rectangle [m_lo, m_hi] x [n_lo, n_hi].
     *
     * Product and sum kernels use their closed-form averages; other kernels
     * use a tensor Gauss–Legendre rule of the given order on each
     * sub-rectangle between breakpoints.
     */
    double cell_average(double m_lo, double m_hi, double n_lo, double n_hi,
                        std::size_t quadrature_order) const;

    bool has_closed_form_average() const noexcept;

    //! Lambda used by the stability constant (nullopt for custom kernels without one).
    std::optional<double> growth_constant() const noexcept;

    //! Arguments where the kernel switches branch.
    std::vector<double> breakpoints() const;

    std::string_view name() const noexcept;
    Variant const& variant() const noexcept { return kernel_; }

  private:
    explicit CollisionKernel(Variant kernel) : kernel_(std::move(kernel)) {}

    Variant kernel_;
};

double eval_collision(CollisionKernel const& kernel, double m, double n);

//---------------------------------------------------------------------------//
// Breakage distributions B(m, n, z)
//---------------------------------------------------------------------------//

//! B = sum_i w_i delta(m - f_i n), with sum_i w_i f_i = 1 and 0 < f_i <= 1.
struct DiracComb
{
    std::vector<double> fractions;
    std::vector<double> weights;
};

//! B = 2/n for n > z (uniform binary split); B = delta(m - n) for n <= z.
struct ConditionalUniform
{
};

//! User-supplied distribution: density plus its exact interval integral.
struct CustomBreakage
{
    std::function<double(double m, double n, double z)> density;
    std::function<double(double lower, double upper, double n, double z)> interval_integral;
    //! Largest number of fragments a single event can produce.
    double max_fragments = 2;
};

class BreakageDistribution
{
  public:
    using Variant = std::variant<DiracComb, ConditionalUniform, CustomBreakage>;

    //! Validates sizes, 0 < f_i <= 1, w_i > 0 and the mass identity sum w_i f_i = 1.
    static BreakageDistribution dirac_comb(std::vector<double> fractions, std::vector<double> weights);
    static BreakageDistribution conditional_uniform();
    static BreakageDistribution custom(CustomBreakage breakage);

    /*!
     * Integral of B(m, n, z) over m in ]lower, upper].
     *
     * Dirac sites f_i n count when lower < f_i n <= upper, the same
     * convention as mesh cells.
     */
    double interval_integral(double lower, double upper, double n, double z) const;

    //! Integral of m B(m, n, z) over ]0, n]; equals n for a valid distribution.
    double mass_check(double n, double z) const;

    //! Upper bound on the fragments produced by one breakage event.
    double max_fragments() const noexcept;

    /*!
     * Density bound used in place of the sup norm of B when budgeting the
     * time step: the largest fragment count spread over the meshed domain,
     * max_fragments / (R - domain_min).
     */
    double stability_density_bound(Mesh const& mesh) const;

    /*!
     * Key grouping partners z that give the same B(., n, z) for a parent n.
     * -1 means the distribution cannot tell and every partner is distinct.
     */
    int partner_class(double n, double z) const noexcept;

    std::string_view name() const noexcept;
    Variant const& variant() const noexcept { return dist_; }

  private:
    explicit BreakageDistribution(Variant dist) : dist_(std::move(dist)) {}

    Variant dist_;
};

double breakage_interval_integral(BreakageDistribution const& dist, double lower, double upper,
                                  double n, double z);
double breakage_mass_check(BreakageDistribution const& dist, double n, double z);

//---------------------------------------------------------------------------//
// Cell-averaged kernels
//---------------------------------------------------------------------------//

struct BirthEntry
{
    std::uint32_t cell;
    double weight;
};

//! Partners l of parent cell j that share one birth list.
struct BirthGroup
{
    std::uint32_t list;
    std::vector<std::uint32_t> partners;
};

/*!
 * Precomputed K_{a,j} and birth window integrals for one mesh.
 *
 * The birth weight for target cell a, parent j and partner l is the
 * integral of B(m, m_j, m_l) over ]m_{a-1/2}, p], with p = m_a when a == j
 * and p = m_{a+1/2} otherwise. Only cells a <= j can receive fragments.
 * Weights are stored as sparse (cell, weight) lists shared between partners
 * that produce identical lists.
 */
class DiscreteKernels
{
  public:
    std::size_t size() const noexcept { return cells_; }

    double collision(std::size_t a, std::size_t j) const { return collision_[a * cells_ + j]; }
    std::span<const double> collision_row(std::size_t a) const
    {
        return {collision_.data() + a * cells_, cells_};
    }

    std::span<const BirthEntry> birth_entries(std::size_t j, std::size_t l) const
    {
        return birth_lists_[list_index_[j * cells_ + l]];
    }
    std::span<const BirthGroup> birth_groups(std::size_t j) const { return groups_[j]; }
    std::span<const BirthEntry> birth_list(std::uint32_t id) const { return birth_lists_[id]; }

    //! Dense accessor; zero when a receives nothing from (j, l).
    double birth_weight(std::size_t a, std::size_t j, std::size_t l) const;

    std::size_t birth_list_count() const noexcept { return birth_lists_.size(); }

  private:
    friend DiscreteKernels discretize(CollisionKernel const&, BreakageDistribution const&,
                                      Mesh const&, std::size_t);

    std::size_t cells_ = 0;
    std::vector<double> collision_;
    std::vector<std::vector<BirthEntry>> birth_lists_;
    std::vector<std::uint32_t> list_index_;
    std::vector<std::vector<BirthGroup>> groups_;
};

DiscreteKernels discretize(CollisionKernel const& kernel, BreakageDistribution const& dist,
                           Mesh const& mesh, std::size_t quadrature_order);

//! Sum over target cells of m_a times the birth weight: volume the scheme assigns to (j, l) fragments.
double fragment_volume(DiscreteKernels const& disc, Mesh const& mesh, std::size_t j, std::size_t l);

}  // namespace cbreak
