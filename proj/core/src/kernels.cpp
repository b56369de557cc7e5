// SPDX-License-Identifier: Apache-2.0
#include "cbreak/kernels.hpp"

#include "cbreak/error.hpp"
#include "cbreak/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace cbreak {

namespace {

template<class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double eval_h2(PiecewiseH2Kernel const& k, double m, double n)
{
    bool const m_small = m < 1;
    bool const n_small = n < 1;
    if (m_small && n_small)
        return k.lambda * (m * n);
    if (m_small)
        return k.lambda * (m * std::pow(n, -k.alpha));
    if (n_small)
        return k.lambda * (n * std::pow(m, -k.alpha));
    return k.lambda * (std::pow(m, k.zeta) * std::pow(n, k.eta) + std::pow(m, k.eta) * std::pow(n, k.zeta));
}

//! [lo, hi] cut at every breakpoint strictly inside.
std::vector<double> split_points(double lo, double hi, std::vector<double> const& breaks)
{
    std::vector<double> pts{lo};
    for (double b : breaks)
    {
        if (b > lo && b < hi)
            pts.push_back(b);
    }
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    return pts;
}

void require_positive(double m, double n)
{
    if (!(m > 0) || !(n > 0))
        throw InvalidArgument("collision kernel arguments must be positive (got " + std::to_string(m)
                              + ", " + std::to_string(n) + ")");
}

}  // namespace

//---------------------------------------------------------------------------//
// CollisionKernel
//---------------------------------------------------------------------------//

CollisionKernel CollisionKernel::product(double lambda)
{
    if (!std::isfinite(lambda) || lambda <= 0)
        throw InvalidArgument("product kernel lambda must be finite and positive");
    return CollisionKernel(ProductKernel{lambda});
}

CollisionKernel CollisionKernel::sum()
{
    return CollisionKernel(SumKernel{});
}

CollisionKernel CollisionKernel::piecewise_h2(double lambda, double alpha, double zeta, double eta)
{
    if (!std::isfinite(lambda) || !std::isfinite(alpha) || !std::isfinite(zeta) || !std::isfinite(eta))
        throw InvalidArgument("piecewise_h2 parameters must be finite");
    if (lambda <= 0)
        throw InvalidArgument("piecewise_h2 requires lambda > 0");
    if (alpha < 0)
        throw InvalidArgument("piecewise_h2 requires alpha >= 0");
    if (!(zeta > 0 && zeta <= eta && eta <= 1))
        throw InvalidArgument("piecewise_h2 requires 0 < zeta <= eta <= 1");
    if (zeta + eta > 1)
        throw InvalidArgument("piecewise_h2 requires zeta + eta <= 1");
    return CollisionKernel(PiecewiseH2Kernel{lambda, alpha, zeta, eta});
}

CollisionKernel CollisionKernel::custom(CustomCollisionKernel kernel)
{
    if (!kernel.fn)
        throw InvalidArgument("custom collision kernel needs a function");
    return CollisionKernel(std::move(kernel));
}

double CollisionKernel::operator()(double m, double n) const
{
    require_positive(m, n);
    return std::visit(overloaded{
                          [&](ProductKernel const& k) { return k.lambda * (m * n); },
                          [&](SumKernel const&) { return m + n; },
                          [&](PiecewiseH2Kernel const& k) { return eval_h2(k, m, n); },
                          [&](CustomCollisionKernel const& k) { return k.fn(m, n); },
                      },
                      kernel_);
}

bool CollisionKernel::has_closed_form_average() const noexcept
{
    return std::holds_alternative<ProductKernel>(kernel_) || std::holds_alternative<SumKernel>(kernel_);
}

std::optional<double> CollisionKernel::growth_constant() const noexcept
{
    return std::visit(overloaded{
                          [](ProductKernel const& k) -> std::optional<double> { return k.lambda; },
                          [](SumKernel const&) -> std::optional<double> { return 1.0; },
                          [](PiecewiseH2Kernel const& k) -> std::optional<double> { return k.lambda; },
                          [](CustomCollisionKernel const& k) { return k.growth_constant; },
                      },
                      kernel_);
}

std::vector<double> CollisionKernel::breakpoints() const
{
    if (std::holds_alternative<PiecewiseH2Kernel>(kernel_))
        return {1.0};
    if (auto const* k = std::get_if<CustomCollisionKernel>(&kernel_))
        return k->breakpoints;
    return {};
}

std::string_view CollisionKernel::name() const noexcept
{
    return std::visit(overloaded{
                          [](ProductKernel const&) { return std::string_view("product"); },
                          [](SumKernel const&) { return std::string_view("sum"); },
                          [](PiecewiseH2Kernel const&) { return std::string_view("piecewise_h2"); },
                          [](CustomCollisionKernel const&) { return std::string_view("custom"); },
                      },
                      kernel_);
}

double CollisionKernel::cell_average(double m_lo, double m_hi, double n_lo, double n_hi,
                                     std::size_t quadrature_order) const
{
    if (!(m_lo < m_hi) || !(n_lo < n_hi))
        throw InvalidArgument("cell_average needs non-empty intervals");
    if (auto const* k = std::get_if<ProductKernel>(&kernel_))
        return k->lambda * 0.5 * (m_lo + m_hi) * 0.5 * (n_lo + n_hi);
    if (std::holds_alternative<SumKernel>(kernel_))
        return 0.5 * (m_lo + m_hi) + 0.5 * (n_lo + n_hi);

    auto const breaks = breakpoints();
    auto const m_pts = split_points(m_lo, m_hi, breaks);
    auto const n_pts = split_points(n_lo, n_hi, breaks);
    auto const& rule = gauss_legendre(quadrature_order);

    double total = 0;
    for (std::size_t p = 0; p + 1 < m_pts.size(); ++p)
    {
        double const mh = 0.5 * (m_pts[p + 1] - m_pts[p]);
        double const mc = 0.5 * (m_pts[p + 1] + m_pts[p]);
        for (std::size_t q = 0; q + 1 < n_pts.size(); ++q)
        {
            double const nh = 0.5 * (n_pts[q + 1] - n_pts[q]);
            double const nc = 0.5 * (n_pts[q + 1] + n_pts[q]);
            double sub = 0;
            for (std::size_t i = 0; i < rule.order(); ++i)
            {
                double const m = mc + mh * rule.nodes[i];
                for (std::size_t k = 0; k < rule.order(); ++k)
                    sub += rule.weights[i] * rule.weights[k] * (*this)(m, nc + nh * rule.nodes[k]);
            }
            total += sub * mh * nh;
        }
    }
    return total / ((m_hi - m_lo) * (n_hi - n_lo));
}

double eval_collision(CollisionKernel const& kernel, double m, double n)
{
    return kernel(m, n);
}

//---------------------------------------------------------------------------//
// BreakageDistribution
//---------------------------------------------------------------------------//

BreakageDistribution BreakageDistribution::dirac_comb(std::vector<double> fractions,
                                                      std::vector<double> weights)
{
    if (fractions.empty())
        throw InvalidArgument("dirac_comb needs at least one fragment site");
    if (fractions.size() != weights.size())
        throw InvalidArgument("dirac_comb fractions and weights differ in length");
    double mass = 0;
    for (std::size_t i = 0; i < fractions.size(); ++i)
    {
        if (!std::isfinite(fractions[i]) || !(fractions[i] > 0 && fractions[i] <= 1))
            throw InvalidArgument("dirac_comb fractions must lie in ]0, 1]");
        if (!std::isfinite(weights[i]) || !(weights[i] > 0))
            throw InvalidArgument("dirac_comb weights must be positive");
        mass += weights[i] * fractions[i];
    }
    if (std::abs(mass - 1) > 1e-12)
        throw InvalidArgument("dirac_comb violates the mass identity: sum w_i f_i = "
                              + std::to_string(mass) + " != 1");
    return BreakageDistribution(DiracComb{std::move(fractions), std::move(weights)});
}

BreakageDistribution BreakageDistribution::conditional_uniform()
{
    return BreakageDistribution(ConditionalUniform{});
}

BreakageDistribution BreakageDistribution::custom(CustomBreakage breakage)
{
    if (!breakage.density || !breakage.interval_integral)
        throw InvalidArgument("custom breakage needs a density and its interval integral");
    if (!(breakage.max_fragments > 0))
        throw InvalidArgument("custom breakage max_fragments must be positive");
    return BreakageDistribution(std::move(breakage));
}

double BreakageDistribution::interval_integral(double lower, double upper, double n, double z) const
{
    if (lower > upper)
        throw InvalidArgument("breakage interval has lower > upper");
    if (!(n > 0) || !(z > 0))
        throw InvalidArgument("breakage parent and partner volumes must be positive");

    return std::visit(
        overloaded{
            [&](DiracComb const& d) {
                double count = 0;
                for (std::size_t i = 0; i < d.fractions.size(); ++i)
                {
                    double const site = d.fractions[i] * n;
                    if (site > lower && site <= upper)
                        count += d.weights[i];
                }
                return count;
            },
            [&](ConditionalUniform const&) {
                if (n > z)
                {
                    double const hi = std::clamp(upper, 0.0, n);
                    double const lo = std::clamp(lower, 0.0, n);
                    return 2 * (hi - lo) / n;
                }
                return (n > lower && n <= upper) ? 1.0 : 0.0;
            },
            [&](CustomBreakage const& d) { return d.interval_integral(lower, upper, n, z); },
        },
        dist_);
}

double BreakageDistribution::mass_check(double n, double z) const
{
    return std::visit(overloaded{
                          [&](DiracComb const& d) {
                              double mass = 0;
                              for (std::size_t i = 0; i < d.fractions.size(); ++i)
                                  mass += d.weights[i] * d.fractions[i] * n;
                              return mass;
                          },
                          [&](ConditionalUniform const&) {
                              // integral of m 2/n over ]0, n] = n; the delta branch sifts to n
                              return n > z ? (2 / n) * (n * n / 2) : n;
                          },
                          [&](CustomBreakage const& d) {
                              return integrate([&](double m) { return m * d.density(m, n, z); }, 0.0, n, 64);
                          },
                      },
                      dist_);
}

double BreakageDistribution::max_fragments() const noexcept
{
    return std::visit(overloaded{
                          [](DiracComb const& d) { return std::accumulate(d.weights.begin(), d.weights.end(), 0.0); },
                          [](ConditionalUniform const&) { return 2.0; },
                          [](CustomBreakage const& d) { return d.max_fragments; },
                      },
                      dist_);
}

double BreakageDistribution::stability_density_bound(Mesh const& mesh) const
{
    return max_fragments() / (mesh.domain_max() - mesh.domain_min());
}

int BreakageDistribution::partner_class(double n, double z) const noexcept
{
    return std::visit(overloaded{
                          [](DiracComb const&) { return 0; },
                          [&](ConditionalUniform const&) { return n > z ? 0 : 1; },
                          [](CustomBreakage const&) { return -1; },
                      },
                      dist_);
}

std::string_view BreakageDistribution::name() const noexcept
{
    return std::visit(overloaded{
                          [](DiracComb const&) { return std::string_view("dirac_comb"); },
                          [](ConditionalUniform const&) { return std::string_view("conditional_uniform"); },
                          [](CustomBreakage const&) { return std::string_view("custom"); },
                      },
                      dist_);
}

double breakage_interval_integral(BreakageDistribution const& dist, double lower, double upper,
                                  double n, double z)
{
    return dist.interval_integral(lower, upper, n, z);
}

double breakage_mass_check(BreakageDistribution const& dist, double n, double z)
{
    return dist.mass_check(n, z);
}

//---------------------------------------------------------------------------//
// DiscreteKernels
//---------------------------------------------------------------------------//

double DiscreteKernels::birth_weight(std::size_t a, std::size_t j, std::size_t l) const
{
    for (auto const& entry : birth_entries(j, l))
    {
        if (entry.cell == a)
            return entry.weight;
    }
    return 0;
}

DiscreteKernels discretize(CollisionKernel const& kernel, BreakageDistribution const& dist,
                           Mesh const& mesh, std::size_t quadrature_order)
{
    if (quadrature_order == 0)
        throw InvalidArgument("quadrature order must be >= 1");
    std::size_t const cells = mesh.size();
    auto const edges = mesh.edges();
    auto const mid = mesh.midpoints();

    DiscreteKernels disc;
    disc.cells_ = cells;
    disc.collision_.assign(cells * cells, 0.0);

    bool const symmetric = !std::holds_alternative<CustomCollisionKernel>(kernel.variant());
    for (std::size_t a = 0; a < cells; ++a)
    {
        for (std::size_t j = symmetric ? a : 0; j < cells; ++j)
        {
            double const k = kernel.cell_average(edges[a], edges[a + 1], edges[j], edges[j + 1],
                                                 quadrature_order);
            disc.collision_[a * cells + j] = k;
            if (symmetric)
                disc.collision_[j * cells + a] = k;
        }
    }

    disc.list_index_.assign(cells * cells, 0);
    disc.groups_.resize(cells);
    for (std::size_t j = 0; j < cells; ++j)
    {
        std::map<int, std::uint32_t> by_class;
        for (std::size_t l = 0; l < cells; ++l)
        {
            int const cls = dist.partner_class(mid[j], mid[l]);
            std::uint32_t id = 0;
            auto found = cls >= 0 ? by_class.find(cls) : by_class.end();
            if (found != by_class.end())
            {
                id = found->second;
            }
            else
            {
                std::vector<BirthEntry> list;
                for (std::size_t a = 0; a <= j; ++a)
                {
                    double const upper = (a == j) ? mid[a] : edges[a + 1];
                    double const w = dist.interval_integral(edges[a], upper, mid[j], mid[l]);
                    if (w != 0)
                        list.push_back({static_cast<std::uint32_t>(a), w});
                }
                id = static_cast<std::uint32_t>(disc.birth_lists_.size());
                disc.birth_lists_.push_back(std::move(list));
                if (cls >= 0)
                    by_class.emplace(cls, id);
            }
            disc.list_index_[j * cells + l] = id;

            auto& groups = disc.groups_[j];
            auto g = std::find_if(groups.begin(), groups.end(),
                                  [&](BirthGroup const& grp) { return grp.list == id; });
            if (g == groups.end())
                groups.push_back({id, {static_cast<std::uint32_t>(l)}});
            else
                g->partners.push_back(static_cast<std::uint32_t>(l));
        }
    }
    return disc;
}

double fragment_volume(DiscreteKernels const& disc, Mesh const& mesh, std::size_t j, std::size_t l)
{
    double volume = 0;
    for (auto const& entry : disc.birth_entries(j, l))
        volume += mesh.midpoint(entry.cell) * entry.weight;
    return volume;
}

}  // namespace cbreak
