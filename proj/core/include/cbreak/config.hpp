// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbreak/kernels.hpp"
#include "cbreak/mesh.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cbreak {

enum class MeshKind
{
    uniform,
    geometric
};

struct MeshSpec
{
    MeshKind kind = MeshKind::uniform;
    std::size_t cells = 30;
    double ratio = 1;

    bool operator==(MeshSpec const&) const = default;
};

enum class KernelType
{
    product,
    sum,
    piecewise_h2
};

struct KernelSpec
{
    KernelType type = KernelType::product;
    double lambda = 1;
    double alpha = 0;
    double zeta = 0.5;
    double eta = 0.5;

    bool operator==(KernelSpec const&) const = default;
};

enum class BreakageType
{
    dirac_comb,
    conditional_uniform
};

struct BreakageSpec
{
    BreakageType type = BreakageType::dirac_comb;
    //! dirac_comb only; empty otherwise
    std::vector<double> fractions;
    std::vector<double> weights;

    bool operator==(BreakageSpec const&) const = default;
};

enum class InitialType
{
    exp_decay,
    tabulated
};

//! exp_decay is C(m) = exp(-m); tabulated interpolates linearly and holds end values outside the table.
struct InitialSpec
{
    InitialType type = InitialType::exp_decay;
    std::vector<double> volumes;
    std::vector<double> values;

    bool operator==(InitialSpec const&) const = default;
};

enum class DtPolicy
{
    fixed,
    automatic
};

//! automatic: dt = min(c h_max, theta / S); fixed: dt = value, checked against theta / S.
struct DtSpec
{
    DtPolicy policy = DtPolicy::automatic;
    double value = 0;
    double theta = 0.5;
    double c = 1;

    bool operator==(DtSpec const&) const = default;
};

//! Overrides for the stability constant inputs.
struct StabilitySpec
{
    std::optional<double> lambda;
    std::optional<double> density_bound;

    bool operator==(StabilitySpec const&) const = default;
};

enum class OutputFormat
{
    csv,
    json
};

struct OutputSpec
{
    std::string path;
    OutputFormat format = OutputFormat::csv;

    bool operator==(OutputSpec const&) const = default;
};

struct RunConfig
{
    double domain_min = 1e-3;
    double domain_max = 10;
    MeshSpec mesh;
    KernelSpec kernel;
    BreakageSpec breakage;
    InitialSpec initial;
    double t_final = 1;
    DtSpec dt;
    StabilitySpec stability;
    std::size_t quadrature_order = 6;
    //! observer tick every `cadence` steps (the final state is always recorded)
    std::size_t cadence = 1;
    OutputSpec output;

    bool operator==(RunConfig const&) const = default;
};

struct StudyConfig
{
    RunConfig base;
    //! cell counts, each double the previous
    std::vector<std::size_t> levels;

    bool operator==(StudyConfig const&) const = default;
};

using Config = std::variant<RunConfig, StudyConfig>;

/*!
 * Parse and validate a JSON configuration document.
 *
 * Unknown keys are rejected, and so are parameters that do not apply to the
 * selected kernel, breakage, initial condition, mesh kind or dt policy. A
 * document with a "study" table yields a StudyConfig. Errors are ConfigError
 * carrying the field path.
 */
Config parse_config(std::string_view text);
Config load_config(std::filesystem::path const& path);

//! Inverse of parse_config: parse_config(serialize_config(c)) == c.
std::string serialize_config(Config const& config);

//! Also requires parameters that do not apply to the selected variants to hold their defaults.
void validate(RunConfig const& config);
void validate(StudyConfig const& config);

CollisionKernel make_kernel(KernelSpec const& spec);
BreakageDistribution make_breakage(BreakageSpec const& spec);
Mesh make_mesh(RunConfig const& config, std::size_t cells);
std::function<double(double)> make_initial(InitialSpec const& spec);

std::string_view to_string(KernelType type) noexcept;
std::string_view to_string(BreakageType type) noexcept;

}  // namespace cbreak
