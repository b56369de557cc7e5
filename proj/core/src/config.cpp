// SPDX-License-Identifier: Apache-2.0
#include "cbreak/config.hpp"

#include "cbreak/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cbreak {

using json = nlohmann::json;

namespace {

//! Strict reader for one JSON object: tracks consumed keys and rejects leftovers.
class Table
{
  public:
    Table(json const& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected a table");
    }

    std::string child_path(std::string_view key) const
    {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    bool has(std::string_view key) const { return node_.contains(std::string(key)); }

    json const& raw(std::string_view key)
    {
        auto it = node_.find(std::string(key));
        if (it == node_.end())
            throw ConfigError(child_path(key), "missing required field");
        seen_.insert(std::string(key));
        return *it;
    }

    Table table(std::string_view key) { return Table(raw(key), child_path(key)); }

    double number(std::string_view key)
    {
        auto const& v = raw(key);
        if (!v.is_number())
            throw ConfigError(child_path(key), "expected a number");
        double const d = v.get<double>();
        if (!std::isfinite(d))
            throw ConfigError(child_path(key), "must be finite");
        return d;
    }

    double number_or(std::string_view key, double fallback) { return has(key) ? number(key) : fallback; }

    std::size_t count(std::string_view key)
    {
        auto const& v = raw(key);
        if (!v.is_number_unsigned())
            throw ConfigError(child_path(key), "expected a non-negative integer");
        return v.get<std::size_t>();
    }

    std::string string(std::string_view key)
    {
        auto const& v = raw(key);
        if (!v.is_string())
            throw ConfigError(child_path(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(std::string_view key)
    {
        auto const& v = raw(key);
        if (!v.is_array())
            throw ConfigError(child_path(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            if (!v[i].is_number())
                throw ConfigError(child_path(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::vector<std::size_t> counts(std::string_view key)
    {
        auto const& v = raw(key);
        if (!v.is_array())
            throw ConfigError(child_path(key), "expected an array of integers");
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            if (!v[i].is_number_unsigned())
                throw ConfigError(child_path(key) + "[" + std::to_string(i) + "]",
                                  "expected a non-negative integer");
            out.push_back(v[i].get<std::size_t>());
        }
        return out;
    }

    void finish() const
    {
        for (auto const& [key, value] : node_.items())
        {
            if (!seen_.count(key))
                throw ConfigError(child_path(key), "unknown field");
        }
    }

  private:
    json const& node_;
    std::string path_;
    std::set<std::string> seen_;
};

template<class Enum, std::size_t N>
Enum parse_enum(std::string const& value, std::pair<std::string_view, Enum> const (&choices)[N],
                std::string const& path)
{
    for (auto const& [name, e] : choices)
    {
        if (value == name)
            return e;
    }
    std::string expected;
    for (auto const& [name, e] : choices)
        expected += (expected.empty() ? "" : " | ") + std::string(name);
    throw ConfigError(path, "unknown value \"" + value + "\" (expected " + expected + ")");
}

constexpr std::pair<std::string_view, MeshKind> mesh_kinds[] = {{"uniform", MeshKind::uniform},
                                                                 {"geometric", MeshKind::geometric}};
constexpr std::pair<std::string_view, KernelType> kernel_types[] = {
    {"product", KernelType::product}, {"sum", KernelType::sum}, {"piecewise_h2", KernelType::piecewise_h2}};
constexpr std::pair<std::string_view, BreakageType> breakage_types[] = {
    {"dirac_comb", BreakageType::dirac_comb}, {"conditional_uniform", BreakageType::conditional_uniform}};
constexpr std::pair<std::string_view, InitialType> initial_types[] = {{"exp_decay", InitialType::exp_decay},
                                                                       {"tabulated", InitialType::tabulated}};
constexpr std::pair<std::string_view, DtPolicy> dt_policies[] = {{"fixed", DtPolicy::fixed},
                                                                  {"auto", DtPolicy::automatic}};
constexpr std::pair<std::string_view, OutputFormat> output_formats[] = {{"csv", OutputFormat::csv},
                                                                         {"json", OutputFormat::json}};

template<class Enum, std::size_t N>
std::string_view enum_name(Enum e, std::pair<std::string_view, Enum> const (&choices)[N])
{
    for (auto const& [name, value] : choices)
    {
        if (value == e)
            return name;
    }
    return "?";
}

RunConfig parse_run(Table& root, bool cells_required)
{
    RunConfig cfg;

    auto domain = root.table("domain");
    cfg.domain_min = domain.number("min");
    cfg.domain_max = domain.number("max");
    domain.finish();

    auto mesh = root.table("mesh");
    cfg.mesh.kind = parse_enum(mesh.string("kind"), mesh_kinds, mesh.child_path("kind"));
    if (cells_required || mesh.has("cells"))
        cfg.mesh.cells = mesh.count("cells");
    if (cfg.mesh.kind == MeshKind::geometric)
        cfg.mesh.ratio = mesh.number("ratio");
    mesh.finish();

    auto kernel = root.table("kernel");
    cfg.kernel.type = parse_enum(kernel.string("type"), kernel_types, kernel.child_path("type"));
    switch (cfg.kernel.type)
    {
    case KernelType::product:
        cfg.kernel.lambda = kernel.number_or("lambda", 1);
        break;
    case KernelType::sum:
        break;
    case KernelType::piecewise_h2:
        cfg.kernel.lambda = kernel.number("lambda");
        cfg.kernel.alpha = kernel.number("alpha");
        cfg.kernel.zeta = kernel.number("zeta");
        cfg.kernel.eta = kernel.number("eta");
        break;
    }
    kernel.finish();

    auto breakage = root.table("breakage");
    cfg.breakage.type = parse_enum(breakage.string("type"), breakage_types, breakage.child_path("type"));
    if (cfg.breakage.type == BreakageType::dirac_comb)
    {
        cfg.breakage.fractions = breakage.numbers("fractions");
        cfg.breakage.weights = breakage.numbers("weights");
    }
    breakage.finish();

    auto initial = root.table("initial");
    cfg.initial.type = parse_enum(initial.string("type"), initial_types, initial.child_path("type"));
    if (cfg.initial.type == InitialType::tabulated)
    {
        cfg.initial.volumes = initial.numbers("volumes");
        cfg.initial.values = initial.numbers("values");
    }
    initial.finish();

    auto time = root.table("time");
    cfg.t_final = time.number("t_final");
    auto dt = time.table("dt");
    cfg.dt.policy = parse_enum(dt.string("policy"), dt_policies, dt.child_path("policy"));
    cfg.dt.theta = dt.number_or("theta", 0.5);
    if (cfg.dt.policy == DtPolicy::fixed)
        cfg.dt.value = dt.number("value");
    else
        cfg.dt.c = dt.number_or("c", 1);
    dt.finish();
    time.finish();

    if (root.has("stability"))
    {
        auto stability = root.table("stability");
        if (stability.has("lambda"))
            cfg.stability.lambda = stability.number("lambda");
        if (stability.has("density_bound"))
            cfg.stability.density_bound = stability.number("density_bound");
        stability.finish();
    }

    if (root.has("quadrature_order"))
        cfg.quadrature_order = root.count("quadrature_order");

    if (root.has("observer"))
    {
        auto observer = root.table("observer");
        cfg.cadence = observer.count("cadence");
        observer.finish();
    }

    if (root.has("output"))
    {
        auto output = root.table("output");
        if (output.has("path"))
            cfg.output.path = output.string("path");
        if (output.has("format"))
            cfg.output.format = parse_enum(output.string("format"), output_formats, output.child_path("format"));
        output.finish();
    }
    return cfg;
}

void require(bool ok, char const* path, std::string const& message)
{
    if (!ok)
        throw ConfigError(path, message);
}

// Turn library argument errors into path-tagged config errors.
template<class F>
void check_with(char const* path, F&& f)
{
    try
    {
        f();
    }
    catch (InvalidArgument const& e)
    {
        throw ConfigError(path, e.what());
    }
}

json run_to_json(RunConfig const& cfg)
{
    json j;
    j["domain"] = {{"min", cfg.domain_min}, {"max", cfg.domain_max}};

    json mesh = {{"kind", enum_name(cfg.mesh.kind, mesh_kinds)}, {"cells", cfg.mesh.cells}};
    if (cfg.mesh.kind == MeshKind::geometric)
        mesh["ratio"] = cfg.mesh.ratio;
    j["mesh"] = mesh;

    json kernel = {{"type", enum_name(cfg.kernel.type, kernel_types)}};
    if (cfg.kernel.type == KernelType::product)
        kernel["lambda"] = cfg.kernel.lambda;
    if (cfg.kernel.type == KernelType::piecewise_h2)
    {
        kernel["lambda"] = cfg.kernel.lambda;
        kernel["alpha"] = cfg.kernel.alpha;
        kernel["zeta"] = cfg.kernel.zeta;
        kernel["eta"] = cfg.kernel.eta;
    }
    j["kernel"] = kernel;

    json breakage = {{"type", enum_name(cfg.breakage.type, breakage_types)}};
    if (cfg.breakage.type == BreakageType::dirac_comb)
    {
        breakage["fractions"] = cfg.breakage.fractions;
        breakage["weights"] = cfg.breakage.weights;
    }
    j["breakage"] = breakage;

    json initial = {{"type", enum_name(cfg.initial.type, initial_types)}};
    if (cfg.initial.type == InitialType::tabulated)
    {
        initial["volumes"] = cfg.initial.volumes;
        initial["values"] = cfg.initial.values;
    }
    j["initial"] = initial;

    json dt = {{"policy", enum_name(cfg.dt.policy, dt_policies)}, {"theta", cfg.dt.theta}};
    if (cfg.dt.policy == DtPolicy::fixed)
        dt["value"] = cfg.dt.value;
    else
        dt["c"] = cfg.dt.c;
    j["time"] = {{"t_final", cfg.t_final}, {"dt", dt}};

    if (cfg.stability.lambda || cfg.stability.density_bound)
    {
        json stability = json::object();
        if (cfg.stability.lambda)
            stability["lambda"] = *cfg.stability.lambda;
        if (cfg.stability.density_bound)
            stability["density_bound"] = *cfg.stability.density_bound;
        j["stability"] = stability;
    }
    j["quadrature_order"] = cfg.quadrature_order;
    j["observer"] = {{"cadence", cfg.cadence}};
    j["output"] = {{"path", cfg.output.path}, {"format", enum_name(cfg.output.format, output_formats)}};
    return j;
}

}  // namespace

void validate(RunConfig const& cfg)
{
    require(std::isfinite(cfg.domain_min) && std::isfinite(cfg.domain_max), "domain", "bounds must be finite");
    require(cfg.domain_min >= 0, "domain.min", "must be >= 0");
    require(cfg.domain_min < cfg.domain_max, "domain.max", "must exceed domain.min");

    require(cfg.mesh.cells >= 1, "mesh.cells", "must be >= 1");
    if (cfg.mesh.kind == MeshKind::geometric)
        require(std::isfinite(cfg.mesh.ratio) && cfg.mesh.ratio > 0, "mesh.ratio", "must be finite and positive");
    else
        require(cfg.mesh.ratio == 1, "mesh.ratio", "only applies to geometric meshes");

    KernelSpec const defaults;
    switch (cfg.kernel.type)
    {
    case KernelType::product:
        require(cfg.kernel.alpha == defaults.alpha && cfg.kernel.zeta == defaults.zeta
                    && cfg.kernel.eta == defaults.eta,
                "kernel", "alpha/zeta/eta only apply to piecewise_h2");
        break;
    case KernelType::sum:
        require(cfg.kernel == KernelSpec{KernelType::sum}, "kernel", "sum kernel takes no parameters");
        break;
    case KernelType::piecewise_h2:
        break;
    }
    check_with("kernel", [&] { make_kernel(cfg.kernel); });

    if (cfg.breakage.type == BreakageType::dirac_comb)
        check_with("breakage", [&] { make_breakage(cfg.breakage); });
    else
        require(cfg.breakage.fractions.empty() && cfg.breakage.weights.empty(), "breakage",
                "fractions/weights only apply to dirac_comb");

    if (cfg.initial.type == InitialType::tabulated)
        check_with("initial", [&] { make_initial(cfg.initial); });
    else
        require(cfg.initial.volumes.empty() && cfg.initial.values.empty(), "initial",
                "volumes/values only apply to tabulated initial data");

    require(std::isfinite(cfg.t_final) && cfg.t_final >= 0, "time.t_final", "must be finite and >= 0");
    require(std::isfinite(cfg.dt.theta) && cfg.dt.theta > 0 && cfg.dt.theta < 1, "time.dt.theta",
            "must lie in (0, 1): the stability condition needs S dt <= theta < 1");
    if (cfg.dt.policy == DtPolicy::fixed)
    {
        require(std::isfinite(cfg.dt.value) && cfg.dt.value > 0, "time.dt.value", "must be positive and finite");
        require(cfg.dt.c == DtSpec{}.c, "time.dt.c", "only applies to the auto policy");
    }
    else
    {
        require(std::isfinite(cfg.dt.c) && cfg.dt.c > 0, "time.dt.c", "must be positive and finite");
        require(cfg.dt.value == 0, "time.dt.value", "only applies to the fixed policy");
    }

    if (cfg.stability.lambda)
        require(std::isfinite(*cfg.stability.lambda) && *cfg.stability.lambda > 0, "stability.lambda",
                "must be positive and finite");
    if (cfg.stability.density_bound)
        require(std::isfinite(*cfg.stability.density_bound) && *cfg.stability.density_bound > 0,
                "stability.density_bound", "must be positive and finite");

    require(cfg.quadrature_order >= 1 && cfg.quadrature_order <= 64, "quadrature_order", "must lie in [1, 64]");
    require(cfg.cadence >= 1, "observer.cadence", "must be >= 1");
}

void validate(StudyConfig const& cfg)
{
    validate(cfg.base);
    require(cfg.levels.size() >= 3, "study.levels", "need at least three levels for EOC");
    require(cfg.levels.front() >= 1, "study.levels", "cell counts must be >= 1");
    for (std::size_t k = 0; k + 1 < cfg.levels.size(); ++k)
    {
        if (cfg.levels[k + 1] != 2 * cfg.levels[k])
            throw ConfigError("study.levels[" + std::to_string(k + 1) + "]",
                              "expected " + std::to_string(2 * cfg.levels[k]) + " (levels must double), got "
                                  + std::to_string(cfg.levels[k + 1]));
    }
}

Config parse_config(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError("<document>", e.what());
    }
    Table root(doc, "");
    bool const is_study = root.has("study");
    bool const explicit_cells = doc.contains("mesh") && doc["mesh"].is_object() && doc["mesh"].contains("cells");
    RunConfig run = parse_run(root, !is_study);
    if (!is_study)
    {
        root.finish();
        validate(run);
        return run;
    }

    StudyConfig study;
    auto table = root.table("study");
    study.levels = table.counts("levels");
    table.finish();
    root.finish();
    if (!study.levels.empty() && !explicit_cells)
        run.mesh.cells = study.levels.front();
    study.base = std::move(run);
    validate(study);
    return study;
}

Config load_config(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string(), "cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(Config const& config)
{
    json j;
    if (auto const* run = std::get_if<RunConfig>(&config))
    {
        j = run_to_json(*run);
    }
    else
    {
        auto const& study = std::get<StudyConfig>(config);
        j = run_to_json(study.base);
        j["study"] = {{"levels", study.levels}};
    }
    return j.dump(2) + "\n";
}

CollisionKernel make_kernel(KernelSpec const& spec)
{
    switch (spec.type)
    {
    case KernelType::product:
        return CollisionKernel::product(spec.lambda);
    case KernelType::sum:
        return CollisionKernel::sum();
    case KernelType::piecewise_h2:
        return CollisionKernel::piecewise_h2(spec.lambda, spec.alpha, spec.zeta, spec.eta);
    }
    throw InvalidArgument("unknown kernel type");
}

BreakageDistribution make_breakage(BreakageSpec const& spec)
{
    if (spec.type == BreakageType::dirac_comb)
        return BreakageDistribution::dirac_comb(spec.fractions, spec.weights);
    return BreakageDistribution::conditional_uniform();
}

Mesh make_mesh(RunConfig const& config, std::size_t cells)
{
    if (config.mesh.kind == MeshKind::geometric)
        return Mesh::make_geometric(config.domain_min, config.domain_max, cells, config.mesh.ratio);
    return Mesh::make_uniform(config.domain_min, config.domain_max, cells);
}

std::function<double(double)> make_initial(InitialSpec const& spec)
{
    if (spec.type == InitialType::exp_decay)
        return [](double m) { return std::exp(-m); };

    if (spec.volumes.size() < 2 || spec.volumes.size() != spec.values.size())
        throw InvalidArgument("tabulated initial data needs >= 2 (volume, value) pairs of equal length");
    for (std::size_t i = 0; i < spec.volumes.size(); ++i)
    {
        if (!std::isfinite(spec.volumes[i]) || !std::isfinite(spec.values[i]))
            throw InvalidArgument("tabulated initial data must be finite");
        if (spec.values[i] < 0)
            throw InvalidArgument("tabulated initial data must be non-negative");
        if (i > 0 && !(spec.volumes[i] > spec.volumes[i - 1]))
            throw InvalidArgument("tabulated volumes must be strictly increasing");
    }
    return [volumes = spec.volumes, values = spec.values](double m) {
        if (m <= volumes.front())
            return values.front();
        if (m >= volumes.back())
            return values.back();
        auto const hi = static_cast<std::size_t>(std::upper_bound(volumes.begin(), volumes.end(), m) - volumes.begin());
        std::size_t const lo = hi - 1;
        double const t = (m - volumes[lo]) / (volumes[hi] - volumes[lo]);
        return values[lo] + t * (values[hi] - values[lo]);
    };
}

std::string_view to_string(KernelType type) noexcept
{
    return enum_name(type, kernel_types);
}

std::string_view to_string(BreakageType type) noexcept
{
    return enum_name(type, breakage_types);
}

}  // namespace cbreak
