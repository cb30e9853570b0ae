#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sshchain/disorder.hpp"
#include "sshchain/dynamics.hpp"
#include "sshchain/fitting.hpp"
#include "sshchain/io.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/spectra.hpp"
#include "sshchain/version.hpp"

namespace sshchain {

enum class ScenarioKind { spectrum, eigensweep, quench, chiral, bands, fit_roundtrip, disorder };

inline const char* to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::spectrum: return "spectrum";
    case ScenarioKind::eigensweep: return "eigensweep";
    case ScenarioKind::quench: return "quench";
    case ScenarioKind::chiral: return "chiral";
    case ScenarioKind::bands: return "bands";
    case ScenarioKind::fit_roundtrip: return "fit-roundtrip";
    case ScenarioKind::disorder: return "disorder";
    }
    return "?";
}

inline std::optional<ScenarioKind> scenario_kind_from_string(const std::string& s)
{
    for (ScenarioKind k : {ScenarioKind::spectrum, ScenarioKind::eigensweep, ScenarioKind::quench,
                           ScenarioKind::chiral, ScenarioKind::bands, ScenarioKind::fit_roundtrip,
                           ScenarioKind::disorder})
        if (s == to_string(k))
            return k;
    return std::nullopt;
}

/// Ratio sweep grid, log- or linearly spaced over [min, max].
struct RatioGrid {
    double min = 0.1;
    double max = 5.0;
    int count = 2;
    bool log_spacing = true;

    std::vector<double> values() const
    {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            v[static_cast<std::size_t>(i)] =
                log_spacing ? min * std::pow(max / min, f) : min + (max - min) * f;
        }
        return v;
    }
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::spectrum;
    ChainSpec spec;
    std::string output_prefix;
    std::string config_hash; // 16 hex digits of the canonical config text

    // spectrum / fit-roundtrip
    int probe_site = 1;
    double fwhm_khz = 65.0;
    // quench / chiral
    int initial_site = 4;
    double t_max_us = default_t_max_us;
    double dt_us = default_dt_us;
    double t_avg_us = default_t_max_us;
    ChiralConvention convention = ChiralConvention::relative;
    // chiral sweep layers
    std::optional<RatioGrid> ratio_grid; // also eigensweep
    std::vector<double> sweep_j1_khz;
    std::vector<std::array<double, 2>> pairs_khz;
    // bands
    int n_k = 181;
    // fit-roundtrip
    int n_peaks = 0; // 0 means one per eigenstate
    int max_iter = 200;
    double tol = 1e-10;
    double noise_amplitude = 0.0; // relative to the trace maximum
    std::uint64_t noise_seed = 0;
    // disorder
    DisorderModel disorder;
    int n_samples = 0;
    EnsembleObservable observable = EnsembleObservable::eigenvalues;
};

inline std::string config_hash_hex(const nlohmann::json& config)
{
    // FNV-1a over the canonical dump (sorted keys, minimal whitespace).
    const std::string text = config.dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return hex;
}

namespace detail {

struct ConfigReader {
    const nlohmann::json& root;
    std::vector<std::string>& issues;
    std::vector<std::string> seen;

    bool has(const std::string& key)
    {
        return root.contains(key) && !root[key].is_null();
    }

    void note(const std::string& key) { seen.push_back(key); }

    std::optional<double> number(const std::string& key, bool required)
    {
        note(key);
        if (!has(key)) {
            if (required)
                issues.push_back(key + ": required number");
            return std::nullopt;
        }
        if (!json_is_number(root[key])) {
            issues.push_back(key + ": expected a number");
            return std::nullopt;
        }
        return root[key].get<double>();
    }

    std::optional<int> integer(const std::string& key, bool required)
    {
        note(key);
        if (!has(key)) {
            if (required)
                issues.push_back(key + ": required integer");
            return std::nullopt;
        }
        if (!root[key].is_number_integer()) {
            issues.push_back(key + ": expected an integer");
            return std::nullopt;
        }
        return root[key].get<int>();
    }

    std::optional<std::string> string(const std::string& key, bool required)
    {
        note(key);
        if (!has(key)) {
            if (required)
                issues.push_back(key + ": required string");
            return std::nullopt;
        }
        if (!root[key].is_string()) {
            issues.push_back(key + ": expected a string");
            return std::nullopt;
        }
        return root[key].get<std::string>();
    }

    void reject_unknown()
    {
        for (const auto& item : root.items())
            if (std::find(seen.begin(), seen.end(), item.key()) == seen.end())
                issues.push_back("unknown key '" + item.key() + "'");
    }
};

inline std::optional<RatioGrid> read_ratio_grid(const nlohmann::json& j, std::vector<std::string>& issues)
{
    if (!j.is_object()) {
        issues.push_back("ratio_grid: expected an object");
        return std::nullopt;
    }
    RatioGrid grid;
    bool ok = true;
    for (const auto& item : j.items())
        if (item.key() != "min" && item.key() != "max" && item.key() != "count" && item.key() != "spacing") {
            issues.push_back("ratio_grid: unknown key '" + item.key() + "'");
            ok = false;
        }
    for (const char* key : {"min", "max"}) {
        if (!j.contains(key) || !json_is_number(j[key])) {
            issues.push_back(std::string("ratio_grid.") + key + ": required number");
            ok = false;
        }
    }
    if (!j.contains("count") || !j["count"].is_number_integer()) {
        issues.push_back("ratio_grid.count: required integer");
        ok = false;
    }
    if (!ok)
        return std::nullopt;
    grid.min = j["min"].get<double>();
    grid.max = j["max"].get<double>();
    grid.count = j["count"].get<int>();
    if (!(grid.min > 0.0))
        issues.push_back("ratio_grid.min: must be > 0 (ratios are strictly positive)");
    if (!(grid.max >= grid.min))
        issues.push_back("ratio_grid.max: must be >= min");
    if (grid.count < 1)
        issues.push_back("ratio_grid.count: must be >= 1");
    if (j.contains("spacing")) {
        if (!j["spacing"].is_string()
            || (j["spacing"] != "log" && j["spacing"] != "linear"))
            issues.push_back("ratio_grid.spacing: expected \"log\" or \"linear\"");
        else
            grid.log_spacing = j["spacing"] == "log";
    }
    return grid;
}

inline void read_disorder_model(const nlohmann::json& j, DisorderModel& model,
                                std::vector<std::string>& issues)
{
    if (!j.is_object()) {
        issues.push_back("disorder: expected an object");
        return;
    }
    for (const auto& item : j.items())
        if (item.key() != "sigma_j_khz" && item.key() != "sigma_u_khz" && item.key() != "distribution"
            && item.key() != "seed")
            issues.push_back("disorder: unknown key '" + item.key() + "'");
    for (const char* key : {"sigma_j_khz", "sigma_u_khz"}) {
        if (!j.contains(key) || !json_is_number(j[key])) {
            issues.push_back(std::string("disorder.") + key + ": required number");
            continue;
        }
        const double v = j[key].get<double>();
        if (!(v >= 0.0) || !std::isfinite(v))
            issues.push_back(std::string("disorder.") + key + ": must be finite and >= 0");
        else
            (std::string(key) == "sigma_j_khz" ? model.sigma_j_khz : model.sigma_u_khz) = v;
    }
    if (j.contains("distribution")) {
        if (j["distribution"] == "uniform-bounded")
            model.distribution = DisorderModel::Distribution::uniform_bounded;
        else if (j["distribution"] == "gaussian")
            model.distribution = DisorderModel::Distribution::gaussian;
        else
            issues.push_back("disorder.distribution: expected \"uniform-bounded\" or \"gaussian\"");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0)
            issues.push_back("disorder.seed: expected a non-negative integer");
        else
            model.seed = j["seed"].get<std::uint64_t>();
    }
}

} // namespace detail

/// Full structural and semantic validation of a scenario config. Returns
/// every violation found (empty result means the config is runnable).
/// The returned config is meaningful only when there are no issues.
inline ScenarioConfig validate_scenario(const nlohmann::json& root, std::vector<std::string>& issues)
{
    ScenarioConfig config;
    if (!root.is_object()) {
        issues.push_back("config: expected a JSON object");
        return config;
    }
    detail::ConfigReader reader{root, issues, {}};

    const auto kind_str = reader.string("kind", true);
    if (kind_str) {
        const auto kind = scenario_kind_from_string(*kind_str);
        if (!kind) {
            issues.push_back("kind: unknown scenario kind '" + *kind_str + "'");
            return config;
        }
        config.kind = *kind;
    } else {
        return config;
    }

    reader.note("spec");
    if (!root.contains("spec"))
        issues.push_back("spec: required object");
    else
        config.spec = read_chain_spec(root["spec"], issues, "spec.");

    if (const auto prefix = reader.string("output_prefix", true)) {
        config.output_prefix = *prefix;
        if (prefix->empty() || prefix->find('/') != std::string::npos)
            issues.push_back("output_prefix: must be a non-empty file-name prefix without '/'");
    }

    const int n_sites = config.spec.n_cells >= 1 ? config.spec.n_sites() : 0;
    auto check_site = [&](const char* key, int site) {
        if (n_sites > 0 && (site < 1 || site > n_sites))
            issues.push_back(std::string(key) + ": must be in [1, " + std::to_string(n_sites) + "], got "
                             + std::to_string(site));
    };

    switch (config.kind) {
    case ScenarioKind::spectrum: {
        if (const auto v = reader.integer("probe_site", true)) {
            config.probe_site = *v;
            check_site("probe_site", *v);
        }
        if (const auto v = reader.number("fwhm_khz", true)) {
            config.fwhm_khz = *v;
            if (!(*v > 0.0))
                issues.push_back("fwhm_khz: must be > 0");
        }
        break;
    }
    case ScenarioKind::eigensweep: {
        reader.note("ratio_grid");
        if (!reader.has("ratio_grid"))
            issues.push_back("ratio_grid: required object");
        else
            config.ratio_grid = detail::read_ratio_grid(root["ratio_grid"], issues);
        if (config.spec.bond_overrides_khz)
            issues.push_back("spec.bond_overrides_khz: not supported for kind 'eigensweep'");
        if (!(config.spec.j_inter_khz > 0.0))
            issues.push_back("spec.j_inter_khz: must be > 0 for kind 'eigensweep' (reference J2)");
        break;
    }
    case ScenarioKind::quench: {
        if (const auto v = reader.integer("initial_site", true)) {
            config.initial_site = *v;
            check_site("initial_site", *v);
        }
        const auto t_max = reader.number("t_max_us", true);
        if (t_max) {
            config.t_max_us = *t_max;
            if (!(*t_max > 0.0))
                issues.push_back("t_max_us: must be > 0");
        }
        if (const auto v = reader.number("dt_us", true)) {
            config.dt_us = *v;
            if (!(*v > 0.0) || (t_max && *v > *t_max))
                issues.push_back("dt_us: must satisfy 0 < dt_us <= t_max_us");
        }
        break;
    }
    case ScenarioKind::chiral: {
        if (const auto v = reader.integer("initial_site", true)) {
            config.initial_site = *v;
            check_site("initial_site", *v);
        }
        if (const auto v = reader.number("t_avg_us", false)) {
            config.t_avg_us = *v;
            if (!(*v > 0.0))
                issues.push_back("t_avg_us: must be > 0");
        }
        const bool sweep = reader.has("ratio_grid") || reader.has("sweep_j1_khz") || reader.has("pairs_khz");
        if (sweep) {
            for (const char* key : {"t_max_us", "dt_us", "convention"}) {
                reader.note(key);
                if (reader.has(key))
                    issues.push_back(std::string(key) + ": not allowed in sweep mode (ratio_grid/"
                                                        "sweep_j1_khz/pairs_khz present)");
            }
            reader.note("ratio_grid");
            reader.note("sweep_j1_khz");
            reader.note("pairs_khz");
            if (reader.has("ratio_grid") != reader.has("sweep_j1_khz"))
                issues.push_back("sweep_j1_khz: ratio_grid and sweep_j1_khz must be given together");
            if (reader.has("ratio_grid"))
                config.ratio_grid = detail::read_ratio_grid(root["ratio_grid"], issues);
            if (reader.has("sweep_j1_khz")) {
                if (!root["sweep_j1_khz"].is_array())
                    issues.push_back("sweep_j1_khz: expected an array of rates");
                else
                    for (const auto& v : root["sweep_j1_khz"]) {
                        if (!detail::json_is_number(v) || !(v.get<double>() > 0.0)) {
                            issues.push_back("sweep_j1_khz: entries must be numbers > 0");
                            break;
                        }
                        config.sweep_j1_khz.push_back(v.get<double>());
                    }
            }
            if (reader.has("pairs_khz")) {
                if (!root["pairs_khz"].is_array())
                    issues.push_back("pairs_khz: expected an array of [j1, j2] pairs");
                else
                    for (const auto& pair : root["pairs_khz"]) {
                        if (!pair.is_array() || pair.size() != 2 || !detail::json_is_number(pair[0])
                            || !detail::json_is_number(pair[1])) {
                            issues.push_back("pairs_khz: entries must be [j1, j2] number pairs");
                            break;
                        }
                        const double j1 = pair[0].get<double>();
                        const double j2 = pair[1].get<double>();
                        if (!(j1 >= 0.0) || !(j2 >= 0.0) || (j1 == 0.0 && j2 == 0.0)) {
                            issues.push_back("pairs_khz: rates must be >= 0 and not both zero");
                            break;
                        }
                        config.pairs_khz.push_back({j1, j2});
                    }
            }
        } else {
            if (const auto v = reader.number("t_max_us", false)) {
                config.t_max_us = *v;
                if (!(*v > 0.0))
                    issues.push_back("t_max_us: must be > 0");
            }
            if (const auto v = reader.number("dt_us", false)) {
                config.dt_us = *v;
                if (!(*v > 0.0) || *v > config.t_max_us)
                    issues.push_back("dt_us: must satisfy 0 < dt_us <= t_max_us");
            }
            if (const auto v = reader.string("convention", false)) {
                if (*v == "relative")
                    config.convention = ChiralConvention::relative;
                else if (*v == "literal-eq4")
                    config.convention = ChiralConvention::literal_eq4;
                else
                    issues.push_back("convention: expected \"relative\" or \"literal-eq4\"");
            }
            if (config.t_avg_us > config.t_max_us)
                issues.push_back("t_avg_us: must be <= t_max_us");
        }
        break;
    }
    case ScenarioKind::bands: {
        if (const auto v = reader.integer("n_k", true)) {
            config.n_k = *v;
            if (*v < 2)
                issues.push_back("n_k: must be >= 2");
        }
        break;
    }
    case ScenarioKind::fit_roundtrip: {
        if (const auto v = reader.integer("probe_site", true)) {
            config.probe_site = *v;
            check_site("probe_site", *v);
        }
        if (const auto v = reader.number("fwhm_khz", true)) {
            config.fwhm_khz = *v;
            if (!(*v > 0.0))
                issues.push_back("fwhm_khz: must be > 0");
        }
        config.n_peaks = n_sites;
        if (const auto v = reader.integer("n_peaks", false)) {
            config.n_peaks = *v;
            if (*v < 1)
                issues.push_back("n_peaks: must be >= 1");
        }
        if (const auto v = reader.integer("max_iter", false)) {
            config.max_iter = *v;
            if (*v < 1)
                issues.push_back("max_iter: must be >= 1");
        }
        if (const auto v = reader.number("tol", false)) {
            config.tol = *v;
            if (!(*v > 0.0))
                issues.push_back("tol: must be > 0");
        }
        if (const auto v = reader.number("noise_amplitude", false)) {
            config.noise_amplitude = *v;
            if (!(*v >= 0.0))
                issues.push_back("noise_amplitude: must be >= 0");
        }
        if (const auto v = reader.integer("noise_seed", false)) {
            if (*v < 0)
                issues.push_back("noise_seed: must be >= 0");
            else
                config.noise_seed = static_cast<std::uint64_t>(*v);
        }
        break;
    }
    case ScenarioKind::disorder: {
        reader.note("disorder");
        if (!reader.has("disorder"))
            issues.push_back("disorder: required object");
        else
            detail::read_disorder_model(root["disorder"], config.disorder, issues);
        if (const auto v = reader.integer("n_samples", true)) {
            config.n_samples = *v;
            if (*v < 2)
                issues.push_back("n_samples: must be >= 2");
        }
        if (const auto v = reader.string("observable", true)) {
            if (*v == "eigenvalues")
                config.observable = EnsembleObservable::eigenvalues;
            else if (*v == "winding_estimate")
                config.observable = EnsembleObservable::winding_estimate;
            else if (*v == "spectrum")
                config.observable = EnsembleObservable::spectrum;
            else
                issues.push_back("observable: expected \"eigenvalues\", \"winding_estimate\" or \"spectrum\"");
        }
        if (config.observable == EnsembleObservable::spectrum) {
            if (const auto v = reader.integer("probe_site", true)) {
                config.probe_site = *v;
                check_site("probe_site", *v);
            }
            if (const auto v = reader.number("fwhm_khz", true)) {
                config.fwhm_khz = *v;
                if (!(*v > 0.0))
                    issues.push_back("fwhm_khz: must be > 0");
            }
        } else if (config.observable == EnsembleObservable::winding_estimate) {
            if (const auto v = reader.integer("initial_site", true)) {
                config.initial_site = *v;
                check_site("initial_site", *v);
            }
            if (const auto v = reader.number("t_avg_us", false)) {
                config.t_avg_us = *v;
                if (!(*v > 0.0))
                    issues.push_back("t_avg_us: must be > 0");
            }
        }
        break;
    }
    }

    reader.reject_unknown();
    config.config_hash = config_hash_hex(root);
    return config;
}

/// Throwing parse for already-validated configs.
inline ScenarioConfig parse_scenario(const nlohmann::json& root)
{
    std::vector<std::string> issues;
    ScenarioConfig config = validate_scenario(root, issues);
    if (!issues.empty()) {
        std::string joined;
        for (const std::string& msg : issues) {
            if (!joined.empty())
                joined += "; ";
            joined += msg;
        }
        throw std::invalid_argument(joined);
    }
    return config;
}

struct RunSummary {
    std::string scenario;
    std::string config_hash;
    std::vector<std::string> outputs; // file names relative to the output directory
    std::int64_t wall_time_ms = 0;
};

namespace detail {

class OutputWriter {
public:
    OutputWriter(std::filesystem::path dir, std::string prefix, std::string hash)
        : dir_(std::move(dir)), prefix_(std::move(prefix)), hash_(std::move(hash))
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
    }

    std::string provenance_line() const
    {
        return "# config_hash=" + hash_ + " version=" + std::string(version) + "\n";
    }

    void csv(const std::string& suffix, const std::string& body)
    {
        write(prefix_ + "_" + suffix + ".csv", provenance_line() + body);
    }

    void json(const std::string& suffix, nlohmann::json j)
    {
        j["provenance"] = {{"config_hash", hash_}, {"version", version}};
        write(prefix_ + "_" + suffix + ".json", j.dump(2) + "\n");
    }

    const std::vector<std::string>& names() const { return names_; }

    void write(const std::string& name, const std::string& content)
    {
        const std::filesystem::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open for writing: " + path.string());
        out << content;
        out.close();
        if (!out)
            throw std::runtime_error("write failed: " + path.string());
        names_.push_back(name);
    }

private:
    std::filesystem::path dir_;
    std::string prefix_;
    std::string hash_;
    std::vector<std::string> names_;
};

} // namespace detail

/// Runs one scenario, writing its tables next to `out_dir` with a provenance
/// header on every file, and a `<prefix>_summary.json` run summary. Outputs
/// are deterministic for identical config and version; the summary's
/// wall_time_ms is the only non-reproducible value written.
inline RunSummary run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir)
{
    const auto t0 = std::chrono::steady_clock::now();
    detail::OutputWriter writer(out_dir, config.output_prefix, config.config_hash);

    switch (config.kind) {
    case ScenarioKind::spectrum: {
        const EigenSystem eig = eigendecompose(build_hamiltonian(config.spec));
        const StickSpectrum sticks = stick_spectrum(eig, config.probe_site);
        const SpectrumTrace trace = broaden(sticks, config.fwhm_khz, default_detuning_grid(eig, config.fwhm_khz));
        writer.csv("trace", spectrum_trace_csv(trace));
        writer.json("sticks", to_json(sticks));
        break;
    }
    case ScenarioKind::eigensweep: {
        const double j2 = config.spec.j_inter_khz;
        const int n = config.spec.n_sites();
        std::string body = "ratio";
        for (int i = 1; i <= n; ++i)
            body += ",e" + std::to_string(i) + "_over_j1";
        body += ",band_min_over_j1,band_max_over_j1\n";
        for (double ratio : config.ratio_grid->values()) {
            const double j1 = ratio * j2;
            ChainSpec spec = config.spec;
            spec.j_intra_khz = j1;
            const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
            body += format_double(ratio);
            for (double e : eig.eigenvalues)
                body += "," + format_double(e / j1);
            body += "," + format_double(std::abs(j1 - j2) / j1);
            body += "," + format_double((j1 + j2) / j1);
            body += '\n';
        }
        writer.csv("eigensweep", body);
        break;
    }
    case ScenarioKind::quench: {
        const QuenchTrajectory traj = evolve(config.spec, config.initial_site, config.t_max_us, config.dt_us);
        writer.csv("trajectory", trajectory_csv(traj));
        break;
    }
    case ScenarioKind::chiral: {
        const bool sweep = config.ratio_grid.has_value() || !config.pairs_khz.empty();
        if (!sweep) {
            const QuenchTrajectory traj = evolve(config.spec, config.initial_site, config.t_max_us, config.dt_us);
            const ChiralSeries series = chiral_displacement(traj, config.convention);
            writer.csv("chiral", chiral_series_csv(series));
            std::string warning;
            const double estimate = winding_estimate(config.spec, config.initial_site, config.t_avg_us, &warning);
            nlohmann::json j = {{"spec", to_json(config.spec)},
                                {"initial_site", config.initial_site},
                                {"convention", to_string(config.convention)},
                                {"t_avg_us", config.t_avg_us},
                                {"winding_estimate", estimate}};
            if (!warning.empty())
                j["warning"] = warning;
            writer.json("winding", j);
        } else {
            std::string body = "series,ratio,j1_khz,j2_khz,c_bar,c_bar_diag,ideal_winding\n";
            auto row = [&](const std::string& series, double j1, double j2) {
                ChainSpec spec = config.spec;
                spec.j_intra_khz = j1;
                spec.j_inter_khz = j2;
                spec.bond_overrides_khz.reset();
                const double c_bar = winding_estimate(spec, config.initial_site, config.t_avg_us);
                const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
                const SiteOperator obs =
                    chiral_position_observable(spec.n_cells, cell_of_site(config.initial_site));
                const double c_diag = diagonal_ensemble_average(eig, config.initial_site, obs);
                body += series + "," + format_double(j1 / j2) + "," + format_double(j1) + ","
                        + format_double(j2) + "," + format_double(c_bar) + "," + format_double(c_diag)
                        + "," + std::to_string(ideal_winding(j1, j2)) + "\n";
            };
            for (const auto& pair : config.pairs_khz)
                row("pairs", pair[0], pair[1]);
            if (config.ratio_grid)
                for (double j1 : config.sweep_j1_khz)
                    for (double ratio : config.ratio_grid->values())
                        row("j1_" + format_double(j1), j1, j1 / ratio);
            writer.csv("sweep", body);
        }
        break;
    }
    case ScenarioKind::bands: {
        const BandStructure bands = band_structure(config.spec.j_intra_khz, config.spec.j_inter_khz, config.n_k);
        writer.csv("bands", band_structure_csv(bands));
        break;
    }
    case ScenarioKind::fit_roundtrip: {
        const EigenSystem eig = eigendecompose(build_hamiltonian(config.spec));
        const StickSpectrum sticks = stick_spectrum(eig, config.probe_site);
        SpectrumTrace trace = broaden(sticks, config.fwhm_khz, default_detuning_grid(eig, config.fwhm_khz));
        if (config.noise_amplitude > 0.0) {
            double peak = 0.0;
            for (double v : trace.intensity)
                peak = std::max(peak, v);
            for (std::size_t g = 0; g < trace.intensity.size(); ++g) {
                const double u = detail::to_unit_open(
                    detail::keyed_word(config.noise_seed, 0, static_cast<std::uint64_t>(g), 0));
                trace.intensity[g] += config.noise_amplitude * peak * (2.0 * u - 1.0);
            }
        }
        const int n_peaks = config.n_peaks > 0 ? config.n_peaks : config.spec.n_sites();
        FitOptions options;
        options.max_iter = config.max_iter;
        options.tol = config.tol;
        const LorentzianFit fit = fit_lorentzians(trace, seed_guesses(trace, n_peaks), options);
        writer.csv("trace", spectrum_trace_csv(trace));
        writer.json("sticks", to_json(sticks));
        writer.json("fit", to_json(fit));
        break;
    }
    case ScenarioKind::disorder: {
        EnsembleOptions options;
        options.probe_site = config.probe_site;
        options.fwhm_khz = config.fwhm_khz;
        options.initial_site = config.initial_site;
        options.t_avg_us = config.t_avg_us;
        const EnsembleStatistics stats =
            ensemble_statistics(config.spec, config.disorder, config.n_samples, config.observable, options);
        writer.csv("ensemble", ensemble_csv(stats));
        break;
    }
    }

    RunSummary summary;
    summary.scenario = to_string(config.kind);
    summary.config_hash = config.config_hash;
    summary.outputs = writer.names();
    summary.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json j = {{"scenario", summary.scenario},
                        {"config_hash", summary.config_hash},
                        {"outputs", summary.outputs},
                        {"wall_time_ms", summary.wall_time_ms}};
    writer.write(config.output_prefix + "_summary.json", j.dump(2) + "\n");
    return summary;
}

} // namespace sshchain
