#pragma once

#include <algorithm>
#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "sshchain/disorder.hpp"
#include "sshchain/dynamics.hpp"
#include "sshchain/fitting.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/spectra.hpp"

namespace sshchain {

// Shortest decimal representation that round-trips exactly, so emitted tables
// are byte-stable across runs and platforms.
inline std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string spectrum_trace_csv(const SpectrumTrace& trace)
{
    std::string out = "detuning_khz,intensity\n";
    for (int k = 0; k < trace.detunings_khz.count; ++k) {
        out += format_double(trace.detunings_khz.value(k));
        out += ',';
        out += format_double(trace.intensity[static_cast<std::size_t>(k)]);
        out += '\n';
    }
    return out;
}

inline std::string band_structure_csv(const BandStructure& bands)
{
    std::string out = "k,e_plus_khz,e_minus_khz\n";
    for (std::size_t i = 0; i < bands.k.size(); ++i) {
        out += format_double(bands.k[i]);
        out += ',';
        out += format_double(bands.e_plus_khz[i]);
        out += ',';
        out += format_double(bands.e_minus_khz[i]);
        out += '\n';
    }
    return out;
}

inline std::string trajectory_csv(const QuenchTrajectory& traj)
{
    std::string out = "t_us";
    const int n = 2 * traj.n_cells;
    for (int i = 1; i <= n; ++i)
        out += ",p" + std::to_string(i);
    out += '\n';
    for (int k = 0; k < traj.times_us.count; ++k) {
        out += format_double(traj.times_us.value(k));
        for (int i = 0; i < n; ++i) {
            out += ',';
            out += format_double(traj.populations[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
        }
        out += '\n';
    }
    return out;
}

inline std::string chiral_series_csv(const ChiralSeries& series)
{
    std::string out = "t_us,c,c_bar\n";
    for (std::size_t k = 0; k < series.times_us.size(); ++k) {
        out += format_double(series.times_us[k]);
        out += ',';
        out += format_double(series.c_of_t[k]);
        out += ',';
        out += format_double(series.c_bar[k]);
        out += '\n';
    }
    return out;
}

inline std::string ensemble_csv(const EnsembleStatistics& stats)
{
    std::string out = "mean,std,n\n";
    for (std::size_t e = 0; e < stats.mean.size(); ++e) {
        out += format_double(stats.mean[e]);
        out += ',';
        out += format_double(stats.stddev[e]);
        out += ',';
        out += std::to_string(stats.n_samples);
        out += '\n';
    }
    return out;
}

inline nlohmann::json to_json(const ChainSpec& spec)
{
    nlohmann::json j;
    j["n_cells"] = spec.n_cells;
    j["j_intra_khz"] = spec.j_intra_khz;
    j["j_inter_khz"] = spec.j_inter_khz;
    j["bond_overrides_khz"] = spec.bond_overrides_khz ? nlohmann::json(*spec.bond_overrides_khz)
                                                      : nlohmann::json(nullptr);
    j["onsite_khz"] = spec.onsite_khz.empty() ? nlohmann::json(nullptr) : nlohmann::json(spec.onsite_khz);
    return j;
}

inline nlohmann::json to_json(const StickSpectrum& sticks)
{
    nlohmann::json lines = nlohmann::json::array();
    for (const StickLine& line : sticks.lines)
        lines.push_back({{"energy_khz", line.energy_khz}, {"weight", line.weight}});
    return {{"probe_site", sticks.probe_site}, {"lines", lines}};
}

inline nlohmann::json to_json(const LorentzianFit& fit)
{
    return {{"centers_khz", fit.centers_khz},
            {"heights", fit.heights},
            {"shared_fwhm_khz", fit.shared_fwhm_khz},
            {"residual_rms", fit.residual_rms},
            {"converged", fit.converged},
            {"iterations", fit.iterations}};
}

namespace detail {

inline bool json_is_number(const nlohmann::json& j)
{
    return j.is_number_float() || j.is_number_integer() || j.is_number_unsigned();
}

} // namespace detail

/// Strict ChainSpec reader. Appends one diagnostic per violation to `issues`
/// (prefixed with `where`) and returns the best-effort spec; the spec is
/// usable only when no diagnostics were added. Unknown keys are rejected.
inline ChainSpec read_chain_spec(const nlohmann::json& j, std::vector<std::string>& issues,
                                 const std::string& where = "")
{
    ChainSpec spec;
    if (!j.is_object()) {
        issues.push_back(where + ": expected a JSON object");
        return spec;
    }
    static const std::vector<std::string> known = {"n_cells", "j_intra_khz", "j_inter_khz",
                                                   "bond_overrides_khz", "onsite_khz"};
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            issues.push_back(where + "unknown key '" + item.key() + "'");
    }
    if (!j.contains("n_cells") || !j["n_cells"].is_number_integer())
        issues.push_back(where + "n_cells: required integer");
    else
        spec.n_cells = j["n_cells"].get<int>();
    for (const char* key : {"j_intra_khz", "j_inter_khz"}) {
        if (!j.contains(key) || !detail::json_is_number(j[key]))
            issues.push_back(where + key + ": required number");
        else
            (std::string(key) == "j_intra_khz" ? spec.j_intra_khz : spec.j_inter_khz) = j[key].get<double>();
    }
    if (j.contains("bond_overrides_khz") && !j["bond_overrides_khz"].is_null()) {
        if (!j["bond_overrides_khz"].is_array()) {
            issues.push_back(where + "bond_overrides_khz: expected array or null");
        } else {
            std::vector<double> bonds;
            for (const auto& v : j["bond_overrides_khz"]) {
                if (!detail::json_is_number(v)) {
                    issues.push_back(where + "bond_overrides_khz: non-numeric entry");
                    break;
                }
                bonds.push_back(v.get<double>());
            }
            spec.bond_overrides_khz = std::move(bonds);
        }
    }
    if (j.contains("onsite_khz") && !j["onsite_khz"].is_null()) {
        if (!j["onsite_khz"].is_array()) {
            issues.push_back(where + "onsite_khz: expected array or null");
        } else {
            for (const auto& v : j["onsite_khz"]) {
                if (!detail::json_is_number(v)) {
                    issues.push_back(where + "onsite_khz: non-numeric entry");
                    break;
                }
                spec.onsite_khz.push_back(v.get<double>());
            }
        }
    }
    for (const std::string& msg : validate(spec))
        issues.push_back(where + msg);
    return spec;
}

/// Throwing convenience wrapper around read_chain_spec.
inline ChainSpec chain_spec_from_json(const nlohmann::json& j)
{
    std::vector<std::string> issues;
    ChainSpec spec = read_chain_spec(j, issues);
    if (!issues.empty()) {
        std::string joined;
        for (const std::string& msg : issues) {
            if (!joined.empty())
                joined += "; ";
            joined += msg;
        }
        throw std::invalid_argument(joined);
    }
    return spec;
}

} // namespace sshchain
