#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sshchain/dynamics.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/spectra.hpp"

namespace sshchain {

/// Ensemble of perturbed chains: every bond rate receives an independent draw
/// of scale sigma_j and every on-site energy a draw of scale sigma_u.
/// Uniform-bounded draws lie in [-sigma, +sigma]; gaussian draws have standard
/// deviation sigma.
struct DisorderModel {
    enum class Distribution { uniform_bounded, gaussian };

    double sigma_j_khz = 0.0;
    double sigma_u_khz = 0.0;
    Distribution distribution = Distribution::uniform_bounded;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based generator: the word is a pure function of
// (seed, sample_index, slot, stream), independent of evaluation order.
inline std::uint64_t keyed_word(std::uint64_t seed, std::uint64_t sample_index,
                                std::uint64_t slot, std::uint64_t stream)
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ splitmix64(sample_index + 0x632BE59BD9B4E019ULL));
    h = splitmix64(h ^ splitmix64(slot * 2ULL + stream + 0x9E3779B97F4A7C15ULL));
    return h;
}

inline double to_unit_open(std::uint64_t w) // [0, 1)
{
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

inline double to_unit_closed(std::uint64_t w) // (0, 1]
{
    return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
}

inline double draw(const DisorderModel& model, double sigma, std::uint64_t sample_index, std::uint64_t slot)
{
    if (sigma == 0.0)
        return 0.0;
    if (model.distribution == DisorderModel::Distribution::uniform_bounded) {
        const double u = to_unit_open(keyed_word(model.seed, sample_index, slot, 0));
        return sigma * (2.0 * u - 1.0);
    }
    // Box-Muller from two sub-streams of the same slot key.
    const double u1 = to_unit_closed(keyed_word(model.seed, sample_index, slot, 0));
    const double u2 = to_unit_open(keyed_word(model.seed, sample_index, slot, 1));
    const double two_pi = 2.0 * std::acos(-1.0);
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

} // namespace detail

/// One perturbed realization of the base spec. Slots are numbered bond-first
/// (bond n uses slot n-1, site n uses slot 2N-1 + n-1), so a draw depends only
/// on (seed, sample_index, slot) and ensembles reproduce bit-identically in
/// any evaluation order. Zero scales return the base values untouched.
inline ChainSpec sample_spec(const ChainSpec& base, const DisorderModel& model, std::uint64_t sample_index)
{
    require_valid(base);
    if (model.sigma_j_khz < 0.0 || model.sigma_u_khz < 0.0)
        throw std::invalid_argument("disorder: sigma scales must be >= 0");

    ChainSpec spec = base;
    if (model.sigma_j_khz > 0.0) {
        std::vector<double> bonds(static_cast<std::size_t>(base.n_bonds()));
        for (int b = 1; b <= base.n_bonds(); ++b)
            bonds[static_cast<std::size_t>(b - 1)] =
                base.bond_khz(b)
                + detail::draw(model, model.sigma_j_khz, sample_index, static_cast<std::uint64_t>(b - 1));
        spec.bond_overrides_khz = std::move(bonds);
    }
    if (model.sigma_u_khz > 0.0) {
        std::vector<double> onsite(static_cast<std::size_t>(base.n_sites()));
        for (int i = 1; i <= base.n_sites(); ++i)
            onsite[static_cast<std::size_t>(i - 1)] =
                base.onsite_at(i)
                + detail::draw(model, model.sigma_u_khz, sample_index,
                               static_cast<std::uint64_t>(base.n_bonds() + i - 1));
        spec.onsite_khz = std::move(onsite);
    }
    return spec;
}

enum class EnsembleObservable { eigenvalues, winding_estimate, spectrum };

inline const char* to_string(EnsembleObservable o)
{
    switch (o) {
    case EnsembleObservable::eigenvalues: return "eigenvalues";
    case EnsembleObservable::winding_estimate: return "winding_estimate";
    case EnsembleObservable::spectrum: return "spectrum";
    }
    return "?";
}

struct EnsembleOptions {
    int probe_site = 1;       // spectrum
    double fwhm_khz = 65.0;   // spectrum
    int initial_site = 1;     // winding_estimate
    double t_avg_us = default_t_max_us;
};

/// Element-wise sample mean and (n-1)-normalized standard deviation.
struct EnsembleStatistics {
    std::vector<double> mean;
    std::vector<double> stddev;
    int n_samples = 0;
};

/// Aggregates an observable over the seeded ensemble. Samples are evaluated
/// by sample_index and accumulated with Welford's recurrence in index order,
/// so results do not depend on scheduling. The spectrum observable is
/// evaluated on the clean base spec's default grid, common to all samples.
inline EnsembleStatistics ensemble_statistics(const ChainSpec& base, const DisorderModel& model,
                                              int n_samples, EnsembleObservable observable,
                                              const EnsembleOptions& options = {})
{
    if (n_samples < 2)
        throw std::invalid_argument("n_samples: must be >= 2, got " + std::to_string(n_samples));

    UniformGrid grid;
    if (observable == EnsembleObservable::spectrum) {
        const EigenSystem clean = eigendecompose(build_hamiltonian(base));
        grid = default_detuning_grid(clean, options.fwhm_khz);
    }

    auto evaluate = [&](std::uint64_t index) -> std::vector<double> {
        const ChainSpec spec = sample_spec(base, model, index);
        switch (observable) {
        case EnsembleObservable::eigenvalues:
            return eigendecompose(build_hamiltonian(spec)).eigenvalues;
        case EnsembleObservable::winding_estimate:
            return {winding_estimate(spec, options.initial_site, options.t_avg_us)};
        case EnsembleObservable::spectrum: {
            const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
            return broaden(stick_spectrum(eig, options.probe_site), options.fwhm_khz, grid).intensity;
        }
        }
        return {};
    };

    EnsembleStatistics stats;
    stats.n_samples = n_samples;
    std::vector<double> m2;
    for (int s = 0; s < n_samples; ++s) {
        const std::vector<double> x = evaluate(static_cast<std::uint64_t>(s));
        if (s == 0) {
            stats.mean.assign(x.size(), 0.0);
            m2.assign(x.size(), 0.0);
        }
        for (std::size_t e = 0; e < x.size(); ++e) {
            const double delta = x[e] - stats.mean[e];
            stats.mean[e] += delta / static_cast<double>(s + 1);
            m2[e] += delta * (x[e] - stats.mean[e]);
        }
    }
    stats.stddev.resize(m2.size());
    for (std::size_t e = 0; e < m2.size(); ++e)
        stats.stddev[e] = std::sqrt(m2[e] / static_cast<double>(n_samples - 1));
    return stats;
}

} // namespace sshchain
