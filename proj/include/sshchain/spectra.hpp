#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sshchain/grid.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/linalg.hpp"

namespace sshchain {

/// Eigenvalues (ascending, kHz) and orthonormal eigenvectors of a chain
/// Hamiltonian. Eigenvectors are stored row-major with column b paired with
/// eigenvalues[b]; the first component of each vector whose magnitude exceeds
/// 1e-8 is made positive, and eigenvectors of near-degenerate eigenvalues
/// (within 1e-6 kHz) are re-orthonormalized by Gram-Schmidt in index order,
/// so the decomposition is deterministic.
struct EigenSystem {
    int dim = 0;
    std::vector<double> eigenvalues;
    std::vector<double> vectors; // row-major; component(i, b) = vectors[i*dim + b]

    double component(int site_index0, int b) const
    {
        return vectors[static_cast<std::size_t>(site_index0) * dim + b];
    }
};

inline constexpr double degeneracy_tol_khz = 1e-6;

inline EigenSystem eigendecompose(const HamiltonianMatrix& h)
{
    for (double v : h.entries)
        if (!std::isfinite(v))
            throw std::invalid_argument("hamiltonian: non-finite entry");

    const int n = h.dim;
    std::vector<double> evals;
    std::vector<double> vecs;
    linalg::jacobi_eigensymmetric(h.entries, n, evals, vecs);

    // Sort ascending; stable in the original column order for ties.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return evals[static_cast<std::size_t>(a)] < evals[static_cast<std::size_t>(b)]; });

    EigenSystem eig;
    eig.dim = n;
    eig.eigenvalues.resize(static_cast<std::size_t>(n));
    eig.vectors.resize(static_cast<std::size_t>(n) * n);
    for (int b = 0; b < n; ++b) {
        const int src = order[static_cast<std::size_t>(b)];
        eig.eigenvalues[static_cast<std::size_t>(b)] = evals[static_cast<std::size_t>(src)];
        for (int i = 0; i < n; ++i)
            eig.vectors[static_cast<std::size_t>(i) * n + b] = vecs[static_cast<std::size_t>(i) * n + src];
    }

    // Gram-Schmidt within degenerate blocks, in index order.
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n
               && eig.eigenvalues[static_cast<std::size_t>(end)] - eig.eigenvalues[static_cast<std::size_t>(end - 1)]
                      < degeneracy_tol_khz)
            ++end;
        if (end - start > 1) {
            for (int b = start; b < end; ++b) {
                for (int prev = start; prev < b; ++prev) {
                    double dot = 0.0;
                    for (int i = 0; i < n; ++i)
                        dot += eig.component(i, b) * eig.component(i, prev);
                    for (int i = 0; i < n; ++i)
                        eig.vectors[static_cast<std::size_t>(i) * n + b] -= dot * eig.component(i, prev);
                }
                double norm = 0.0;
                for (int i = 0; i < n; ++i)
                    norm += eig.component(i, b) * eig.component(i, b);
                norm = std::sqrt(norm);
                for (int i = 0; i < n; ++i)
                    eig.vectors[static_cast<std::size_t>(i) * n + b] /= norm;
            }
        }
        start = end;
    }

    // Sign convention: first component with magnitude > 1e-8 is positive.
    for (int b = 0; b < n; ++b) {
        for (int i = 0; i < n; ++i) {
            const double v = eig.component(i, b);
            if (std::abs(v) > 1e-8) {
                if (v < 0.0)
                    for (int k = 0; k < n; ++k)
                        eig.vectors[static_cast<std::size_t>(k) * n + b] = -eig.component(k, b);
                break;
            }
        }
    }
    return eig;
}

/// Spacing of the two middle eigenvalues, eps_{N+1} - eps_N >= 0; for a
/// symmetric spectrum this is twice the magnitude of either middle state.
/// Near zero in the edge-state regime J1 << J2, opens into a band gap past
/// J1 = J2.
inline double innermost_gap(const ChainSpec& spec)
{
    const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
    const int mid = eig.dim / 2;
    return eig.eigenvalues[static_cast<std::size_t>(mid)] - eig.eigenvalues[static_cast<std::size_t>(mid - 1)];
}

/// One line per eigenstate: its energy and the squared overlap of the probed
/// bare site with that eigenstate. Weights sum to 1 by completeness.
struct StickLine {
    double energy_khz = 0.0;
    double weight = 0.0;
};

struct StickSpectrum {
    int probe_site = 1; // 1-based
    std::vector<StickLine> lines;
};

inline StickSpectrum stick_spectrum(const EigenSystem& eig, int probe_site)
{
    if (probe_site < 1 || probe_site > eig.dim)
        throw std::invalid_argument("probe_site: must be in [1, " + std::to_string(eig.dim)
                                    + "], got " + std::to_string(probe_site));
    StickSpectrum sticks;
    sticks.probe_site = probe_site;
    sticks.lines.resize(static_cast<std::size_t>(eig.dim));
    for (int b = 0; b < eig.dim; ++b) {
        const double c = eig.component(probe_site - 1, b);
        sticks.lines[static_cast<std::size_t>(b)] = {eig.eigenvalues[static_cast<std::size_t>(b)], c * c};
    }
    return sticks;
}

// Unit-peak-height Lorentzian: value 1 at delta = 0, 1/2 at |delta| = fwhm/2.
inline double lorentzian_unit_height(double delta, double fwhm)
{
    const double u = 2.0 * delta / fwhm;
    return 1.0 / (1.0 + u * u);
}

/// Broadened excitation trace on a uniform detuning grid, arbitrary units.
struct SpectrumTrace {
    UniformGrid detunings_khz;
    std::vector<double> intensity;
    double fwhm_khz = 0.0;
};

// Default grid: 1 kHz spacing covering [eps_min - 3*fwhm, eps_max + 3*fwhm].
inline UniformGrid default_detuning_grid(const EigenSystem& eig, double fwhm_khz)
{
    const double lo = eig.eigenvalues.front() - 3.0 * fwhm_khz;
    const double hi = eig.eigenvalues.back() + 3.0 * fwhm_khz;
    UniformGrid grid;
    grid.start = lo;
    grid.step = 1.0;
    grid.count = static_cast<int>(std::ceil(hi - lo)) + 1;
    return grid;
}

inline SpectrumTrace broaden(const StickSpectrum& sticks, double fwhm_khz, const UniformGrid& grid)
{
    if (!(fwhm_khz > 0.0) || !std::isfinite(fwhm_khz))
        throw std::invalid_argument("fwhm_khz: must be finite and > 0");
    SpectrumTrace trace;
    trace.detunings_khz = grid;
    trace.fwhm_khz = fwhm_khz;
    trace.intensity.assign(static_cast<std::size_t>(grid.count), 0.0);
    for (int k = 0; k < grid.count; ++k) {
        const double d = grid.value(k);
        double sum = 0.0;
        for (const StickLine& line : sticks.lines)
            sum += line.weight * lorentzian_unit_height(d - line.energy_khz, fwhm_khz);
        trace.intensity[static_cast<std::size_t>(k)] = sum;
    }
    return trace;
}

/// Two-band dispersion of the infinitely long chain on a uniform quasimomentum
/// grid over [0, pi]: e_plus(k) = sqrt(J1^2 + J2^2 + 2 J1 J2 cos k),
/// e_minus = -e_plus. Band edges are |J1 - J2| (k = pi) and J1 + J2 (k = 0).
struct BandStructure {
    std::vector<double> k;
    std::vector<double> e_plus_khz;
    std::vector<double> e_minus_khz;
};

inline BandStructure band_structure(double j1_khz, double j2_khz, int n_k)
{
    if (n_k < 2)
        throw std::invalid_argument("n_k: must be >= 2, got " + std::to_string(n_k));
    BandStructure bands;
    bands.k.resize(static_cast<std::size_t>(n_k));
    bands.e_plus_khz.resize(static_cast<std::size_t>(n_k));
    bands.e_minus_khz.resize(static_cast<std::size_t>(n_k));
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n_k; ++i) {
        const double k = pi * (static_cast<double>(i) / static_cast<double>(n_k - 1));
        const double e2 = j1_khz * j1_khz + j2_khz * j2_khz + 2.0 * j1_khz * j2_khz * std::cos(k);
        const double e = std::sqrt(std::max(0.0, e2));
        bands.k[static_cast<std::size_t>(i)] = k;
        bands.e_plus_khz[static_cast<std::size_t>(i)] = e;
        bands.e_minus_khz[static_cast<std::size_t>(i)] = -e;
    }
    return bands;
}

} // namespace sshchain
