#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "sshchain/grid.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/spectra.hpp"

namespace sshchain {

// Default quench grid: 25+ samples per period of an 800 kHz rate, and the
// 15 us window exceeds both characteristic times of every rate set used here.
inline constexpr double default_dt_us = 0.05;
inline constexpr double default_t_max_us = 15.0;

/// Per-site populations P_i(t) after a quench from a single site.
struct QuenchTrajectory {
    int initial_site = 1; // 1-based
    int n_cells = 1;
    UniformGrid times_us;
    std::vector<std::vector<double>> populations; // [time][site]
};

/// Spectral propagation: the state amplitudes are
///   A_i(t) = sum_b V_ib V_(init)b exp(-i 2*pi * eps_b[kHz] * 1e-3 * t[us])
/// and P_i(t) = |A_i(t)|^2, exact to round-off for the time-independent chain.
/// The grid holds round(t_max/dt) + 1 samples starting at t = 0.
inline QuenchTrajectory evolve(const ChainSpec& spec, int initial_site,
                               double t_max_us, double dt_us)
{
    require_valid(spec);
    const int n = spec.n_sites();
    if (initial_site < 1 || initial_site > n)
        throw std::invalid_argument("initial_site: must be in [1, " + std::to_string(n)
                                    + "], got " + std::to_string(initial_site));
    if (!(dt_us > 0.0) || !(dt_us <= t_max_us))
        throw std::invalid_argument("dt_us: must satisfy 0 < dt_us <= t_max_us");

    const EigenSystem eig = eigendecompose(build_hamiltonian(spec));

    QuenchTrajectory traj;
    traj.initial_site = initial_site;
    traj.n_cells = spec.n_cells;
    traj.times_us.start = 0.0;
    traj.times_us.step = dt_us;
    traj.times_us.count = static_cast<int>(std::lround(t_max_us / dt_us)) + 1;
    traj.populations.resize(static_cast<std::size_t>(traj.times_us.count));

    std::vector<double> overlap(static_cast<std::size_t>(n));
    std::vector<double> omega(static_cast<std::size_t>(n)); // rad/us
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int b = 0; b < n; ++b) {
        overlap[static_cast<std::size_t>(b)] = eig.component(initial_site - 1, b);
        omega[static_cast<std::size_t>(b)] = two_pi * eig.eigenvalues[static_cast<std::size_t>(b)] * 1e-3;
    }

    std::vector<std::complex<double>> phased(static_cast<std::size_t>(n));
    for (int k = 0; k < traj.times_us.count; ++k) {
        const double t = traj.times_us.value(k);
        for (int b = 0; b < n; ++b) {
            const double angle = -omega[static_cast<std::size_t>(b)] * t;
            phased[static_cast<std::size_t>(b)] =
                overlap[static_cast<std::size_t>(b)] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        auto& row = traj.populations[static_cast<std::size_t>(k)];
        row.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::complex<double> amp = 0.0;
            for (int b = 0; b < n; ++b)
                amp += eig.component(i, b) * phased[static_cast<std::size_t>(b)];
            row[static_cast<std::size_t>(i)] = std::norm(amp);
        }
    }
    return traj;
}

/// One propagation step psi(t) = U(t) psi(0) in the site basis; t may be
/// negative (reverse evolution).
inline std::vector<std::complex<double>> evolve_amplitudes(const EigenSystem& eig,
                                                           const std::vector<std::complex<double>>& psi0,
                                                           double t_us)
{
    if (static_cast<int>(psi0.size()) != eig.dim)
        throw std::invalid_argument("psi0: dimension mismatch");
    const int n = eig.dim;
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<std::complex<double>> in_eigenbasis(static_cast<std::size_t>(n), 0.0);
    for (int b = 0; b < n; ++b) {
        std::complex<double> c = 0.0;
        for (int i = 0; i < n; ++i)
            c += eig.component(i, b) * psi0[static_cast<std::size_t>(i)];
        const double angle = -two_pi * eig.eigenvalues[static_cast<std::size_t>(b)] * 1e-3 * t_us;
        in_eigenbasis[static_cast<std::size_t>(b)] = c * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    std::vector<std::complex<double>> psi(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        std::complex<double> amp = 0.0;
        for (int b = 0; b < n; ++b)
            amp += eig.component(i, b) * in_eigenbasis[static_cast<std::size_t>(b)];
        psi[static_cast<std::size_t>(i)] = amp;
    }
    return psi;
}

enum class ChiralConvention {
    relative,    // cell positions measured from the initial site's cell
    literal_eq4, // absolute cell labels m = 1..N
};

inline const char* to_string(ChiralConvention c)
{
    return c == ChiralConvention::relative ? "relative" : "literal-eq4";
}

/// Diagonal of the chiral-position observable 2*Gamma*(m - origin_cell);
/// origin_cell = 0 keeps absolute cell labels.
inline SiteOperator chiral_position_observable(int n_cells, int origin_cell)
{
    SiteOperator gamma = chiral_operator(n_cells);
    SiteOperator op;
    op.dim = gamma.dim;
    op.diagonal.resize(static_cast<std::size_t>(op.dim));
    for (int i = 0; i < op.dim; ++i) {
        const int m = i / 2 + 1;
        op.diagonal[static_cast<std::size_t>(i)] =
            2.0 * gamma.diagonal[static_cast<std::size_t>(i)] * static_cast<double>(m - origin_cell);
    }
    return op;
}

/// Mean chiral displacement C(t) = 2<Gamma*(m - m0)>(t) and its cumulative
/// (trapezoidal) time average C_bar(t), with C_bar(0) = C(0).
struct ChiralSeries {
    std::vector<double> times_us;
    std::vector<double> c_of_t;
    std::vector<double> c_bar;
    int origin_cell = 0;
    ChiralConvention convention = ChiralConvention::relative;
};

inline ChiralSeries chiral_displacement(const QuenchTrajectory& traj, ChiralConvention convention)
{
    const int origin = convention == ChiralConvention::relative ? cell_of_site(traj.initial_site) : 0;
    const SiteOperator obs = chiral_position_observable(traj.n_cells, origin);

    ChiralSeries series;
    series.origin_cell = origin;
    series.convention = convention;
    series.times_us = traj.times_us.values();
    const std::size_t n_t = series.times_us.size();
    series.c_of_t.resize(n_t);
    for (std::size_t k = 0; k < n_t; ++k) {
        double c = 0.0;
        for (int i = 0; i < obs.dim; ++i)
            c += obs.diagonal[static_cast<std::size_t>(i)] * traj.populations[k][static_cast<std::size_t>(i)];
        series.c_of_t[k] = c;
    }
    series.c_bar.resize(n_t);
    series.c_bar[0] = series.c_of_t[0];
    double integral = 0.0;
    for (std::size_t k = 1; k < n_t; ++k) {
        integral += 0.5 * (series.c_of_t[k] + series.c_of_t[k - 1]) * (series.times_us[k] - series.times_us[k - 1]);
        series.c_bar[k] = integral / series.times_us[k];
    }
    return series;
}

/// Infinite-time average of a site-diagonal observable after a quench:
/// sum over projectors onto eigenvalue groups degenerate within 1e-6 kHz,
///   sum_g Tr(P_g rho0 P_g O),
/// which reduces to sum_b |V_(init)b|^2 <b|O|b> for a nondegenerate spectrum.
inline double diagonal_ensemble_average(const EigenSystem& eig, int initial_site, const SiteOperator& observable)
{
    if (initial_site < 1 || initial_site > eig.dim)
        throw std::invalid_argument("initial_site: must be in [1, " + std::to_string(eig.dim)
                                    + "], got " + std::to_string(initial_site));
    if (observable.dim != eig.dim)
        throw std::invalid_argument("observable: dimension mismatch");

    double value = 0.0;
    int start = 0;
    while (start < eig.dim) {
        int end = start + 1;
        while (end < eig.dim
               && eig.eigenvalues[static_cast<std::size_t>(end)] - eig.eigenvalues[static_cast<std::size_t>(end - 1)]
                      < degeneracy_tol_khz)
            ++end;
        for (int b = start; b < end; ++b) {
            for (int bp = start; bp < end; ++bp) {
                double obb = 0.0;
                for (int i = 0; i < eig.dim; ++i)
                    obb += eig.component(i, b) * observable.diagonal[static_cast<std::size_t>(i)] * eig.component(i, bp);
                value += eig.component(initial_site - 1, b) * eig.component(initial_site - 1, bp) * obb;
            }
        }
        start = end;
    }
    return value;
}

/// C_bar(t_avg) under the relative convention on the default time grid.
/// Warns (without failing) when t_avg does not exceed both characteristic
/// times of the spec.
inline double winding_estimate(const ChainSpec& spec, int initial_site,
                               double t_avg_us = default_t_max_us,
                               std::string* warning = nullptr)
{
    if (warning) {
        warning->clear();
        if (!(t_avg_us > spec.tau_weak_us()) || !(t_avg_us > spec.tau_strong_us()))
            *warning = "t_avg_us (" + std::to_string(t_avg_us)
                       + ") does not exceed the characteristic times tau_w/tau_s of the spec";
    }
    const double dt = std::min(default_dt_us, t_avg_us);
    const QuenchTrajectory traj = evolve(spec, initial_site, t_avg_us, dt);
    const ChiralSeries series = chiral_displacement(traj, ChiralConvention::relative);
    return series.c_bar.back();
}

/// Winding number of the infinitely long chain: 1 for J1 < J2 (topological),
/// 0 otherwise; the J1 = J2 boundary maps to 0 by convention.
inline int ideal_winding(double j1_khz, double j2_khz)
{
    if (!(j1_khz >= 0.0) || !(j2_khz >= 0.0))
        throw std::invalid_argument("ideal_winding: rates must be >= 0");
    if (j1_khz == 0.0 && j2_khz == 0.0)
        throw std::invalid_argument("ideal_winding: rates must not both be zero");
    return j1_khz < j2_khz ? 1 : 0;
}

} // namespace sshchain
