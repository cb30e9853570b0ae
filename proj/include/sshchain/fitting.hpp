#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sshchain/linalg.hpp"
#include "sshchain/spectra.hpp"

namespace sshchain {

/// Multi-Lorentzian model with one shared width:
///   model(d) = sum_p height_p / (1 + (2 (d - center_p) / fwhm)^2)
/// Heights are unit-peak-height amplitudes; with a shared width, height
/// ratios equal area ratios, so heights double as line strengths.
struct LorentzianFit {
    std::vector<double> centers_khz; // ascending in returned fits
    std::vector<double> heights;     // >= 0
    double shared_fwhm_khz = 1.0;    // > 0
    double residual_rms = 0.0;
    bool converged = false;
    int iterations = 0;
    bool underdetermined = false; // set by seeding when maxima ran out
};

struct FitOptions {
    int max_iter = 200;
    double tol = 1e-10;    // relative residual improvement
    double step_tol = 1e-8;
    double max_damping = 1e12;
};

namespace detail {

inline double fit_model(const std::vector<double>& centers, const std::vector<double>& heights,
                        double fwhm, double d)
{
    double sum = 0.0;
    for (std::size_t p = 0; p < centers.size(); ++p)
        sum += heights[p] * lorentzian_unit_height(d - centers[p], fwhm);
    return sum;
}

inline double sum_squared_residuals(const SpectrumTrace& trace, const std::vector<double>& centers,
                                    const std::vector<double>& heights, double fwhm)
{
    double sse = 0.0;
    for (int g = 0; g < trace.detunings_khz.count; ++g) {
        const double r = fit_model(centers, heights, fwhm, trace.detunings_khz.value(g))
                         - trace.intensity[static_cast<std::size_t>(g)];
        sse += r * r;
    }
    return sse;
}

// Local maxima with their topographic prominence: the peak height minus the
// higher of the two valley floors separating it from the nearest higher
// ground (or the grid ends).
struct Peak {
    int index = 0;
    double height = 0.0;
    double prominence = 0.0;
};

inline std::vector<Peak> find_peaks(const std::vector<double>& y)
{
    std::vector<Peak> peaks;
    const int n = static_cast<int>(y.size());
    for (int i = 1; i + 1 < n; ++i) {
        if (!(y[static_cast<std::size_t>(i)] > y[static_cast<std::size_t>(i - 1)]
              && y[static_cast<std::size_t>(i)] > y[static_cast<std::size_t>(i + 1)]))
            continue;
        const double h = y[static_cast<std::size_t>(i)];
        double left_floor = h;
        for (int j = i - 1; j >= 0; --j) {
            if (y[static_cast<std::size_t>(j)] > h)
                break;
            left_floor = std::min(left_floor, y[static_cast<std::size_t>(j)]);
        }
        double right_floor = h;
        for (int j = i + 1; j < n; ++j) {
            if (y[static_cast<std::size_t>(j)] > h)
                break;
            right_floor = std::min(right_floor, y[static_cast<std::size_t>(j)]);
        }
        peaks.push_back({i, h, h - std::max(left_floor, right_floor)});
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.prominence != b.prominence)
            return a.prominence > b.prominence;
        return a.index < b.index;
    });
    return peaks;
}

} // namespace detail

/// Initial guesses from the trace itself: centers at the n_peaks most
/// prominent local maxima, heights read off the trace, shared width from the
/// widest half-height crossing (clamped to [grid step, grid span]). When
/// fewer maxima exist, remaining centers are spread uniformly over the grid
/// span and the seed is flagged underdetermined.
inline LorentzianFit seed_guesses(const SpectrumTrace& trace, int n_peaks)
{
    if (n_peaks < 1)
        throw std::invalid_argument("n_peaks: must be >= 1, got " + std::to_string(n_peaks));
    if (trace.detunings_khz.count < 5 * n_peaks)
        throw std::invalid_argument("trace: needs at least 5*n_peaks grid points, got "
                                    + std::to_string(trace.detunings_khz.count));

    const UniformGrid& grid = trace.detunings_khz;
    const auto peaks = detail::find_peaks(trace.intensity);

    LorentzianFit seed;
    seed.iterations = 0;
    seed.converged = false;
    const int found = std::min<int>(n_peaks, static_cast<int>(peaks.size()));
    for (int p = 0; p < found; ++p) {
        seed.centers_khz.push_back(grid.value(peaks[static_cast<std::size_t>(p)].index));
        seed.heights.push_back(peaks[static_cast<std::size_t>(p)].height);
    }
    if (found < n_peaks) {
        seed.underdetermined = true;
        const int missing = n_peaks - found;
        for (int p = 0; p < missing; ++p) {
            const double frac = (static_cast<double>(p) + 1.0) / (static_cast<double>(missing) + 1.0);
            const double center = grid.front() + frac * grid.span();
            const int nearest = static_cast<int>(std::lround((center - grid.start) / grid.step));
            seed.centers_khz.push_back(center);
            seed.heights.push_back(trace.intensity[static_cast<std::size_t>(std::clamp(nearest, 0, grid.count - 1))]);
        }
    }

    // Widest half-height crossing among the seeded maxima.
    double widest = 0.0;
    for (int p = 0; p < found; ++p) {
        const int i = peaks[static_cast<std::size_t>(p)].index;
        const double half = peaks[static_cast<std::size_t>(p)].height / 2.0;
        int l = i;
        while (l > 0 && trace.intensity[static_cast<std::size_t>(l)] > half)
            --l;
        int r = i;
        while (r + 1 < grid.count && trace.intensity[static_cast<std::size_t>(r)] > half)
            ++r;
        widest = std::max(widest, grid.step * static_cast<double>(r - l));
    }
    seed.shared_fwhm_khz = std::clamp(widest, grid.step, grid.span());

    // Sort centers ascending, heights alongside.
    std::vector<std::size_t> order(seed.centers_khz.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return seed.centers_khz[a] < seed.centers_khz[b]; });
    LorentzianFit sorted = seed;
    for (std::size_t p = 0; p < order.size(); ++p) {
        sorted.centers_khz[p] = seed.centers_khz[order[p]];
        sorted.heights[p] = seed.heights[order[p]];
    }
    return sorted;
}

/// Damped least squares on the normal equations (Marquardt scaling of the
/// diagonal): minimizes the summed squared difference between the shared-width
/// multi-Lorentzian model and the trace. Heights and the width are iterated
/// in log space, which keeps them positive without constraints. Accepted
/// steps never increase the objective; when the damping exceeds
/// options.max_damping the best parameters so far are returned with
/// converged = false.
inline LorentzianFit fit_lorentzians(const SpectrumTrace& trace, const LorentzianFit& seed,
                                     const FitOptions& options = {})
{
    const int n_peaks = static_cast<int>(seed.centers_khz.size());
    if (n_peaks < 1 || seed.heights.size() != seed.centers_khz.size())
        throw std::invalid_argument("seed: needs matching centers and heights");
    if (!(seed.shared_fwhm_khz > 0.0))
        throw std::invalid_argument("seed: shared_fwhm_khz must be > 0");

    const int n_grid = trace.detunings_khz.count;
    const int n_par = 2 * n_peaks + 1; // centers, log-heights, log-width

    double max_intensity = 0.0;
    for (double v : trace.intensity)
        max_intensity = std::max(max_intensity, std::abs(v));
    const double height_floor = std::max(1e-12 * std::max(max_intensity, 1.0), 1e-300);

    std::vector<double> params(static_cast<std::size_t>(n_par));
    for (int p = 0; p < n_peaks; ++p) {
        params[static_cast<std::size_t>(p)] = seed.centers_khz[static_cast<std::size_t>(p)];
        params[static_cast<std::size_t>(n_peaks + p)] =
            std::log(std::max(seed.heights[static_cast<std::size_t>(p)], height_floor));
    }
    params[static_cast<std::size_t>(2 * n_peaks)] = std::log(seed.shared_fwhm_khz);

    auto unpack = [&](const std::vector<double>& th, std::vector<double>& centers,
                      std::vector<double>& heights, double& fwhm) {
        centers.resize(static_cast<std::size_t>(n_peaks));
        heights.resize(static_cast<std::size_t>(n_peaks));
        for (int p = 0; p < n_peaks; ++p) {
            centers[static_cast<std::size_t>(p)] = th[static_cast<std::size_t>(p)];
            heights[static_cast<std::size_t>(p)] = std::exp(th[static_cast<std::size_t>(n_peaks + p)]);
        }
        fwhm = std::exp(th[static_cast<std::size_t>(2 * n_peaks)]);
    };

    std::vector<double> centers, heights;
    double fwhm = 0.0;
    unpack(params, centers, heights, fwhm);
    double sse = detail::sum_squared_residuals(trace, centers, heights, fwhm);

    double damping = 1e-3;
    bool converged = false;
    int iterations = 0;

    std::vector<double> jtj(static_cast<std::size_t>(n_par) * n_par);
    std::vector<double> jtr(static_cast<std::size_t>(n_par));
    std::vector<double> row(static_cast<std::size_t>(n_par));

    for (int iter = 1; iter <= options.max_iter && !converged; ++iter) {
        iterations = iter;
        std::fill(jtj.begin(), jtj.end(), 0.0);
        std::fill(jtr.begin(), jtr.end(), 0.0);
        for (int g = 0; g < n_grid; ++g) {
            const double d = trace.detunings_khz.value(g);
            double model = 0.0;
            for (int p = 0; p < n_peaks; ++p) {
                const double u = 2.0 * (d - centers[static_cast<std::size_t>(p)]) / fwhm;
                const double denom = 1.0 + u * u;
                const double lor = 1.0 / denom;
                const double term = heights[static_cast<std::size_t>(p)] * lor;
                model += term;
                // d model / d center = h * 4u / (w (1+u^2)^2)
                row[static_cast<std::size_t>(p)] =
                    heights[static_cast<std::size_t>(p)] * 4.0 * u / (fwhm * denom * denom);
                // d model / d log h = h * L
                row[static_cast<std::size_t>(n_peaks + p)] = term;
                // d model / d log w accumulates below
            }
            double dlogw = 0.0;
            for (int p = 0; p < n_peaks; ++p) {
                const double u = 2.0 * (d - centers[static_cast<std::size_t>(p)]) / fwhm;
                const double denom = 1.0 + u * u;
                dlogw += heights[static_cast<std::size_t>(p)] * 2.0 * u * u / (denom * denom);
            }
            row[static_cast<std::size_t>(2 * n_peaks)] = dlogw;

            const double r = model - trace.intensity[static_cast<std::size_t>(g)];
            for (int a = 0; a < n_par; ++a) {
                jtr[static_cast<std::size_t>(a)] += row[static_cast<std::size_t>(a)] * r;
                for (int b = a; b < n_par; ++b)
                    jtj[static_cast<std::size_t>(a) * n_par + b] +=
                        row[static_cast<std::size_t>(a)] * row[static_cast<std::size_t>(b)];
            }
        }
        for (int a = 0; a < n_par; ++a)
            for (int b = 0; b < a; ++b)
                jtj[static_cast<std::size_t>(a) * n_par + b] = jtj[static_cast<std::size_t>(b) * n_par + a];

        // Try increasingly damped steps until one decreases the objective.
        bool accepted = false;
        while (!accepted) {
            std::vector<double> lhs = jtj;
            for (int a = 0; a < n_par; ++a) {
                double diag = jtj[static_cast<std::size_t>(a) * n_par + a];
                if (diag <= 0.0)
                    diag = 1.0; // flat direction; damp it absolutely
                lhs[static_cast<std::size_t>(a) * n_par + a] = diag * (1.0 + damping);
            }
            std::vector<double> step(static_cast<std::size_t>(n_par));
            for (int a = 0; a < n_par; ++a)
                step[static_cast<std::size_t>(a)] = -jtr[static_cast<std::size_t>(a)];
            if (!linalg::solve_spd(lhs, n_par, step)) {
                damping *= 10.0;
                if (damping > options.max_damping)
                    break;
                continue;
            }
            std::vector<double> trial = params;
            double step_norm = 0.0;
            for (int a = 0; a < n_par; ++a) {
                trial[static_cast<std::size_t>(a)] += step[static_cast<std::size_t>(a)];
                step_norm += step[static_cast<std::size_t>(a)] * step[static_cast<std::size_t>(a)];
            }
            step_norm = std::sqrt(step_norm);

            std::vector<double> trial_centers, trial_heights;
            double trial_fwhm = 0.0;
            unpack(trial, trial_centers, trial_heights, trial_fwhm);
            const double trial_sse =
                detail::sum_squared_residuals(trace, trial_centers, trial_heights, trial_fwhm);

            if (std::isfinite(trial_sse) && trial_sse <= sse) {
                const double improvement = sse - trial_sse;
                params = trial;
                centers = trial_centers;
                heights = trial_heights;
                fwhm = trial_fwhm;
                const double prev = sse;
                sse = trial_sse;
                damping = std::max(damping / 10.0, 1e-12);
                accepted = true;
                if (improvement < options.tol * std::max(prev, 1e-300) || step_norm < options.step_tol)
                    converged = true;
            } else {
                damping *= 10.0;
                if (damping > options.max_damping)
                    break;
            }
        }
        if (!accepted)
            break; // damping exhausted; report best so far
    }

    LorentzianFit fit;
    std::vector<std::size_t> order(static_cast<std::size_t>(n_peaks));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return centers[a] < centers[b]; });
    for (std::size_t p = 0; p < order.size(); ++p) {
        fit.centers_khz.push_back(centers[order[p]]);
        fit.heights.push_back(heights[order[p]]);
    }
    fit.shared_fwhm_khz = fwhm;
    fit.residual_rms = std::sqrt(sse / static_cast<double>(n_grid));
    fit.converged = converged;
    fit.iterations = iterations;
    fit.underdetermined = seed.underdetermined;
    return fit;
}

/// Fitted peak positions in units of J1, sorted ascending.
inline std::vector<double> eigenenergies_from_fit(const LorentzianFit& fit, double j1_khz)
{
    if (!(j1_khz > 0.0))
        throw std::invalid_argument("j1_khz: must be > 0");
    if (!fit.converged)
        throw std::invalid_argument("fit: not converged");
    std::vector<double> scaled;
    scaled.reserve(fit.centers_khz.size());
    for (double c : fit.centers_khz)
        scaled.push_back(c / j1_khz);
    std::sort(scaled.begin(), scaled.end());
    return scaled;
}

} // namespace sshchain
