// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line with the measured numbers. Oracles used here (analytic
// spectra, characteristic-polynomial roots, long-time limits) are computed
// independently of the library code paths they check. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sshchain/disorder.hpp"
#include "sshchain/dynamics.hpp"
#include "sshchain/fitting.hpp"
#include "sshchain/io.hpp"
#include "sshchain/presets.hpp"
#include "sshchain/scenario.hpp"
#include "sshchain/spectra.hpp"

using namespace sshchain;

namespace {

constexpr double pi = 3.14159265358979323846;

struct Harness {
    int failures = 0;

    void report(int id, const char* name, bool pass, const std::string& detail)
    {
        std::printf("[%s] criterion %2d: %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
        std::fflush(stdout);
        if (!pass)
            ++failures;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...)
{
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

const std::vector<std::pair<double, double>>& rate_sets()
{
    static const std::vector<std::pair<double, double>> sets = {
        {160.0, 800.0}, {400.0, 800.0}, {400.0, 400.0}, {800.0, 400.0}, {800.0, 160.0}};
    return sets;
}

// ---------------------------------------------------------------------------

void criterion_1(Harness& h)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240901);
    std::uniform_int_distribution<int> cells(1, 8);
    std::uniform_real_distribution<double> rate(0.0, 1000.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        ChainSpec spec = make_chain(cells(rng), rate(rng), rate(rng));
        if (trial % 2 == 1) {
            std::vector<double> bonds(static_cast<std::size_t>(spec.n_bonds()));
            for (double& b : bonds)
                b = rate(rng);
            spec.bond_overrides_khz = std::move(bonds);
        }
        const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
        for (int b = 0; b < eig.dim; ++b)
            worst = std::max(worst, std::abs(eig.eigenvalues[static_cast<std::size_t>(b)]
                                             + eig.eigenvalues[static_cast<std::size_t>(eig.dim - 1 - b)]));
    }
    const double elapsed = seconds_since(t0);
    h.report(1, "chiral spectral symmetry", worst < 1e-9 && elapsed < 5.0,
             fmt("max |eps_k + eps_mirror| = %.3e kHz over 1000 randomized chains in %.2f s "
                 "(limits 1e-9, 5 s)",
                 worst, elapsed));
}

void criterion_2(Harness& h)
{
    const EigenSystem eig = eigendecompose(build_hamiltonian(make_chain(3, 400.0, 400.0)));
    std::vector<double> analytic;
    for (int k = 1; k <= 6; ++k)
        analytic.push_back(-2.0 * 400.0 * std::cos(k * pi / 7.0));
    std::sort(analytic.begin(), analytic.end());
    const double quoted[] = {-720.78, -498.79, -178.02, 178.02, 498.79, 720.78};
    double worst = 0.0;
    for (int b = 0; b < 6; ++b) {
        worst = std::max(worst, std::abs(eig.eigenvalues[static_cast<std::size_t>(b)]
                                         - analytic[static_cast<std::size_t>(b)]));
        worst = std::max(worst, std::abs(eig.eigenvalues[static_cast<std::size_t>(b)] - quoted[b]));
    }
    h.report(2, "uniform-chain eigenvalue oracle", worst < 0.01,
             fmt("max deviation from -2J cos(k pi/7) and the reference values = %.4f kHz (limit 0.01)",
                 worst));
}

void criterion_3(Harness& h)
{
    // Characteristic polynomial of the 6-site chain in x = lambda^2:
    //   x^3 - (3 J1^2 + 2 J2^2) x^2 + (3 J1^4 + 2 J1^2 J2^2 + J2^4) x - J1^6
    // The smallest root gives the middle eigenvalue pair +-lambda.
    const double j1 = 160.0, j2 = 800.0;
    const double a = j1 * j1, b = j2 * j2;
    const double c2 = -(3.0 * a + 2.0 * b);
    const double c1 = 3.0 * a * a + 2.0 * a * b + b * b;
    const double c0 = -a * a * a;
    auto poly = [&](double x) { return ((x + c2) * x + c1) * x + c0; };
    double lo = 0.0, hi = 100.0; // poly(0) < 0, poly(100) > 0, next root >> 100
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (poly(mid) < 0.0 ? lo : hi) = mid;
    }
    const double oracle_spacing = 2.0 * std::sqrt(0.5 * (lo + hi));

    const double gap = innermost_gap(make_chain(3, j1, j2));
    const bool match_oracle = std::abs(gap - oracle_spacing) < 1e-6;
    const bool match_value = std::abs(gap - 12.29) <= 0.02;

    // the pair is unresolvable at the 60-70 kHz linewidth: one maximum near zero
    const EigenSystem eig = eigendecompose(build_hamiltonian(make_chain(3, j1, j2)));
    const SpectrumTrace trace = broaden(stick_spectrum(eig, 1), 65.0, default_detuning_grid(eig, 65.0));
    int maxima_near_zero = 0;
    for (int k = 1; k + 1 < trace.detunings_khz.count; ++k)
        if (std::abs(trace.detunings_khz.value(k)) < 100.0
            && trace.intensity[static_cast<std::size_t>(k)] > trace.intensity[static_cast<std::size_t>(k - 1)]
            && trace.intensity[static_cast<std::size_t>(k)] > trace.intensity[static_cast<std::size_t>(k + 1)])
            ++maxima_near_zero;

    h.report(3, "edge-state splitting", match_oracle && match_value && maxima_near_zero == 1,
             fmt("middle-pair spacing %.4f kHz vs polynomial root %.4f (target 12.29 +/- 0.02); "
                 "%d peak resolved within 100 kHz of zero at 65 kHz width",
                 gap, oracle_spacing, maxima_near_zero));
}

void criterion_4(Harness& h)
{
    const QuenchTrajectory traj = evolve(make_chain(1, 160.0, 0.0), 1, 15.0, default_dt_us);
    double worst = 0.0;
    for (int k = 0; k < traj.times_us.count; ++k) {
        const double t = traj.times_us.value(k);
        const double expected = std::pow(std::sin(2.0 * pi * 0.16 * t), 2);
        worst = std::max(worst, std::abs(traj.populations[static_cast<std::size_t>(k)][1] - expected));
    }
    h.report(4, "two-level transfer oracle", worst < 1e-9,
             fmt("max |P_2(t) - sin^2(2 pi 0.16 t)| = %.3e over [0, 15] us (limit 1e-9)", worst));
}

void criterion_5(Harness& h)
{
    std::vector<double> estimates;
    for (const auto& [j1, j2] : rate_sets())
        estimates.push_back(winding_estimate(make_chain(3, j1, j2), 4, 15.0));

    const double topological = estimates.front();
    const double trivial = estimates.back();
    const bool plateau_1 = std::abs(topological - 1.0) <= 0.15;
    const bool plateau_0 = std::abs(trivial - 0.0) <= 0.15;
    bool monotone = true;
    for (std::size_t i = 1; i < estimates.size(); ++i)
        if (!(estimates[i] < estimates[i - 1]))
            monotone = false;

    std::string values;
    for (double v : estimates)
        values += (values.empty() ? "" : ", ") + fmt("%.4f", v);
    h.report(5, "winding plateaus and crossover", plateau_1 && plateau_0 && monotone,
             fmt("C_bar(15 us) = {%s} for ratios {0.2, 0.5, 1, 2, 5}; |%.4f - 1| = %.4f vs 0.15 (%s), "
                 "|%.4f| vs 0.15 (%s), strictly decreasing: %s",
                 values.c_str(), topological, std::abs(topological - 1.0), plateau_1 ? "ok" : "VIOLATED",
                 trivial, plateau_0 ? "ok" : "VIOLATED", monotone ? "yes" : "NO"));
}

void criterion_6(Harness& h)
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& [j1, j2] : rate_sets()) {
        const ChainSpec spec = make_chain(3, j1, j2);
        const double c_bar = winding_estimate(spec, 4, 500.0);
        const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
        const SiteOperator obs = chiral_position_observable(3, cell_of_site(4));
        const double diag = diagonal_ensemble_average(eig, 4, obs);
        worst = std::max(worst, std::abs(c_bar - diag));
    }
    const double elapsed = seconds_since(t0);
    h.report(6, "long-time oracle equivalence", worst < 0.01 && elapsed < 10.0,
             fmt("max |C_bar(500 us) - diagonal ensemble| = %.5f over the five rate sets in %.2f s "
                 "(limits 0.01, 10 s)",
                 worst, elapsed));
}

void criterion_7(Harness& h)
{
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> rate(1.0, 1000.0);
    double worst_edge = 0.0;
    bool gap_iff = true;
    for (int trial = 0; trial < 100; ++trial) {
        double j1 = rate(rng);
        double j2 = (trial % 10 == 0) ? j1 : rate(rng); // include exact critical points
        const BandStructure bands = band_structure(j1, j2, 2001);
        double min_e = bands.e_plus_khz.front(), max_e = min_e;
        for (double e : bands.e_plus_khz) {
            min_e = std::min(min_e, e);
            max_e = std::max(max_e, e);
        }
        worst_edge = std::max(worst_edge, std::abs(min_e - std::abs(j1 - j2)));
        worst_edge = std::max(worst_edge, std::abs(max_e - (j1 + j2)));
        const bool closed = min_e <= 1e-9;
        if (closed != (j1 == j2))
            gap_iff = false;
    }
    h.report(7, "infinite-lattice band edges", worst_edge < 1e-9 && gap_iff,
             fmt("max |band edge - formula| = %.3e kHz over 100 random rate pairs (limit 1e-9); "
                 "gap closes iff J1 = J2: %s",
                 worst_edge, gap_iff ? "yes" : "NO"));
}

void criterion_8(Harness& h)
{
    const EigenSystem eig = eigendecompose(build_hamiltonian(make_chain(3, 400.0, 400.0)));
    const StickSpectrum sticks = stick_spectrum(eig, 2);
    const SpectrumTrace trace = broaden(sticks, 65.0, default_detuning_grid(eig, 65.0));
    const LorentzianFit fit = fit_lorentzians(trace, seed_guesses(trace, 6));
    double worst_center = 0.0, worst_height = 0.0;
    for (int b = 0; b < 6; ++b) {
        worst_center = std::max(worst_center, std::abs(fit.centers_khz[static_cast<std::size_t>(b)]
                                                       - sticks.lines[static_cast<std::size_t>(b)].energy_khz));
        worst_height =
            std::max(worst_height, std::abs(fit.heights[static_cast<std::size_t>(b)]
                                            - sticks.lines[static_cast<std::size_t>(b)].weight)
                                       / sticks.lines[static_cast<std::size_t>(b)].weight);
    }
    h.report(8, "lorentzian fit round trip", fit.converged && worst_center <= 1.0 && worst_height <= 0.02,
             fmt("converged=%d, max |center - eps| = %.4f kHz (limit 1), max relative height error = %.4f "
                 "(limit 0.02)",
                 fit.converged ? 1 : 0, worst_center, worst_height));
}

void criterion_9(Harness& h)
{
    // unitarity across the five rate sets plus randomized chains
    double worst_sum = 0.0;
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> cells(1, 6);
    std::uniform_real_distribution<double> rate(0.0, 1000.0);
    auto scan = [&](const QuenchTrajectory& traj) {
        for (const auto& row : traj.populations) {
            double sum = 0.0;
            for (double p : row)
                sum += p;
            worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        }
    };
    for (const auto& [j1, j2] : rate_sets())
        scan(evolve(make_chain(3, j1, j2), 4, 15.0, default_dt_us));
    for (int trial = 0; trial < 50; ++trial) {
        const ChainSpec spec = make_chain(cells(rng), rate(rng), rate(rng));
        std::uniform_int_distribution<int> site(1, spec.n_sites());
        scan(evolve(spec, site(rng), 10.0, 0.1));
    }

    // byte-identical outputs for every shipped preset, run twice
    const auto base = std::filesystem::temp_directory_path() / "sshchain_acceptance";
    std::filesystem::remove_all(base);
    bool identical = true;
    std::string first_mismatch;
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    for (const Preset& preset : presets()) {
        const ScenarioConfig config = parse_scenario(nlohmann::json::parse(preset.json_text));
        const auto dir1 = base / (std::string(preset.name) + "_1");
        const auto dir2 = base / (std::string(preset.name) + "_2");
        const RunSummary s1 = run_scenario(config, dir1);
        const RunSummary s2 = run_scenario(config, dir2);
        for (const std::string& name : s1.outputs)
            if (slurp(dir1 / name) != slurp(dir2 / name)) {
                identical = false;
                first_mismatch = std::string(preset.name) + "/" + name;
            }
        // summaries must agree apart from the wall time
        auto j1 = nlohmann::json::parse(slurp(dir1 / (config.output_prefix + "_summary.json")));
        auto j2 = nlohmann::json::parse(slurp(dir2 / (config.output_prefix + "_summary.json")));
        j1.erase("wall_time_ms");
        j2.erase("wall_time_ms");
        if (j1 != j2) {
            identical = false;
            first_mismatch = std::string(preset.name) + "/summary";
        }
    }
    std::filesystem::remove_all(base);

    h.report(9, "unitarity and run determinism", worst_sum < 1e-9 && identical,
             fmt("max |row sum - 1| = %.3e (limit 1e-9); repeated preset runs byte-identical: %s%s",
                 worst_sum, identical ? "yes" : "NO",
                 first_mismatch.empty() ? "" : (" (" + first_mismatch + ")").c_str()));
}

void criterion_10(Harness& h)
{
    const ChainSpec base = make_chain(3, 160.0, 800.0);
    auto asymmetry = [](const ChainSpec& spec) {
        const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
        double a = 0.0;
        for (int b = 0; b < eig.dim; ++b)
            a = std::max(a, std::abs(eig.eigenvalues[static_cast<std::size_t>(b)]
                                     + eig.eigenvalues[static_cast<std::size_t>(eig.dim - 1 - b)]));
        return a;
    };

    DisorderModel bond_only;
    bond_only.sigma_j_khz = 20.0;
    bond_only.seed = 2025;
    double worst_bond = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s)
        worst_bond = std::max(worst_bond, asymmetry(sample_spec(base, bond_only, s)));

    DisorderModel detuning;
    detuning.sigma_u_khz = 50.0;
    detuning.seed = 2025;
    std::vector<double> asyms;
    for (std::uint64_t s = 0; s < 200; ++s)
        asyms.push_back(asymmetry(sample_spec(base, detuning, s)));
    std::sort(asyms.begin(), asyms.end());
    const double median = asyms[asyms.size() / 2];

    h.report(10, "disorder symmetry property", worst_bond < 1e-9 && median > 1.0,
             fmt("bond-only ensemble max asymmetry = %.3e kHz (limit 1e-9); detuning ensemble median "
                 "asymmetry = %.2f kHz (must exceed 1)",
                 worst_bond, median));
}

} // namespace

int main()
{
    Harness h;
    criterion_1(h);
    criterion_2(h);
    criterion_3(h);
    criterion_4(h);
    criterion_5(h);
    criterion_6(h);
    criterion_7(h);
    criterion_8(h);
    criterion_9(h);
    criterion_10(h);
    std::printf("%d of 10 criteria passed\n", 10 - h.failures);
    return h.failures;
}
