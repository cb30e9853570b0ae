#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "sshchain/dynamics.hpp"

using namespace sshchain;
using Catch::Approx;

namespace {

constexpr double pi = 3.14159265358979323846;

ChainSpec random_spec(std::mt19937_64& rng, int max_cells = 5)
{
    std::uniform_int_distribution<int> cells(1, max_cells);
    std::uniform_real_distribution<double> rate(0.0, 1000.0);
    return make_chain(cells(rng), rate(rng), rate(rng));
}

} // namespace

TEST_CASE("evolve: t = 0 row is the initial-site indicator")
{
    const QuenchTrajectory traj = evolve(make_chain(3, 321.0, 654.0), 5, 1.0, 0.5);
    for (int i = 0; i < 6; ++i)
        REQUIRE(traj.populations[0][static_cast<std::size_t>(i)] == Approx(i == 4 ? 1.0 : 0.0).margin(1e-12));
}

TEST_CASE("evolve: two-level transfer follows the analytic oscillation")
{
    const QuenchTrajectory traj = evolve(make_chain(1, 160.0, 0.0), 1, 15.0, default_dt_us);
    double max_err = 0.0;
    for (int k = 0; k < traj.times_us.count; ++k) {
        const double t = traj.times_us.value(k);
        const double expected = std::pow(std::sin(2.0 * pi * 0.16 * t), 2);
        max_err = std::max(max_err, std::abs(traj.populations[static_cast<std::size_t>(k)][1] - expected));
    }
    REQUIRE(max_err < 1e-9);
    // full transfer at t = 1/(4J)
    const QuenchTrajectory quarter = evolve(make_chain(1, 160.0, 0.0), 1, 1.5625, 1.5625);
    REQUIRE(quarter.populations.back()[1] == Approx(1.0).margin(1e-12));
}

TEST_CASE("evolve: reflection symmetry of the uniform chain")
{
    const ChainSpec spec = make_chain(3, 400.0, 400.0);
    const QuenchTrajectory from4 = evolve(spec, 4, 10.0, 0.1);
    const QuenchTrajectory from3 = evolve(spec, 3, 10.0, 0.1);
    for (int k = 0; k < from4.times_us.count; ++k)
        for (int i = 0; i < 6; ++i)
            REQUIRE(from4.populations[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                    == Approx(from3.populations[static_cast<std::size_t>(k)][static_cast<std::size_t>(5 - i)])
                           .margin(1e-12));
}

TEST_CASE("evolve: unitarity and population bounds over random specs")
{
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 25; ++trial) {
        ChainSpec spec = random_spec(rng);
        std::uniform_int_distribution<int> site(1, spec.n_sites());
        const QuenchTrajectory traj = evolve(spec, site(rng), 5.0, 0.25);
        for (const auto& row : traj.populations) {
            double sum = 0.0;
            for (double p : row) {
                REQUIRE(p >= 0.0);
                REQUIRE(p <= 1.0 + 1e-12);
                sum += p;
            }
            REQUIRE(sum == Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("evolve: forward then backward propagation restores the start")
{
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const ChainSpec spec = random_spec(rng);
        const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
        std::uniform_int_distribution<int> site(1, spec.n_sites());
        const int init = site(rng);
        std::vector<std::complex<double>> psi(static_cast<std::size_t>(spec.n_sites()), 0.0);
        psi[static_cast<std::size_t>(init - 1)] = 1.0;
        const auto forward = evolve_amplitudes(eig, psi, 7.3);
        const auto back = evolve_amplitudes(eig, forward, -7.3);
        REQUIRE(std::norm(back[static_cast<std::size_t>(init - 1)]) == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("evolve: argument validation")
{
    const ChainSpec spec = make_chain(2, 10.0, 10.0);
    REQUIRE_THROWS_AS(evolve(spec, 0, 1.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(evolve(spec, 5, 1.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(evolve(spec, 1, 1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(evolve(spec, 1, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("chiral displacement: conventions at t = 0")
{
    const QuenchTrajectory traj = evolve(make_chain(3, 160.0, 800.0), 4, 2.0, 0.1);
    const ChiralSeries relative = chiral_displacement(traj, ChiralConvention::relative);
    REQUIRE(relative.origin_cell == 2);
    REQUIRE(relative.c_of_t[0] == Approx(0.0).margin(1e-11));
    REQUIRE(relative.c_bar[0] == relative.c_of_t[0]);

    const ChiralSeries literal = chiral_displacement(traj, ChiralConvention::literal_eq4);
    REQUIRE(literal.origin_cell == 0);
    REQUIRE(literal.c_of_t[0] == Approx(-4.0).margin(1e-10));
}

TEST_CASE("chiral displacement: cumulative average is the trapezoidal mean")
{
    const QuenchTrajectory traj = evolve(make_chain(3, 700.0, 300.0), 3, 3.0, 0.05);
    const ChiralSeries series = chiral_displacement(traj, ChiralConvention::relative);
    double integral = 0.0;
    for (std::size_t k = 1; k < series.times_us.size(); ++k) {
        integral += 0.5 * (series.c_of_t[k] + series.c_of_t[k - 1])
                    * (series.times_us[k] - series.times_us[k - 1]);
        REQUIRE(series.c_bar[k] == Approx(integral / series.times_us[k]).margin(1e-12));
    }
}

TEST_CASE("chiral displacement: operator-norm bounds")
{
    for (const auto& [j1, j2] : {std::pair{160.0, 800.0}, std::pair{800.0, 160.0}}) {
        const QuenchTrajectory traj = evolve(make_chain(3, j1, j2), 4, 15.0, 0.05);
        const ChiralSeries relative = chiral_displacement(traj, ChiralConvention::relative);
        const ChiralSeries literal = chiral_displacement(traj, ChiralConvention::literal_eq4);
        for (std::size_t k = 0; k < relative.c_of_t.size(); ++k) {
            REQUIRE(std::abs(relative.c_of_t[k]) <= 2.0 + 1e-9); // origin at the interior cell
            REQUIRE(std::abs(literal.c_of_t[k]) <= 6.0 + 1e-9);
        }
    }
    // edge-cell origin: bound 2*(N-1)
    const QuenchTrajectory traj = evolve(make_chain(3, 500.0, 500.0), 1, 15.0, 0.05);
    const ChiralSeries series = chiral_displacement(traj, ChiralConvention::relative);
    for (double c : series.c_of_t)
        REQUIRE(std::abs(c) <= 4.0 + 1e-9);
}

TEST_CASE("diagonal ensemble: a frozen state never moves")
{
    const EigenSystem eig = eigendecompose(build_hamiltonian(make_chain(3, 0.0, 0.0)));
    const SiteOperator obs = chiral_position_observable(3, 2);
    REQUIRE(diagonal_ensemble_average(eig, 4, obs) == Approx(0.0).margin(1e-12));
}

TEST_CASE("diagonal ensemble: single cell has zero relative displacement")
{
    const EigenSystem eig = eigendecompose(build_hamiltonian(make_chain(1, 160.0, 0.0)));
    const SiteOperator obs = chiral_position_observable(1, 1);
    REQUIRE(diagonal_ensemble_average(eig, 1, obs) == Approx(0.0).margin(1e-12));
}

TEST_CASE("diagonal ensemble: relative and absolute origins agree in the long-time limit")
{
    std::mt19937_64 rng(61);
    int checked = 0;
    while (checked < 15) {
        const ChainSpec spec = random_spec(rng);
        const EigenSystem eig = eigendecompose(build_hamiltonian(spec));
        // the equivalence requires a nondegenerate spectrum
        bool nondegenerate = true;
        for (int b = 1; b < eig.dim; ++b)
            if (eig.eigenvalues[static_cast<std::size_t>(b)] - eig.eigenvalues[static_cast<std::size_t>(b - 1)]
                < 1e-5)
                nondegenerate = false;
        if (!nondegenerate)
            continue;
        std::uniform_int_distribution<int> site(1, spec.n_sites());
        const int init = site(rng);
        const SiteOperator relative = chiral_position_observable(spec.n_cells, cell_of_site(init));
        const SiteOperator absolute = chiral_position_observable(spec.n_cells, 0);
        REQUIRE(diagonal_ensemble_average(eig, init, relative)
                == Approx(diagonal_ensemble_average(eig, init, absolute)).margin(1e-9));
        ++checked;
    }
}

TEST_CASE("winding estimate: phase plateaus and crossover behavior")
{
    REQUIRE(winding_estimate(make_chain(3, 160.0, 800.0), 4) > 0.7);
    REQUIRE(std::abs(winding_estimate(make_chain(3, 800.0, 160.0), 4)) < 0.15);

    SECTION("settled past the weak-tunneling time")
    {
        for (const auto& [j1, j2] : {std::pair{160.0, 800.0}, std::pair{800.0, 160.0}}) {
            const QuenchTrajectory traj = evolve(make_chain(3, j1, j2), 4, 15.0, default_dt_us);
            const ChiralSeries series = chiral_displacement(traj, ChiralConvention::relative);
            const double final_value = series.c_bar.back();
            for (std::size_t k = 0; k < series.times_us.size(); ++k)
                if (series.times_us[k] >= 10.0)
                    REQUIRE(std::abs(series.c_bar[k] - final_value) < 0.1);
        }
    }
    SECTION("warns when the averaging window is too short")
    {
        std::string warning;
        winding_estimate(make_chain(3, 1.0, 2.0), 4, 15.0, &warning); // tau_w = 1000 us
        REQUIRE_FALSE(warning.empty());
        winding_estimate(make_chain(3, 800.0, 160.0), 4, 15.0, &warning);
        REQUIRE(warning.empty());
    }
}

TEST_CASE("ideal winding")
{
    REQUIRE(ideal_winding(160.0, 800.0) == 1);
    REQUIRE(ideal_winding(800.0, 160.0) == 0);
    REQUIRE(ideal_winding(400.0, 400.0) == 0); // boundary maps to the trivial side
    REQUIRE_THROWS_AS(ideal_winding(0.0, 0.0), std::invalid_argument);
}
