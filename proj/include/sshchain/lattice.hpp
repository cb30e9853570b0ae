#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sshchain {

/// Dimerized tight-binding chain with 2N sites and alternating bond rates.
///
/// All rates and energies are frequencies in kHz (energy divided by the
/// Planck constant); times elsewhere are microseconds. Site and bond indices
/// are 1-based in every public interface: bond n couples sites n and n+1 and
/// carries J1 for odd n, J2 for even n, unless overridden per bond.
struct ChainSpec {
    int n_cells = 1;
    double j_intra_khz = 0.0; // J1, bonds 1,3,5,...
    double j_inter_khz = 0.0; // J2, bonds 2,4,...
    std::optional<std::vector<double>> bond_overrides_khz; // 2N-1 entries when present
    std::vector<double> onsite_khz; // 2N entries; empty means all zero

    int n_sites() const { return 2 * n_cells; }
    int n_bonds() const { return 2 * n_cells - 1; }

    // Rate on bond n, 1-based.
    double bond_khz(int n) const
    {
        if (bond_overrides_khz)
            return (*bond_overrides_khz)[static_cast<std::size_t>(n - 1)];
        return (n % 2 == 1) ? j_intra_khz : j_inter_khz;
    }

    // On-site energy of site n, 1-based.
    double onsite_at(int n) const
    {
        return onsite_khz.empty() ? 0.0 : onsite_khz[static_cast<std::size_t>(n - 1)];
    }

    // Characteristic times 1/J in microseconds (J in kHz), weak and strong bond.
    double tau_weak_us() const
    {
        const double jw = std::min(j_intra_khz, j_inter_khz);
        return jw > 0.0 ? 1.0e3 / jw : std::numeric_limits<double>::infinity();
    }
    double tau_strong_us() const
    {
        const double js = std::max(j_intra_khz, j_inter_khz);
        return js > 0.0 ? 1.0e3 / js : std::numeric_limits<double>::infinity();
    }
};

inline ChainSpec make_chain(int n_cells, double j1_khz, double j2_khz)
{
    ChainSpec spec;
    spec.n_cells = n_cells;
    spec.j_intra_khz = j1_khz;
    spec.j_inter_khz = j2_khz;
    return spec;
}

/// Collects every constraint violation; empty result means the spec is valid.
inline std::vector<std::string> validate(const ChainSpec& spec)
{
    std::vector<std::string> issues;
    if (spec.n_cells < 1)
        issues.push_back("n_cells: must be >= 1, got " + std::to_string(spec.n_cells));
    if (!(spec.j_intra_khz >= 0.0) || !std::isfinite(spec.j_intra_khz))
        issues.push_back("j_intra_khz: must be finite and >= 0");
    if (!(spec.j_inter_khz >= 0.0) || !std::isfinite(spec.j_inter_khz))
        issues.push_back("j_inter_khz: must be finite and >= 0");
    if (spec.n_cells >= 1) {
        if (spec.bond_overrides_khz) {
            const auto& b = *spec.bond_overrides_khz;
            if (static_cast<int>(b.size()) != spec.n_bonds())
                issues.push_back("bond_overrides_khz: expected " + std::to_string(spec.n_bonds())
                                 + " entries, got " + std::to_string(b.size()));
            // Negative override rates are allowed (gauge-equivalent spectrum).
            for (double v : b)
                if (!std::isfinite(v)) {
                    issues.push_back("bond_overrides_khz: non-finite entry");
                    break;
                }
        }
        if (!spec.onsite_khz.empty()) {
            if (static_cast<int>(spec.onsite_khz.size()) != spec.n_sites())
                issues.push_back("onsite_khz: expected " + std::to_string(spec.n_sites())
                                 + " entries, got " + std::to_string(spec.onsite_khz.size()));
            for (double v : spec.onsite_khz)
                if (!std::isfinite(v)) {
                    issues.push_back("onsite_khz: non-finite entry");
                    break;
                }
        }
    }
    return issues;
}

inline void require_valid(const ChainSpec& spec)
{
    const auto issues = validate(spec);
    if (!issues.empty())
        throw std::invalid_argument(issues.front());
}

/// Real symmetric tridiagonal matrix in the site basis, stored dense
/// row-major. Diagonal holds the on-site energies, entry (n, n+1) = -J_{n,n+1};
/// mirrored entries are assigned from the same value, so the matrix is
/// symmetric bit-for-bit.
struct HamiltonianMatrix {
    int dim = 0;
    std::vector<double> entries; // dim*dim, row-major

    double at(int row, int col) const { return entries[static_cast<std::size_t>(row) * dim + col]; }

    double max_abs() const
    {
        double m = 0.0;
        for (double v : entries)
            m = std::max(m, std::abs(v));
        return m;
    }
};

inline HamiltonianMatrix build_hamiltonian(const ChainSpec& spec)
{
    require_valid(spec);
    const int n = spec.n_sites();
    HamiltonianMatrix h;
    h.dim = n;
    h.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 1; i <= n; ++i)
        h.entries[static_cast<std::size_t>(i - 1) * n + (i - 1)] = spec.onsite_at(i);
    for (int b = 1; b <= spec.n_bonds(); ++b) {
        const double v = -spec.bond_khz(b);
        h.entries[static_cast<std::size_t>(b - 1) * n + b] = v;
        h.entries[static_cast<std::size_t>(b) * n + (b - 1)] = v;
    }
    return h;
}

/// Operator diagonal in the site basis.
struct SiteOperator {
    int dim = 0;
    std::vector<double> diagonal;
};

/// +1 on sublattice A (odd sites 1,3,5,...), -1 on sublattice B (even sites).
inline SiteOperator chiral_operator(int n_cells)
{
    if (n_cells < 1)
        throw std::invalid_argument("n_cells: must be >= 1, got " + std::to_string(n_cells));
    SiteOperator op;
    op.dim = 2 * n_cells;
    op.diagonal.resize(static_cast<std::size_t>(op.dim));
    for (int i = 0; i < op.dim; ++i)
        op.diagonal[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
    return op;
}

/// Unit-cell position relative to origin_cell: sites 2m-1 and 2m both carry
/// m - origin_cell, m = 1..N.
inline SiteOperator cell_position_operator(int n_cells, int origin_cell)
{
    if (n_cells < 1)
        throw std::invalid_argument("n_cells: must be >= 1, got " + std::to_string(n_cells));
    if (origin_cell < 1 || origin_cell > n_cells)
        throw std::invalid_argument("origin_cell: must be in [1, " + std::to_string(n_cells)
                                    + "], got " + std::to_string(origin_cell));
    SiteOperator op;
    op.dim = 2 * n_cells;
    op.diagonal.resize(static_cast<std::size_t>(op.dim));
    for (int i = 0; i < op.dim; ++i) {
        const int m = i / 2 + 1;
        op.diagonal[static_cast<std::size_t>(i)] = static_cast<double>(m - origin_cell);
    }
    return op;
}

// Cell containing a 1-based site index.
inline int cell_of_site(int site) { return (site + 1) / 2; }

} // namespace sshchain
