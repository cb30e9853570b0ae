#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sshchain::linalg {

// Frobenius norm of the strictly off-diagonal part.
inline double off_diagonal_norm(const std::vector<double>& a, int n)
{
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (p != q)
                s += a[static_cast<std::size_t>(p) * n + q] * a[static_cast<std::size_t>(p) * n + q];
    return std::sqrt(s);
}

inline double frobenius_norm(const std::vector<double>& a)
{
    double s = 0.0;
    for (double v : a)
        s += v * v;
    return std::sqrt(s);
}

/// Cyclic Jacobi diagonalization of a dense symmetric matrix (row-major).
///
/// Rotations sweep the (p, q), p < q pairs in fixed row-major order until the
/// off-diagonal Frobenius norm drops below 1e-12 times the matrix norm, so the
/// result is reproducible bit-for-bit for identical input. On return
/// `eigenvalues` holds the unsorted diagonal and `vectors` the accumulated
/// rotations, row-major with column b the eigenvector of eigenvalues[b].
inline void jacobi_eigensymmetric(std::vector<double> a, int n,
                                  std::vector<double>& eigenvalues,
                                  std::vector<double>& vectors)
{
    auto at = [n](std::vector<double>& m, int r, int c) -> double& {
        return m[static_cast<std::size_t>(r) * n + c];
    };

    vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        at(vectors, i, i) = 1.0;

    const double norm = frobenius_norm(a);
    const double threshold = 1e-12 * norm;
    constexpr int max_sweeps = 100;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a, n) <= threshold)
            break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (apq == 0.0)
                    continue;
                // Symmetric Schur decomposition of the 2x2 (p,q) block.
                const double tau = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(a, k, p);
                    const double akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(a, p, k);
                    const double aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = at(vectors, k, p);
                    const double vkq = at(vectors, k, q);
                    at(vectors, k, p) = c * vkp - s * vkq;
                    at(vectors, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps && off_diagonal_norm(a, n) > threshold)
        throw std::runtime_error("jacobi_eigensymmetric: no convergence in 100 sweeps");

    eigenvalues.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        eigenvalues[static_cast<std::size_t>(i)] = at(a, i, i);
}

/// Solves A x = b for symmetric positive definite A via in-place Cholesky.
/// Returns false (leaving b unspecified) when a non-positive pivot appears.
inline bool solve_spd(std::vector<double> a, int n, std::vector<double>& b)
{
    auto at = [n](std::vector<double>& m, int r, int c) -> double& {
        return m[static_cast<std::size_t>(r) * n + c];
    };
    for (int j = 0; j < n; ++j) {
        double d = at(a, j, j);
        for (int k = 0; k < j; ++k)
            d -= at(a, j, k) * at(a, j, k);
        if (!(d > 0.0) || !std::isfinite(d))
            return false;
        const double l = std::sqrt(d);
        at(a, j, j) = l;
        for (int i = j + 1; i < n; ++i) {
            double v = at(a, i, j);
            for (int k = 0; k < j; ++k)
                v -= at(a, i, k) * at(a, j, k);
            at(a, i, j) = v / l;
        }
    }
    // forward substitution L y = b
    for (int i = 0; i < n; ++i) {
        double v = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k)
            v -= at(a, i, k) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = v / at(a, i, i);
    }
    // back substitution L^T x = y
    for (int i = n - 1; i >= 0; --i) {
        double v = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k)
            v -= at(a, k, i) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = v / at(a, i, i);
    }
    return true;
}

} // namespace sshchain::linalg
