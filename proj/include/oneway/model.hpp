#pragma once
/*
 * Domain types shared by every component: the piecewise-constant wavenumber
 * profile on the fixed interval [0, pi] and the solver configuration.
 *
 * All types are immutable value types after construction and safe to share
 * across threads.
 */
#include <vector>

#include "oneway/errors.hpp"

namespace oneway {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Piecewise-constant wavenumber profile: n positive values alpha_1..alpha_n
/// separated by interfaces at z = pi*rho_k with 0 < rho_1 < ... < rho_{n-1} < 1.
/// The implicit outer fractions are rho_0 = 0 and rho_n = 1.
struct PiecewiseWavenumber {
    std::vector<double> alphas;
    std::vector<double> rhos;

    PiecewiseWavenumber() = default;
    PiecewiseWavenumber(std::vector<double> alphas_, std::vector<double> rhos_)
        : alphas(std::move(alphas_)), rhos(std::move(rhos_)) {}

    /// Number of constant pieces, n >= 1.
    int pieces() const { return static_cast<int>(alphas.size()); }

    /// Piece boundary s_k = pi*rho_k for k = 0..n (s_0 = 0, s_n = pi).
    double boundary(int k) const {
        if (k <= 0) return 0.0;
        if (k >= pieces()) return kPi;
        return kPi * rhos[static_cast<std::size_t>(k - 1)];
    }

    /// All n+1 piece boundaries, ascending from 0 to pi.
    std::vector<double> boundaries() const {
        std::vector<double> s(static_cast<std::size_t>(pieces()) + 1);
        for (int k = 0; k <= pieces(); ++k) s[static_cast<std::size_t>(k)] = boundary(k);
        return s;
    }

    /// 0-based index of the piece containing z (right-continuous: an
    /// interface belongs to the piece on its right; z = pi maps to the last).
    int piece_index(double z) const {
        const int n = pieces();
        for (int i = 0; i < n - 1; ++i)
            if (z < boundary(i + 1)) return i;
        return n - 1;
    }
};

/// Throws NonPositiveAlpha / NonMonotoneInterfaces / InterfaceOutOfRange
/// (1-based indices) if any invariant fails; returns normally otherwise.
void validate(const PiecewiseWavenumber& pw);

/// alpha_i of the piece containing z; right-continuous at interfaces.
/// Throws DomainError for z outside [0, pi].
double alpha_at(const PiecewiseWavenumber& pw, double z);

/// Tunables for the eigensolver and expansion. Defaults give eigenpairs whose
/// error is dominated by round-off.
struct SolverConfig {
    double secant_tol = 1e-12;        // relative stop criterion on omega updates
    int secant_max_iter = 60;
    double secant_perturbation = 1e-3;  // second initial guess offset
    double cutoff_threshold = 1e-2;   // E_j threshold defining the cutoff J
    double truncation_tol = 3e-7;     // expansion tail tolerance
    int propagation_sign = +1;        // sign in the one-way propagator +-i*sqrt(L)
    int quadrature_panels = 2048;     // per-piece panels for verification quadrature
    int m_max = 512;                  // hard cap on expansion length
};

/// Throws std::invalid_argument if any SolverConfig invariant fails.
void validate(const SolverConfig& cfg);

}  // namespace oneway
