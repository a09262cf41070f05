#pragma once
/*
 * Semi-analytic eigensolver for L = d^2/dz^2 + alpha(z)^2 I with Dirichlet
 * conditions on [0, pi] and piecewise-constant alpha.
 *
 * Each eigenfunction is, piece by piece,
 *     V(z) = A_i cos(omega_i z) + B_i sin(omega_i z),
 * with lambda = alpha_i^2 - omega_i^2 in every piece. Boundary and interface
 * conditions form a homogeneous block system; eliminating the block
 * structure reduces the eigenvalue condition to a scalar root problem in
 * omega_n, solved by secant refinement from two seed regimes:
 *   - j <= J: eigenvalues of the restricted sine-basis matrix L_0,
 *   - j >  J: the Rayleigh quotient of sin(jz) under L,
 * where the cutoff J comes from the sine-approximation error E_j.
 *
 * Cost per eigenpair is O(n) in the piece count and independent of any grid.
 */
#include <complex>
#include <utility>
#include <vector>

#include "oneway/model.hpp"

namespace oneway {

using cplx = std::complex<double>;

/// One computed eigenpair. Coefficients satisfy A_1 = 0 (Dirichlet at z = 0)
/// and |B_1| = 1 (null-space normalization x_1 = 1 up to the phase that makes
/// the eigenfunction real-valued; B_1 = 1 exactly when the first piece is
/// oscillatory).
struct EigenMode {
    int index = 0;                         // 1-based position, lambda descending
    double lambda = 0.0;                   // eigenvalue
    std::vector<cplx> omegas;              // per-piece frequencies, principal branch
    std::vector<std::pair<cplx, cplx>> coeffs;  // per-piece (A_i, B_i)
    std::vector<double> bounds;            // piece boundaries s_0..s_n
    double norm_sq = 0.0;                  // <V, V> from the closed form

    /// Pointwise value V(z); piecewise trigonometric, complex arithmetic
    /// realizes the hyperbolic regime automatically.
    cplx eval(double z) const;

    /// Pointwise derivative V'(z).
    cplx eval_deriv(double z) const;
};

/// Per-mode convergence evidence.
struct ModeDiagnostics {
    int secant_iters = 0;       // iterations spent by the accepted refinement
    double det_residual = 0.0;  // |reduced determinant| at the accepted root
};

/// Result of compute_spectrum: modes sorted by strictly decreasing lambda.
struct SpectrumResult {
    std::vector<EigenMode> modes;
    int cutoff_J = 0;  // indices 1..cutoff_J were seeded from the restricted matrix
    std::vector<ModeDiagnostics> diagnostics;  // parallel to modes
};

// ---------------------------------------------------------------------------
// seeding
// ---------------------------------------------------------------------------

/// Rayleigh quotient of sin(jz) under L: -j^2 + (2/pi) * Y_j with
/// Y_j = sum_v alpha_v^2 * I_v(j) over pieces. Exact for constant alpha.
double rayleigh_guess(const PiecewiseWavenumber& pw, int j);

/// Restricted sine-basis matrix L_0 (J x J, row-major): diagonal entries
/// -i^2 + (2/pi) Y_i, off-diagonal (2/pi) X_{ij}; symmetric to round-off.
std::vector<double> restricted_matrix(const PiecewiseWavenumber& pw, int J);

/// Eigendecomposition of a small dense symmetric matrix by cyclic Jacobi
/// rotations. Values descending; vectors column-major (column k pairs with
/// values[k]), orthonormal to 1e-10. Throws NotSymmetric / NoConvergence.
struct SymmetricEig {
    std::vector<double> values;   // descending
    std::vector<double> vectors;  // n x n, column-major
};
SymmetricEig small_symmetric_eig(const std::vector<double>& M, int n);

/// Relative sine-approximation error E_j in [0, 1]; 0 when sin(jz) is an
/// exact eigenfunction (degenerate 0/0 included).
double sine_approx_error(const PiecewiseWavenumber& pw, int j);

/// Largest j <= j_max with E_j > threshold, or 0 if none.
int cutoff_index(const PiecewiseWavenumber& pw, int j_max, double threshold);

// ---------------------------------------------------------------------------
// root condition
// ---------------------------------------------------------------------------

/// Principal square root of (alpha_i^2 - lambda): real >= 0 in the
/// oscillatory regime, positive-imaginary in the hyperbolic regime.
cplx omega_of_lambda(double lambda, double alpha_i);

/// Scalar root function: the reduced determinant -B D^{-1} C of the interface
/// block system, evaluated by 2x2-block forward substitution (never an
/// explicit inverse). The first column is scaled by 1/omega_1 so the result
/// is an entire, even function of every omega_i; roots are unchanged. For a
/// constant coefficient this reduces to sin(pi*omega)/omega.
/// Throws SingularBlock when some inner |omega_i| < 1e-14.
cplx reduced_determinant(const PiecewiseWavenumber& pw, cplx omega_n);

/// det(D) assembled from the full 4x4 block (3-piece profiles only), for the
/// identity det(D) = omega_2 * omega_3. Throws WrongPieceCount if n != 3.
cplx det_D_check(const PiecewiseWavenumber& pw, cplx omega_n);

/// Secant refinement of reduced_determinant starting at omega0 and
/// omega0*(1 + perturbation) (+ perturbation when omega0 == 0). Converged
/// when the last step and the residual are both small relative to |omega|.
/// Throws NoConvergence / DivergedToNaN / SingularBlock.
cplx secant_root(const PiecewiseWavenumber& pw, cplx omega0,
                 const SolverConfig& cfg, ModeDiagnostics* diag = nullptr);

/// Null-space vector (B_1, A_2, B_2, ..., A_n, B_n) with B_1 = 1, by the same
/// block forward substitution. omega_n must be a converged root.
std::vector<cplx> null_space_coeffs(const PiecewiseWavenumber& pw, cplx omega_n);

/// Builds the full EigenMode at a converged root: canonical frequencies from
/// lambda, null-space coefficients, global phase chosen so the eigenfunction
/// is real-valued, closed-form squared norm.
EigenMode assemble_mode(const PiecewiseWavenumber& pw, int j, cplx omega_n);

/// Computes the first m eigenpairs: seeds (restricted matrix below the
/// cutoff, Rayleigh quotient above), secant refinement, duplicate-root
/// re-seeding with a bisection fallback. Throws SpectrumIncomplete.
SpectrumResult compute_spectrum(const PiecewiseWavenumber& pw, int m,
                                const SolverConfig& cfg);

}  // namespace oneway
