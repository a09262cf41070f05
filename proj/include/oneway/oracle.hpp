#pragma once
/*
 * Verification stack independent of the eigensolver: finite-difference
 * discretization of d^2/dz^2 + alpha^2 on the interior grid, dense symmetric
 * eigendecompositions, the spectral square-root propagator, fine-grid
 * reference solutions, and the restriction-based error metric.
 */
#include <string>
#include <vector>

#include "oneway/expansion.hpp"
#include "oneway/model.hpp"

namespace oneway {

/// Grid values at z_i = i pi/(N+1), i = 1..N, at range r.
struct GridSolution {
    int N = 0;
    std::vector<cplx> values;
    double r = 0.0;
};

/// Symmetric tridiagonal discretization: diag entries plus the constant
/// off-diagonal 1/h^2.
struct FdMatrix {
    int N = 0;
    double h = 0.0;
    std::vector<double> diag;
    double off = 0.0;
};

/// Second-order scheme with Dirichlet ends. The potential entry at z_i is the
/// cell average (1/h) int_{z_i - h/2}^{z_i + h/2} alpha^2, which keeps the
/// scheme second order for any interface placement.
FdMatrix fd_matrix(const PiecewiseWavenumber& pw, int N);

/// Full eigendecomposition; values ascending, vectors column-major (column k
/// is the eigenvector of values[k]).
struct DenseEig {
    int N = 0;
    std::vector<double> values;
    std::vector<double> vectors;
};

/// Dense symmetric path (input row/column major agnostic by symmetry).
/// Throws NoConvergence if the LAPACK driver fails, NotSymmetric on
/// asymmetric input.
DenseEig dense_eig(const std::vector<double>& a, int N);

/// Tridiagonal path for the same decomposition.
DenseEig dense_eig(const FdMatrix& A);

/// Largest k eigenvalues of the tridiagonal matrix, descending, no vectors.
std::vector<double> fd_top_eigenvalues(const PiecewiseWavenumber& pw, int N, int k);

/// Q diag(e^{i sign sqrt(d_k) r}) Q^T with principal square roots; dense
/// complex N x N, row-major (the matrix is complex symmetric).
std::vector<cplx> spectral_propagator(const DenseEig& eig, double r, int sign);

/// Reference solution: the sampled initial data propagated by the exact
/// decomposition of fd_matrix(pw, N_ref). The propagator is applied in
/// factored form (Q^T, scale, Q); the dense matrix is never formed.
/// Decompositions are memoized in-process and optionally cached on disk.
/// Throws std::invalid_argument for N_ref > 8191 (memory guard).
GridSolution reference_solve(const PiecewiseWavenumber& pw, const InitialCondition& f,
                             int N_ref, double r, const std::string& cache_dir = "",
                             int sign = +1);

/// Same decomposition applied at several ranges.
std::vector<GridSolution> reference_solve_multi(const PiecewiseWavenumber& pw,
                                                const InitialCondition& f, int N_ref,
                                                const std::vector<double>& rs,
                                                const std::string& cache_dir = "",
                                                int sign = +1);

/// max_i |ref_{m(i)} - cand_i| / max_i |ref_{m(i)}| with the index map
/// m(i) = ((N_ref+1)/(N+1)) i. Throws IncompatibleGrids when (N_ref+1) is not
/// divisible by (N+1).
double relative_error(const GridSolution& candidate, const GridSolution& reference);

/*
 * Disk cache for fd_matrix decompositions, one file per (alphas, rhos, N)
 * key. Little-endian layout: magic "OWSPEC1\0", version byte, has_vectors
 * byte, key echo (int32 piece count, alphas, int32 interface count, rhos,
 * int32 N), N eigenvalues ascending, then N*N column-major vectors when
 * has_vectors is set. Vectors are stored only for N <= 2048; above that the
 * file keeps eigenvalues alone and callers that need the vectors recompute
 * the decomposition.
 */
std::string cache_file_name(const PiecewiseWavenumber& pw, int N);
bool cache_load(const std::string& dir, const PiecewiseWavenumber& pw, int N,
                DenseEig* out);
void cache_store(const std::string& dir, const PiecewiseWavenumber& pw, int N,
                 const DenseEig& eig);

}  // namespace oneway
