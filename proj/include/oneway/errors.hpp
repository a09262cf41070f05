#pragma once
/*
 * Error taxonomy shared by all components.
 *
 * Two families map onto the CLI exit codes:
 *   - configuration/domain errors derive from std::invalid_argument (exit 2)
 *   - numerical failures derive from NumericalError (exit 3)
 */
#include <complex>
#include <stdexcept>
#include <string>

namespace oneway {

// ---------------------------------------------------------------------------
// configuration / domain errors
// ---------------------------------------------------------------------------

/// Some alpha_i <= 0. `index` is the 1-based piece number.
class NonPositiveAlpha : public std::invalid_argument {
public:
    explicit NonPositiveAlpha(int index_)
        : std::invalid_argument("alpha[" + std::to_string(index_) +
                                "] must be positive"),
          index(index_) {}
    int index;
};

/// Interface fractions are not strictly increasing. `index` is the 1-based
/// number of the first interface that breaks monotonicity.
class NonMonotoneInterfaces : public std::invalid_argument {
public:
    explicit NonMonotoneInterfaces(int index_)
        : std::invalid_argument("rho[" + std::to_string(index_) +
                                "] breaks strict monotonicity"),
          index(index_) {}
    int index;
};

/// Some interface fraction lies outside (0, 1). 1-based index.
class InterfaceOutOfRange : public std::invalid_argument {
public:
    explicit InterfaceOutOfRange(int index_)
        : std::invalid_argument("rho[" + std::to_string(index_) +
                                "] must lie strictly inside (0, 1)"),
          index(index_) {}
    int index;
};

/// Evaluation point outside the domain [0, pi].
class DomainError : public std::out_of_range {
public:
    explicit DomainError(double z)
        : std::out_of_range("z = " + std::to_string(z) +
                            " outside the domain [0, pi]") {}
};

/// Matrix handed to small_symmetric_eig is not symmetric.
class NotSymmetric : public std::invalid_argument {
public:
    NotSymmetric() : std::invalid_argument("matrix is not symmetric") {}
};

/// det_D_check requires exactly three pieces.
class WrongPieceCount : public std::invalid_argument {
public:
    explicit WrongPieceCount(int n)
        : std::invalid_argument("operation requires a 3-piece coefficient, got " +
                                std::to_string(n) + " pieces") {}
};

/// Candidate/reference grids are incompatible: (N_ref+1) % (N+1) != 0.
class IncompatibleGrids : public std::invalid_argument {
public:
    IncompatibleGrids(int n_candidate, int n_reference)
        : std::invalid_argument("grid N=" + std::to_string(n_candidate) +
                                " does not divide reference N_ref=" +
                                std::to_string(n_reference) +
                                " ((N_ref+1) %% (N+1) != 0)") {}
};

// ---------------------------------------------------------------------------
// numerical failures
// ---------------------------------------------------------------------------

/// Base class for runtime numerical failures (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what_)
        : std::runtime_error(what_) {}
};

/// An iteration hit its cap without satisfying the stop criterion.
class NoConvergence : public NumericalError {
public:
    explicit NoConvergence(const std::string& where)
        : NumericalError("no convergence in " + where) {}
};

/// A secant step produced a non-finite iterate or determinant value.
class DivergedToNaN : public NumericalError {
public:
    DivergedToNaN() : NumericalError("secant iteration diverged to NaN/Inf") {}
};

/// Some per-piece frequency is numerically zero, so the 2x2 interface block
/// cannot be inverted. `piece` is 1-based. The caller perturbs and retries.
class SingularBlock : public NumericalError {
public:
    explicit SingularBlock(int piece_)
        : NumericalError("interface block for piece " + std::to_string(piece_) +
                         " is numerically singular (|omega| < 1e-14)"),
          piece(piece_) {}
    int piece;
};

/// compute_spectrum could not secure mode j after all re-seed attempts.
class SpectrumIncomplete : public NumericalError {
public:
    explicit SpectrumIncomplete(int j_)
        : NumericalError("spectrum incomplete: mode " + std::to_string(j_) +
                         " failed every re-seed attempt"),
          j(j_) {}
    int j;
};

/// A mode's closed-form squared norm came out non-positive.
class DegenerateNorm : public NumericalError {
public:
    explicit DegenerateNorm(int index_)
        : NumericalError("mode " + std::to_string(index_) +
                         " has non-positive squared norm"),
          index(index_) {}
    int index;
};

}  // namespace oneway
