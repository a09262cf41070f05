#pragma once
/*
 * Expansion module: closed-form inner products against the computed modes,
 * projection of initial data, truncation control, and evaluation of the
 * propagated eigenfunction expansion u(z,r) = sum_j f_j V_j(z) e^{i sqrt(lambda_j) r}.
 */
#include <complex>
#include <vector>

#include "oneway/eigensolver.hpp"
#include "oneway/model.hpp"

namespace oneway {

/// Initial data on [0, pi]: a pure sine mode, a characteristic function of a
/// closed subinterval, or samples on the interior of a uniform grid.
struct InitialCondition {
    enum class Kind { Sine, Characteristic, Samples };

    Kind kind = Kind::Sine;
    int j = 1;                   // sine index
    double a = 0.0, b = kPi;     // characteristic interval, 0 <= a < b <= pi
    std::vector<double> values;  // samples at z_i = i*pi/(size+1), i = 1..size

    static InitialCondition sine(int j);
    static InitialCondition characteristic(double a, double b);
    static InitialCondition samples(std::vector<double> values);

    /// Point value; samples are linearly interpolated with zero endpoints,
    /// the characteristic interval is closed at both ends.
    double eval(double z) const;
};

/// A truncated modal solution: modes with projection weights f_j and the
/// propagation sign used in e^{+-i sqrt(lambda) r}.
struct ModalExpansion {
    std::vector<EigenMode> modes;
    std::vector<cplx> fj;
    int sign = +1;
};

/// sin(w t)/w, even and entire in w; series branch for small |w t|.
cplx sinc_scaled(cplx w, double t);

/// int_a^b (A cos(wz) + B sin(wz))^2 dz, bilinear in the coefficients.
cplx piece_self_integral(cplx A, cplx B, cplx w, double a, double b);

/// int_a^b (A cos(wz) + B sin(wz)) sin(kz) dz via product formulas that stay
/// finite through the resonance k -> w.
cplx piece_sine_integral(cplx A, cplx B, cplx w, double k, double a, double b);

/// <V_j, V_j> from the per-piece closed form. Throws DegenerateNorm if the
/// result is not positive.
double mode_norm_sq(const EigenMode& mode);

/// <V_j, sin(k.)> from the per-piece closed form, k >= 1.
double mode_sine_inner(const EigenMode& mode, int k);

/// sup |V_j| over [0, pi], exact per piece: oscillatory pieces peak where the
/// phase of the exponential form crosses 2*pi (else at an endpoint), and
/// evanescent pieces attain their maximum at an endpoint by convexity.
double mode_sup_norm(const EigenMode& mode);

/// Change-of-basis matrix G_{jk} = <V_j, sin(k.)>, j,k = 1..m, row-major.
/// Requires m <= modes.size().
std::vector<double> change_of_basis(const std::vector<EigenMode>& modes, int m);

/// Fourier sine coefficients b_k = (2/pi)<f, sin(k.)>, k = 1..m; analytic for
/// sine and characteristic data, trapezoid quadrature (type-I DST) for samples.
std::vector<double> sine_coeffs(const InitialCondition& f, int m);

/// Projection weights f_j = <V_j, f>/<V_j, V_j> through the sine basis,
/// f_j = sum_k G_{jk} b_k / norm_j. The sine series is carried to
/// max(modes.size(), 1024) terms (capped at the sample count for sampled data)
/// so the dual-path tolerance against direct quadrature holds.
std::vector<cplx> project_initial(const std::vector<EigenMode>& modes,
                                  const InitialCondition& f, const SolverConfig& cfg);

/// Verification path: f_j by per-piece composite Gauss-Legendre quadrature of
/// <V_j, f> with cfg.quadrature_panels panels per smooth segment.
std::vector<cplx> project_initial_quadrature(const std::vector<EigenMode>& modes,
                                             const InitialCondition& f,
                                             const SolverConfig& cfg);

/// e^{i sign sqrt(lambda) r} under the principal branch; the evanescent part
/// decays for either sign: exp(i sign Re(sqrt) r - |Im(sqrt)| r).
cplx propagator_factor(double lambda, double r, int sign);

/// u(z, r) = sum_j f_j V_j(z) e^{i sign sqrt(lambda_j) r} at arbitrary points.
std::vector<cplx> evaluate_solution(const ModalExpansion& exp,
                                    const std::vector<double>& zs, double r);

/// Same sum on the interior grid z_i = i pi/(N+1), i = 1..N, via per-piece
/// rotation recurrences (re-anchored periodically); matches evaluate_solution
/// to near machine precision.
std::vector<cplx> evaluate_on_grid(const ModalExpansion& exp, int N, double r);

/// Smallest m_eff with sum_{j>m_eff} |f_j| sup|V_j| |e^{i sqrt(lambda_j) r_f}|
/// <= tol (at r_f = 0 the weight-times-sup tail alone).
int truncate(const std::vector<EigenMode>& modes, const std::vector<cplx>& fj,
             double r_f, double tol);

}  // namespace oneway
