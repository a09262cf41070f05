/*
 * Eigensolver implementation: seeding, reduced determinant, secant
 * refinement, null-space recovery, and the full spectrum pipeline.
 */
#include "oneway/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oneway/expansion.hpp"

namespace oneway {

namespace {

/*
 * Per-piece sine integrals used by the Rayleigh quotient and the error
 * formula:  I_v(j) = int_{s_v}^{s_{v+1}} sin^2(jz) dz
 *                  = (s_{v+1}-s_v)/2 - [sin(2 s_{v+1} j) - sin(2 s_v j)]/(4j).
 */
double piece_sin_sq(double a, double b, int j) {
    return 0.5 * (b - a) - (std::sin(2.0 * b * j) - std::sin(2.0 * a * j)) / (4.0 * j);
}

/// Y_j = sum_v alpha_v^2 I_v(j) and A_j = sum_v alpha_v^4 I_v(j).
void weighted_sums(const PiecewiseWavenumber& pw, int j, double* Y, double* A) {
    double y = 0.0, a4 = 0.0;
    const int n = pw.pieces();
    for (int v = 0; v < n; ++v) {
        const double iv = piece_sin_sq(pw.boundary(v), pw.boundary(v + 1), j);
        const double a2 = pw.alphas[static_cast<std::size_t>(v)] *
                          pw.alphas[static_cast<std::size_t>(v)];
        y += a2 * iv;
        a4 += a2 * a2 * iv;
    }
    if (Y) *Y = y;
    if (A) *A = a4;
}

/// Antiderivative piece of the off-diagonal entries:
/// F_ij(z) = sin((i-j)z)/(2(i-j)) - sin((i+j)z)/(2(i+j)), i != j.
double F_offdiag(int i, int j, double z) {
    return std::sin((i - j) * z) / (2.0 * (i - j)) -
           std::sin((i + j) * z) / (2.0 * (i + j));
}

constexpr double kSingularOmega = 1e-14;

/// Frequencies of every piece for the lambda implied by omega_n; the last
/// entry keeps the caller's omega_n exactly (secant iterates off-branch).
std::vector<cplx> omegas_for_root_var(const PiecewiseWavenumber& pw, cplx omega_n) {
    const int n = pw.pieces();
    const double an = pw.alphas.back();
    const cplx lambda = an * an - omega_n * omega_n;
    std::vector<cplx> om(static_cast<std::size_t>(n));
    for (int i = 0; i < n - 1; ++i) {
        const double ai = pw.alphas[static_cast<std::size_t>(i)];
        om[static_cast<std::size_t>(i)] = std::sqrt(cplx(ai * ai) - lambda);
    }
    om[static_cast<std::size_t>(n - 1)] = omega_n;
    return om;
}

/// Degenerate-frequency guard for the multi-piece elimination (the caller is
/// expected to perturb the seed and retry).
void require_nonsingular(const std::vector<cplx>& om) {
    for (std::size_t i = 0; i < om.size(); ++i)
        if (std::abs(om[i]) < kSingularOmega)
            throw SingularBlock(static_cast<int>(i) + 1);
}

/// Forward substitution shared by reduced_determinant and null_space_coeffs.
/// Starting from `vec` (the first-column pair), applies per interface k the
/// update vec <- R_k^{-1} * rhs with rhs = vec at k = 1 and rhs = -L_k vec
/// beyond, where L_k and R_k are the 2x2 interface blocks of pieces k and
/// k+1. Calls sink(k, vec) after every step.
template <typename Sink>
void block_forward_substitution(const PiecewiseWavenumber& pw,
                                const std::vector<cplx>& om, cplx vec0, cplx vec1,
                                Sink&& sink) {
    const int n = pw.pieces();
    cplx v0 = vec0, v1 = vec1;
    for (int k = 1; k < n; ++k) {
        const double sk = pw.boundary(k);
        cplx r0 = v0, r1 = v1;
        if (k > 1) {
            const cplx ok = om[static_cast<std::size_t>(k - 1)];
            const cplx c = std::cos(ok * sk), s = std::sin(ok * sk);
            r0 = -(c * v0 + s * v1);
            r1 = -(-ok * s * v0 + ok * c * v1);
        }
        const cplx on = om[static_cast<std::size_t>(k)];
        if (std::abs(on) < kSingularOmega) throw SingularBlock(k + 1);
        const cplx c = std::cos(on * sk), s = std::sin(on * sk);
        v0 = -c * r0 + (s / on) * r1;
        v1 = -s * r0 - (c / on) * r1;
        sink(k, v0, v1);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// EigenMode evaluation
// ---------------------------------------------------------------------------

cplx EigenMode::eval(double z) const {
    const int n = static_cast<int>(omegas.size());
    int i = n - 1;
    for (int q = 0; q < n - 1; ++q)
        if (z < bounds[static_cast<std::size_t>(q + 1)]) { i = q; break; }
    const cplx w = omegas[static_cast<std::size_t>(i)];
    const auto& [A, B] = coeffs[static_cast<std::size_t>(i)];
    return A * std::cos(w * z) + B * std::sin(w * z);
}

cplx EigenMode::eval_deriv(double z) const {
    const int n = static_cast<int>(omegas.size());
    int i = n - 1;
    for (int q = 0; q < n - 1; ++q)
        if (z < bounds[static_cast<std::size_t>(q + 1)]) { i = q; break; }
    const cplx w = omegas[static_cast<std::size_t>(i)];
    const auto& [A, B] = coeffs[static_cast<std::size_t>(i)];
    return -A * w * std::sin(w * z) + B * w * std::cos(w * z);
}

// ---------------------------------------------------------------------------
// seeding
// ---------------------------------------------------------------------------

double rayleigh_guess(const PiecewiseWavenumber& pw, int j) {
    double Y = 0.0;
    weighted_sums(pw, j, &Y, nullptr);
    return -static_cast<double>(j) * j + (2.0 / kPi) * Y;
}

std::vector<double> restricted_matrix(const PiecewiseWavenumber& pw, int J) {
    std::vector<double> L(static_cast<std::size_t>(J) * J, 0.0);
    const int n = pw.pieces();
    for (int i = 1; i <= J; ++i) {
        for (int j = 1; j <= J; ++j) {
            double entry;
            if (i == j) {
                entry = rayleigh_guess(pw, i);
            } else {
                double X = 0.0;
                for (int v = 0; v < n; ++v) {
                    const double a2 = pw.alphas[static_cast<std::size_t>(v)] *
                                      pw.alphas[static_cast<std::size_t>(v)];
                    X += a2 * (F_offdiag(i, j, pw.boundary(v + 1)) -
                               F_offdiag(i, j, pw.boundary(v)));
                }
                entry = (2.0 / kPi) * X;
            }
            L[static_cast<std::size_t>(i - 1) * J + (j - 1)] = entry;
        }
    }
    return L;
}

SymmetricEig small_symmetric_eig(const std::vector<double>& M, int n) {
    // symmetry gate, relative to the largest entry
    double amax = 0.0;
    for (double x : M) amax = std::max(amax, std::abs(x));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = std::abs(M[static_cast<std::size_t>(i) * n + j] -
                                      M[static_cast<std::size_t>(j) * n + i]);
            if (d > 1e-10 * std::max(1.0, amax)) throw NotSymmetric();
        }

    std::vector<double> a = M;             // working copy, row-major
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double x = a[static_cast<std::size_t>(i) * n + j];
                s += x * x;
            }
        return std::sqrt(2.0 * s);
    };

    const int kMaxSweeps = 64;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (off_norm() <= 1e-12 * std::max(1.0, amax)) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<std::size_t>(p) * n + q];
                if (apq == 0.0) continue;
                const double app = a[static_cast<std::size_t>(p) * n + p];
                const double aqq = a[static_cast<std::size_t>(q) * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[static_cast<std::size_t>(k) * n + p];
                    const double akq = a[static_cast<std::size_t>(k) * n + q];
                    a[static_cast<std::size_t>(k) * n + p] = c * akp - s * akq;
                    a[static_cast<std::size_t>(k) * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[static_cast<std::size_t>(p) * n + k];
                    const double aqk = a[static_cast<std::size_t>(q) * n + k];
                    a[static_cast<std::size_t>(p) * n + k] = c * apk - s * aqk;
                    a[static_cast<std::size_t>(q) * n + k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v[static_cast<std::size_t>(k) * n + p];
                    const double vkq = v[static_cast<std::size_t>(k) * n + q];
                    v[static_cast<std::size_t>(k) * n + p] = c * vkp - s * vkq;
                    v[static_cast<std::size_t>(k) * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == kMaxSweeps) throw NoConvergence("small_symmetric_eig");

    SymmetricEig out;
    out.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.values[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i) * n + i];
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return out.values[static_cast<std::size_t>(x)] >
               out.values[static_cast<std::size_t>(y)];
    });
    SymmetricEig sorted;
    sorted.values.resize(static_cast<std::size_t>(n));
    sorted.vectors.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        sorted.values[static_cast<std::size_t>(k)] =
            out.values[static_cast<std::size_t>(src)];
        for (int r = 0; r < n; ++r)
            sorted.vectors[static_cast<std::size_t>(k) * n + r] =
                v[static_cast<std::size_t>(r) * n + src];
    }
    return sorted;
}

double sine_approx_error(const PiecewiseWavenumber& pw, int j) {
    double Y = 0.0, A = 0.0;
    weighted_sums(pw, j, &Y, &A);
    const double jj = static_cast<double>(j) * j;
    const double num = A - (2.0 / kPi) * Y * Y;
    const double den = jj * jj * kPi / 2.0 - 2.0 * jj * Y + A;
    if (den <= 1e-300) return 0.0;  // sin(jz) is an exact eigenfunction (0/0)
    return std::clamp(num / den, 0.0, 1.0);
}

int cutoff_index(const PiecewiseWavenumber& pw, int j_max, double threshold) {
    int J = 0;
    for (int j = 1; j <= j_max; ++j)
        if (sine_approx_error(pw, j) > threshold) J = j;
    return J;
}

// ---------------------------------------------------------------------------
// root condition
// ---------------------------------------------------------------------------

cplx omega_of_lambda(double lambda, double alpha_i) {
    const double radicand = alpha_i * alpha_i - lambda;
    if (radicand >= 0.0) return cplx(std::sqrt(radicand), 0.0);
    return cplx(0.0, std::sqrt(-radicand));
}

cplx reduced_determinant(const PiecewiseWavenumber& pw, cplx omega_n) {
    const int n = pw.pieces();
    const auto om = omegas_for_root_var(pw, omega_n);
    if (n == 1) return sinc_scaled(om[0], kPi);
    require_nonsingular(om);

    // First column scaled by 1/omega_1: (S(omega_1, s_1), cos(omega_1 s_1)).
    const double s1 = pw.boundary(1);
    cplx v0 = sinc_scaled(om[0], s1);
    cplx v1 = std::cos(om[0] * s1);
    block_forward_substitution(pw, om, v0, v1, [&](int, cplx a, cplx b) {
        v0 = a;
        v1 = b;
    });
    const cplx wn = om[static_cast<std::size_t>(n - 1)];
    return -(std::cos(kPi * wn) * v0 + std::sin(kPi * wn) * v1);
}

cplx det_D_check(const PiecewiseWavenumber& pw, cplx omega_n) {
    if (pw.pieces() != 3) throw WrongPieceCount(pw.pieces());
    const auto om = omegas_for_root_var(pw, omega_n);
    const double s1 = pw.boundary(1), s2 = pw.boundary(2);

    // Assemble the 4x4 block D: continuity/derivative rows of interface 1
    // (columns A2, B2) and interface 2 (columns A2, B2, A3, B3).
    cplx D[4][4] = {};
    const cplx c21 = std::cos(om[1] * s1), s21 = std::sin(om[1] * s1);
    D[0][0] = -c21;          D[0][1] = -s21;
    D[1][0] = om[1] * s21;   D[1][1] = -om[1] * c21;
    const cplx c22 = std::cos(om[1] * s2), s22 = std::sin(om[1] * s2);
    const cplx c32 = std::cos(om[2] * s2), s32 = std::sin(om[2] * s2);
    D[2][0] = c22;           D[2][1] = s22;
    D[3][0] = -om[1] * s22;  D[3][1] = om[1] * c22;
    D[2][2] = -c32;          D[2][3] = -s32;
    D[3][2] = om[2] * s32;   D[3][3] = -om[2] * c32;

    // Cofactor expansion along the first row (entries [0][2], [0][3] vanish).
    auto det3 = [](cplx m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    cplx minor0[3][3] = {{D[1][1], D[1][2], D[1][3]},
                         {D[2][1], D[2][2], D[2][3]},
                         {D[3][1], D[3][2], D[3][3]}};
    cplx minor1[3][3] = {{D[1][0], D[1][2], D[1][3]},
                         {D[2][0], D[2][2], D[2][3]},
                         {D[3][0], D[3][2], D[3][3]}};
    return D[0][0] * det3(minor0) - D[0][1] * det3(minor1);
}

cplx secant_root(const PiecewiseWavenumber& pw, cplx omega0,
                 const SolverConfig& cfg, ModeDiagnostics* diag) {
    cplx x0 = omega0;
    cplx x1 = omega0 * (1.0 + cfg.secant_perturbation) +
              (omega0 == cplx(0.0) ? cplx(cfg.secant_perturbation) : cplx(0.0));
    cplx f0 = reduced_determinant(pw, x0);
    cplx f1 = reduced_determinant(pw, x1);
    for (int it = 0; it < cfg.secant_max_iter; ++it) {
        if (f1 == f0) break;
        const cplx x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!std::isfinite(x2.real()) || !std::isfinite(x2.imag()))
            throw DivergedToNaN();
        const cplx f2 = reduced_determinant(pw, x2);
        if (!std::isfinite(f2.real()) || !std::isfinite(f2.imag()))
            throw DivergedToNaN();
        if (std::abs(x2 - x1) <= cfg.secant_tol * (1.0 + std::abs(x2)) &&
            std::abs(f2) <= 1e-10 * (1.0 + std::abs(x2))) {
            if (diag) { diag->secant_iters = it + 1; diag->det_residual = std::abs(f2); }
            return x2;
        }
        x0 = x1; f0 = f1; x1 = x2; f1 = f2;
    }
    if (std::abs(f1) <= 1e-10 * (1.0 + std::abs(x1))) {
        if (diag) { diag->secant_iters = cfg.secant_max_iter; diag->det_residual = std::abs(f1); }
        return x1;
    }
    throw NoConvergence("secant_root");
}

std::vector<cplx> null_space_coeffs(const PiecewiseWavenumber& pw, cplx omega_n) {
    const int n = pw.pieces();
    const auto om = omegas_for_root_var(pw, omega_n);
    std::vector<cplx> x;
    x.reserve(static_cast<std::size_t>(2 * n - 1));
    x.push_back(cplx(1.0));  // B_1 = 1
    if (n == 1) return x;
    require_nonsingular(om);

    // Unscaled first column (sin(omega_1 s_1), omega_1 cos(omega_1 s_1)).
    const double s1 = pw.boundary(1);
    const cplx v0 = std::sin(om[0] * s1);
    const cplx v1 = om[0] * std::cos(om[0] * s1);
    block_forward_substitution(pw, om, v0, v1, [&](int, cplx a, cplx b) {
        x.push_back(-a);  // A_{k+1}
        x.push_back(-b);  // B_{k+1}
    });
    return x;
}

EigenMode assemble_mode(const PiecewiseWavenumber& pw, int j, cplx omega_n) {
    const int n = pw.pieces();
    EigenMode mode;
    mode.index = j;
    mode.lambda = (pw.alphas.back() * pw.alphas.back() - omega_n * omega_n).real();
    mode.bounds = pw.boundaries();
    mode.omegas.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        mode.omegas[static_cast<std::size_t>(i)] =
            omega_of_lambda(mode.lambda, pw.alphas[static_cast<std::size_t>(i)]);

    // Coefficients at the canonical (principal-branch) omega_n.
    const auto x = null_space_coeffs(pw, mode.omegas.back());
    mode.coeffs.resize(static_cast<std::size_t>(n));
    mode.coeffs[0] = {cplx(0.0), x[0]};
    for (int i = 1; i < n; ++i)
        mode.coeffs[static_cast<std::size_t>(i)] = {
            x[static_cast<std::size_t>(2 * i - 1)],
            x[static_cast<std::size_t>(2 * i)]};

    // Global phase: rotate so the bilinear self-integral int V^2 dz is real
    // and positive, which makes the eigenfunction real-valued; then fix the
    // sign and pin B_1 to exactly 1 when the phase already left it there.
    cplx s(0.0);
    for (int i = 0; i < n; ++i)
        s += piece_self_integral(mode.coeffs[static_cast<std::size_t>(i)].first,
                                 mode.coeffs[static_cast<std::size_t>(i)].second,
                                 mode.omegas[static_cast<std::size_t>(i)],
                                 mode.bounds[static_cast<std::size_t>(i)],
                                 mode.bounds[static_cast<std::size_t>(i + 1)]);
    const cplx phase = std::exp(cplx(0.0, -0.5 * std::arg(s)));
    for (auto& [A, B] : mode.coeffs) { A *= phase; B *= phase; }
    if (mode.coeffs[0].second.real() < 0.0)
        for (auto& [A, B] : mode.coeffs) { A = -A; B = -B; }
    const cplx b1 = mode.coeffs[0].second;
    if (std::abs(b1 - cplx(1.0)) < 1e-6 && b1 != cplx(1.0)) {
        for (auto& [A, B] : mode.coeffs) { A /= b1; B /= b1; }
        mode.coeffs[0].second = cplx(1.0);
    }
    mode.coeffs[0].first = cplx(0.0);

    mode.norm_sq = mode_norm_sq(mode);
    return mode;
}

// ---------------------------------------------------------------------------
// full spectrum
// ---------------------------------------------------------------------------

namespace {

/// Canonical representative of a root: principal-branch omega_n of the real
/// lambda it implies. Collapses the +-omega ambiguity before dedup.
cplx canonical_root(const PiecewiseWavenumber& pw, cplx omega_star) {
    const double an = pw.alphas.back();
    const double lambda = (an * an - omega_star * omega_star).real();
    return omega_of_lambda(lambda, an);
}

struct RootCandidate {
    double lambda;
    cplx omega;
    ModeDiagnostics diag;
};

}  // namespace

SpectrumResult compute_spectrum(const PiecewiseWavenumber& pw, int m,
                                const SolverConfig& cfg) {
    validate(pw);
    const double an = pw.alphas.back();

    const int J = std::min(cutoff_index(pw, std::max(m, 200), cfg.cutoff_threshold), m);

    // lambda seeds: restricted-matrix eigenvalues below the cutoff, Rayleigh
    // quotients beyond.
    std::vector<double> seeds(static_cast<std::size_t>(m));
    if (J > 0) {
        const auto L0 = restricted_matrix(pw, J);
        const auto eig = small_symmetric_eig(L0, J);
        for (int j = 1; j <= J; ++j)
            seeds[static_cast<std::size_t>(j - 1)] =
                eig.values[static_cast<std::size_t>(j - 1)];
    }
    for (int j = J + 1; j <= m; ++j)
        seeds[static_cast<std::size_t>(j - 1)] = rayleigh_guess(pw, j);

    auto omega_seed = [&](double lambda) {
        cplx w = omega_of_lambda(lambda, an);
        if (std::abs(w) < 1e-9) w += cplx(1e-4, 0.0);  // dodge the singular block
        return w;
    };

    std::vector<RootCandidate> roots;
    roots.reserve(static_cast<std::size_t>(m));
    auto is_duplicate = [&](cplx w) {
        for (const auto& rt : roots)
            if (std::abs(w - rt.omega) <= 1e-8 * (1.0 + std::abs(w))) return true;
        return false;
    };

    for (int j = 1; j <= m; ++j) {
        const double lam0 = seeds[static_cast<std::size_t>(j - 1)];

        // Slot bracket: half a seed gap to each neighbor (one-gap headroom at
        // the ends). Accepting only roots inside the bracket keeps every j on
        // its own eigenvalue; without the guard a single stray converged root
        // displaces every later mode by one slot.
        const double gap_up = (j >= 2) ? seeds[static_cast<std::size_t>(j - 2)] - lam0
                                       : (m >= 2 ? lam0 - seeds[1] : 2.0);
        const double gap_dn = (j < m) ? lam0 - seeds[static_cast<std::size_t>(j)]
                                      : (m >= 2 ? seeds[static_cast<std::size_t>(j - 2)] - lam0
                                                : 2.0);
        const double hi = lam0 + 0.5 * gap_up;
        const double lo = lam0 - 0.5 * gap_dn;
        auto in_slot = [&](double lam) { return lam > lo && lam < hi; };

        // The secant's second point is a relative offset of the first; at
        // large |omega| that offset spans several unit-spaced roots and the
        // iteration can land in an arbitrary basin, so cap the effective
        // perturbation at a quarter spacing.
        SolverConfig cj = cfg;
        cj.secant_perturbation = std::min(
            cfg.secant_perturbation, 0.25 / (1.0 + std::abs(omega_seed(lam0))));

        bool accepted = false;
        try {
            ModeDiagnostics diag;
            const cplx wstar = secant_root(pw, omega_seed(lam0), cj, &diag);
            const cplx wc = canonical_root(pw, wstar);
            const double lambda = (an * an - wstar * wstar).real();
            if (in_slot(lambda) && !is_duplicate(wc)) {
                roots.push_back({lambda, wc, diag});
                accepted = true;
            }
        } catch (const NumericalError&) {
        }

        // Bisection on the sign of Re(reduced determinant) over the slot
        // bracket; the determinant is real on the real-lambda line because
        // every piece frequency is either real or purely imaginary there.
        if (!accepted && lo < hi) {
            auto g = [&](double lam) {
                return reduced_determinant(pw, omega_seed(lam)).real();
            };
            try {
                double a = lo, b = hi;
                const double ga0 = g(a), gb0 = g(b);
                double ga = ga0;
                if (ga0 == 0.0) b = a;
                else if (gb0 == 0.0) a = b;
                else if (ga0 * gb0 < 0.0) {
                    for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
                        const double mid = 0.5 * (a + b);
                        const double gm = g(mid);
                        if (gm == 0.0) { a = b = mid; break; }
                        if (ga * gm < 0.0) { b = mid; } else { a = mid; ga = gm; }
                    }
                } else {
                    a = lo; b = hi + 1.0;  // no sign change: mark as failed
                }
                if (b - a <= 1e-12 * (1.0 + std::abs(a)) + (hi - lo) * 1e-10) {
                    const double lam_b = 0.5 * (a + b);
                    ModeDiagnostics diag;
                    cplx wc;
                    double lambda = lam_b;
                    bool polished = false;
                    try {
                        const cplx wstar = secant_root(pw, omega_seed(lam_b), cj, &diag);
                        const double lp = (an * an - wstar * wstar).real();
                        if (in_slot(lp)) {
                            wc = canonical_root(pw, wstar);
                            lambda = lp;
                            polished = true;
                        }
                    } catch (const NumericalError&) {
                    }
                    if (!polished) {
                        wc = omega_seed(lam_b);
                        diag = {};
                        diag.det_residual = std::abs(reduced_determinant(pw, wc));
                    }
                    if (!is_duplicate(wc)) {
                        roots.push_back({lambda, wc, diag});
                        accepted = true;
                    }
                }
            } catch (const NumericalError&) {
            }
        }

        // Last resort, unconstrained: the pre-guard behavior. Only reachable
        // when the slot bracket itself is broken (degenerate seeds).
        if (!accepted) {
            std::vector<cplx> attempts;
            attempts.push_back(omega_seed(lam0));
            if (j >= 2)
                attempts.push_back(
                    omega_seed(0.5 * (lam0 + seeds[static_cast<std::size_t>(j - 2)])));
            if (j < m)
                attempts.push_back(
                    omega_seed(0.5 * (lam0 + seeds[static_cast<std::size_t>(j)])));
            for (const cplx& w0 : attempts) {
                ModeDiagnostics diag;
                cplx wstar;
                try {
                    wstar = secant_root(pw, w0, cj, &diag);
                } catch (const NumericalError&) {
                    continue;
                }
                const cplx wc = canonical_root(pw, wstar);
                if (is_duplicate(wc)) continue;
                roots.push_back({(an * an - wstar * wstar).real(), wc, diag});
                accepted = true;
                break;
            }
        }
        if (!accepted) throw SpectrumIncomplete(j);
    }

    std::sort(roots.begin(), roots.end(),
              [](const RootCandidate& a, const RootCandidate& b) {
                  return a.lambda > b.lambda;
              });

    SpectrumResult result;
    result.cutoff_J = J;
    result.modes.reserve(roots.size());
    result.diagnostics.reserve(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        result.modes.push_back(assemble_mode(pw, static_cast<int>(i) + 1, roots[i].omega));
        result.diagnostics.push_back(roots[i].diag);
    }
    return result;
}

}  // namespace oneway
