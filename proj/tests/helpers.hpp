#pragma once
/*
 * Shared fixtures and quadrature oracles for the test suite.
 *
 * The three-piece profiles mirror the standing test cases used throughout:
 *   a1 = [2, 1, 2] with interfaces at z = pi/3, 2pi/3
 *   a2 = [1, 3, 5] with interfaces at z = pi/4, 3pi/4
 *   a3 = [2, 1, 3] with interfaces at z = pi/4, pi/2
 * plus a genuinely five-piece profile with grid-aligned interfaces (exact on
 * every N = 32k - 1 grid) for convergence studies.
 *
 * Quadrature helpers integrate piecewise-smooth integrands by splitting at
 * the interfaces first; they are deliberately independent of the closed-form
 * integral routines they are used to verify.
 */
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "oneway/model.hpp"

namespace testutil {

inline oneway::PiecewiseWavenumber profile_a1() {
    return {{2.0, 1.0, 2.0}, {1.0 / 3.0, 2.0 / 3.0}};
}

inline oneway::PiecewiseWavenumber profile_a2() {
    return {{1.0, 3.0, 5.0}, {0.25, 0.75}};
}

inline oneway::PiecewiseWavenumber profile_a3() {
    return {{2.0, 1.0, 3.0}, {0.25, 0.5}};
}

/// Five pieces, interfaces at multiples of pi/32 so every N = 32k - 1 grid
/// resolves them exactly.
inline oneway::PiecewiseWavenumber profile_five() {
    return {{1.7, 3.1, 0.8, 2.4, 1.3},
            {7.0 / 32.0, 13.0 / 32.0, 19.0 / 32.0, 27.0 / 32.0}};
}

/// a1 with its middle piece split in two: identical coefficient function,
/// different piece list. Spectra must agree to round-off.
inline oneway::PiecewiseWavenumber profile_a1_split() {
    return {{2.0, 1.0, 1.0, 1.0, 2.0},
            {1.0 / 3.0, 4.0 / 9.0, 5.0 / 9.0, 2.0 / 3.0}};
}

/// Composite Simpson rule on [a, b] with n panels (any n >= 1).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
    const double h = (b - a) / (2 * n);
    double s = f(a) + f(b);
    for (int i = 1; i < 2 * n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Same rule for complex-valued integrands.
template <typename F>
std::complex<double> simpson_c(F&& f, double a, double b, int n) {
    const double h = (b - a) / (2 * n);
    std::complex<double> s = f(a) + f(b);
    for (int i = 1; i < 2 * n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * (h / 3.0);
}

/// Integral over [0, pi] of an integrand that is smooth within each piece,
/// split at the interfaces (n panels per piece). Nodes are clamped strictly
/// inside the piece so integrands built on the right-continuous alpha_at see
/// this piece's coefficient at both endpoints; the O(eps) node shift is far
/// below the quadrature error.
template <typename F>
double integrate_piecewise(const oneway::PiecewiseWavenumber& pw, F&& f, int n) {
    double total = 0.0;
    for (int v = 0; v < pw.pieces(); ++v) {
        const double a = pw.boundary(v), b = pw.boundary(v + 1);
        const double eps = (b - a) * 1e-13;
        total += simpson(
            [&](double z) { return f(std::min(std::max(z, a + eps), b - eps)); }, a,
            b, n);
    }
    return total;
}

}  // namespace testutil
