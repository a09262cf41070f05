/*
 * Validation and evaluation for the piecewise-constant profile.
 */
#include "oneway/model.hpp"

#include <cmath>
#include <string>

namespace oneway {

void validate(const PiecewiseWavenumber& pw) {
    const int n = pw.pieces();
    if (n < 1) throw NonPositiveAlpha(1);
    if (static_cast<int>(pw.rhos.size()) != n - 1)
        throw std::invalid_argument(
            "expected " + std::to_string(n - 1) + " interface fractions, got " +
            std::to_string(pw.rhos.size()));
    for (int i = 0; i < n; ++i) {
        const double a = pw.alphas[static_cast<std::size_t>(i)];
        if (!(a > 0.0) || !std::isfinite(a)) throw NonPositiveAlpha(i + 1);
    }
    for (int k = 0; k < n - 1; ++k) {
        const double r = pw.rhos[static_cast<std::size_t>(k)];
        if (!(r > 0.0 && r < 1.0) || !std::isfinite(r))
            throw InterfaceOutOfRange(k + 1);
        if (k > 0 && !(r > pw.rhos[static_cast<std::size_t>(k - 1)]))
            throw NonMonotoneInterfaces(k + 1);
    }
}

double alpha_at(const PiecewiseWavenumber& pw, double z) {
    if (!(z >= 0.0 && z <= kPi)) throw DomainError(z);
    return pw.alphas[static_cast<std::size_t>(pw.piece_index(z))];
}

void validate(const SolverConfig& cfg) {
    if (!(cfg.secant_tol > 0.0))
        throw std::invalid_argument("secant_tol must be positive");
    if (cfg.secant_max_iter < 2)
        throw std::invalid_argument("secant_max_iter must be at least 2");
    if (!(cfg.cutoff_threshold > 0.0 && cfg.cutoff_threshold < 1.0))
        throw std::invalid_argument("cutoff_threshold must lie in (0, 1)");
    if (cfg.quadrature_panels < 8)
        throw std::invalid_argument("quadrature_panels must be at least 8");
    if (!(cfg.truncation_tol > 0.0))
        throw std::invalid_argument("truncation_tol must be positive");
    if (cfg.propagation_sign != 1 && cfg.propagation_sign != -1)
        throw std::invalid_argument("propagation_sign must be +1 or -1");
    if (cfg.m_max < 1)
        throw std::invalid_argument("m_max must be at least 1");
}

}  // namespace oneway
