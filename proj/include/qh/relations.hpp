#pragma once

#include <string>

#include "qh/linalg.hpp"
#include "qh/matrix.hpp"

namespace qh {

/// Non-Hermitian Hamiltonian with its Dyson map and the map's time derivative.
struct OperatorTriple {
    ComplexMatrix H;
    ComplexMatrix eta;
    ComplexMatrix eta_dot;
};

/// Metric operator and its time derivative.
struct MetricPair {
    ComplexMatrix rho;
    ComplexMatrix rho_dot;
};

inline constexpr double kEtaInvertibilityTol = 1e-12;

/// Certify invertibility of eta through the smallest singular value.
inline void require_invertible_eta(const ComplexMatrix& eta, double tol = kEtaInvertibilityTol) {
    const double smin = smallest_singular_value(eta);
    if (smin <= tol)
        throw SingularEta("eta smallest singular value " + std::to_string(smin) +
                          " below threshold " + std::to_string(tol));
}

/// h - eta H eta^{-1} - i etadot eta^{-1}; zero iff the triple solves the
/// time-dependent relation h = eta H eta^{-1} + i etadot eta^{-1} (hbar = 1).
inline ComplexMatrix dyson_residual(const ComplexMatrix& h, const OperatorTriple& triple) {
    require_invertible_eta(triple.eta);
    const ComplexMatrix eta_inv = inverse(triple.eta);
    return h - triple.eta * triple.H * eta_inv - CI * (triple.eta_dot * eta_inv);
}

/// H^dagger rho - rho H - i rhodot; zero iff the pair solves the
/// time-dependent consistency relation for the metric.
inline ComplexMatrix quasi_residual(const ComplexMatrix& H, const MetricPair& pair) {
    return H.adjoint() * pair.rho - pair.rho * H - CI * pair.rho_dot;
}

/// Same relation with rho = eta^dagger eta substituted, certifying the
/// conjugated form of the Dyson relation.
inline ComplexMatrix eta_form_residual(const ComplexMatrix& H, const ComplexMatrix& eta,
                                       const ComplexMatrix& eta_dot) {
    const ComplexMatrix rho = eta.adjoint() * eta;
    const ComplexMatrix rho_dot = eta_dot.adjoint() * eta + eta.adjoint() * eta_dot;
    return quasi_residual(H, MetricPair{rho, rho_dot});
}

/// eta H eta^{-1} + i etadot eta^{-1}. Hermiticity of the result is the
/// caller's check; it holds only for consistent inputs.
inline ComplexMatrix hermitian_counterpart(const OperatorTriple& triple) {
    require_invertible_eta(triple.eta);
    const ComplexMatrix eta_inv = inverse(triple.eta);
    return triple.eta * triple.H * eta_inv + CI * (triple.eta_dot * eta_inv);
}

/// rho = eta^dagger eta.
inline ComplexMatrix metric_of(const ComplexMatrix& eta) { return eta.adjoint() * eta; }

enum class MapDirection { forward, inverse };

/// forward: O = eta^{-1} o eta (Hermitian-system observable into the
/// non-Hermitian system); inverse undoes it.
inline ComplexMatrix observable_map(const ComplexMatrix& o, const ComplexMatrix& eta,
                                    MapDirection direction) {
    require_invertible_eta(eta);
    const ComplexMatrix eta_inv = inverse(eta);
    if (direction == MapDirection::forward) return eta_inv * o * eta;
    return eta * o * eta_inv;
}

/// <psi | rho phi>, the metric-weighted inner product.
inline cx rho_inner(const CxVector& psi, const CxVector& phi, const ComplexMatrix& rho) {
    if (psi.size() != phi.size() || static_cast<int>(psi.size()) != rho.dim())
        throw InvalidArgument("rho_inner: dimension mismatch");
    return dot(psi, rho * phi);
}

} // namespace qh
