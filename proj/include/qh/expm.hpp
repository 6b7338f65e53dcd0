#pragma once

#include <cmath>
#include <string>

#include "qh/linalg.hpp"
#include "qh/matrix.hpp"

namespace qh {

namespace detail {

// [6/6] diagonal Pade approximant with scaling and squaring.
inline ComplexMatrix expm_pade(const ComplexMatrix& m) {
    const int n = m.dim();
    const double norm = m.max_abs() * n;  // cheap bound on the infinity norm
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    if (s > 60) throw Overflow("expm: norm exceeds the 0.5*2^60 scaling limit");

    ComplexMatrix a = m;
    if (s > 0) a *= cx{std::ldexp(1.0, -s), 0.0};

    // c_0 = 1, c_k = c_{k-1} * (q-k+1) / (k (2q-k+1)), q = 6
    constexpr int q = 6;
    double ck = 1.0;
    ComplexMatrix term = ComplexMatrix::identity(n);
    ComplexMatrix num = ComplexMatrix::identity(n);
    ComplexMatrix den = ComplexMatrix::identity(n);
    for (int k = 1; k <= q; ++k) {
        ck *= static_cast<double>(q - k + 1) / (k * (2 * q - k + 1));
        term = term * a;
        ComplexMatrix cterm = term;
        cterm *= cx{ck, 0.0};
        num += cterm;
        if (k % 2 == 0) den += cterm;
        else den -= cterm;
    }
    ComplexMatrix f = solve(den, num);
    for (int k = 0; k < s; ++k) f = f * f;
    return f;
}

} // namespace detail

/// Matrix exponential. Hermitian and anti-Hermitian inputs take the spectral
/// path (unitary result for anti-Hermitian exponents up to roundoff); other
/// inputs use Pade scaling-and-squaring.
inline ComplexMatrix expm(const ComplexMatrix& m) {
    if (!m.all_finite()) throw InvalidArgument("expm: non-finite entries");
    const int n = m.dim();
    const double scale = std::max(1.0, m.frobenius_norm());
    const double herm_tol = 1e-13 * scale;

    if (hermiticity_defect(m) <= herm_tol) {
        const auto dec = hermitian_eigen(hermitian_part(m), herm_tol + 1e-300);
        return apply_spectral(dec, [](double ev) { return cx{std::exp(ev), 0.0}; });
    }
    ComplexMatrix im = m;
    im *= CI;
    if (hermiticity_defect(im) <= herm_tol) {
        const auto dec = hermitian_eigen(hermitian_part(im), herm_tol + 1e-300);
        // m = -i (i m): exp(m) = U exp(-i D) U^dagger
        return apply_spectral(dec, [](double ev) { return std::exp(cx{0.0, -ev}); });
    }
    (void)n;
    return detail::expm_pade(m);
}

/// Directional derivative of expm at a Hermitian exponent g along gdot,
/// via the Daleckii-Krein divided-difference formula.
inline ComplexMatrix expm_frechet_hermitian(const ComplexMatrix& g, const ComplexMatrix& gdot,
                                            double tol = 1e-8) {
    const auto dec = hermitian_eigen(g, tol * std::max(1.0, g.frobenius_norm()));
    const int n = g.dim();
    // W = U^dagger gdot U
    ComplexMatrix w(n);
    {
        ComplexMatrix tmp = gdot * dec.basis;
        w = dec.basis.adjoint() * tmp;
    }
    auto sinch = [](double x) {
        if (std::abs(x) < 1e-4) {
            const double x2 = x * x;
            return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
        }
        return std::sinh(x) / x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double di = dec.eigenvalues[static_cast<size_t>(i)];
            const double dj = dec.eigenvalues[static_cast<size_t>(j)];
            // (e^{di} - e^{dj}) / (di - dj), stable near coincidence
            const double f = std::exp(0.5 * (di + dj)) * sinch(0.5 * (di - dj));
            w(i, j) *= f;
        }
    return dec.basis * w * dec.basis.adjoint();
}

} // namespace qh
