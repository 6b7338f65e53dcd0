#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qh/matrix.hpp"

namespace qh {

namespace detail {

struct LuFactors {
    ComplexMatrix lu;       // packed L (unit diagonal) and U
    std::vector<int> perm;  // row permutation
    int sign = 1;
};

inline LuFactors lu_factor(const ComplexMatrix& m, double pivot_tol = 0.0) {
    const int n = m.dim();
    LuFactors f{m, std::vector<int>(static_cast<size_t>(n)), 1};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best <= pivot_tol)
            throw SingularMatrix("lu_factor: zero pivot at column " + std::to_string(k));
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(piv, j), f.lu(k, j));
            std::swap(f.perm[static_cast<size_t>(piv)], f.perm[static_cast<size_t>(k)]);
            f.sign = -f.sign;
        }
        const cx inv = 1.0 / f.lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cx l = f.lu(i, k) * inv;
            f.lu(i, k) = l;
            if (l == cx{0.0, 0.0}) continue;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
        }
    }
    return f;
}

inline CxVector lu_solve_vec(const LuFactors& f, const CxVector& b) {
    const int n = f.lu.dim();
    CxVector x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(f.perm[static_cast<size_t>(i)])];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= f.lu(i, i);
    }
    return x;
}

} // namespace detail

/// Solve m x = b by partial-pivot LU.
inline CxVector solve(const ComplexMatrix& m, const CxVector& b) {
    return detail::lu_solve_vec(detail::lu_factor(m), b);
}

/// Solve m X = B column by column.
inline ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& b) {
    const int n = m.dim();
    const auto f = detail::lu_factor(m);
    ComplexMatrix x(n);
    CxVector col(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = b(i, j);
        const CxVector xc = detail::lu_solve_vec(f, col);
        for (int i = 0; i < n; ++i) x(i, j) = xc[static_cast<size_t>(i)];
    }
    return x;
}

inline ComplexMatrix inverse(const ComplexMatrix& m) {
    return solve(m, ComplexMatrix::identity(m.dim()));
}

inline cx determinant(const ComplexMatrix& m) {
    detail::LuFactors f;
    try {
        f = detail::lu_factor(m);
    } catch (const SingularMatrix&) {
        return cx{0.0, 0.0};
    }
    cx d{static_cast<double>(f.sign), 0.0};
    for (int i = 0; i < m.dim(); ++i) d *= f.lu(i, i);
    return d;
}

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix basis;              // unitary, columns are eigenvectors
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
/// Deterministic for identical input; sweep cap 100.
inline EigenDecomposition hermitian_eigen(const ComplexMatrix& m, double tol = 1e-10) {
    const int n = m.dim();
    const double defect = hermiticity_defect(m);
    if (defect > tol)
        throw NotHermitian("hermitian_eigen: defect " + std::to_string(defect) +
                           " exceeds tol " + std::to_string(tol));

    ComplexMatrix a = hermitian_part(m);
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(1.0, a.frobenius_norm());
    const double conv = 1e-15 * scale;
    const int max_sweeps = 100;

    auto off_norm = [&]() {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
        return std::sqrt(s);
    };

    bool converged = (n == 1) || off_norm() <= conv;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cx apq = a(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq <= conv / (n * n)) continue;
                const cx phase = apq / abs_apq;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * abs_apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cx se = s * phase;        // s * e^{i phi}
                const cx sec = std::conj(se);   // s * e^{-i phi}

                // A <- U^dagger A U with the rotation in the (p,q) plane.
                for (int k = 0; k < n; ++k) {
                    const cx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sec * akq;
                    a(k, q) = se * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - se * aqk;
                    a(q, k) = sec * apk + c * aqk;
                }
                a(p, q) = cx{0.0, 0.0};
                a(q, p) = cx{0.0, 0.0};
                a(p, p) = cx{a(p, p).real(), 0.0};
                a(q, q) = cx{a(q, q).real(), 0.0};

                for (int k = 0; k < n; ++k) {
                    const cx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sec * vkq;
                    v(k, q) = se * vkp + c * vkq;
                }
            }
        }
        converged = off_norm() <= conv;
    }
    if (!converged)
        throw NoConvergence("hermitian_eigen: Jacobi sweeps exhausted");

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition dec;
    dec.eigenvalues.resize(static_cast<size_t>(n));
    dec.basis = ComplexMatrix(n);
    for (int jc = 0; jc < n; ++jc) {
        const int src = order[static_cast<size_t>(jc)];
        dec.eigenvalues[static_cast<size_t>(jc)] = a(src, src).real();
        // Phase convention: first component above threshold made real positive.
        cx phase{1.0, 0.0};
        for (int i = 0; i < n; ++i) {
            const cx vi = v(i, src);
            if (std::abs(vi) > 1e-12) { phase = std::conj(vi) / std::abs(vi); break; }
        }
        for (int i = 0; i < n; ++i) dec.basis(i, jc) = phase * v(i, src);
    }
    return dec;
}

struct PosdefResult {
    bool positive_definite = false;
    double min_eigenvalue = 0.0;
};

/// True iff the minimum eigenvalue exceeds tol; reports it either way.
inline PosdefResult posdef_check(const ComplexMatrix& m, double tol = 1e-10) {
    const auto dec = hermitian_eigen(m, tol);
    const double min_eig = dec.eigenvalues.front();
    return PosdefResult{min_eig > tol, min_eig};
}

/// Principal square root of a Hermitian positive-definite matrix.
inline ComplexMatrix sqrt_posdef(const ComplexMatrix& m, double tol = 1e-10) {
    const auto dec = hermitian_eigen(m, tol);
    if (dec.eigenvalues.front() <= tol)
        throw NotPositiveDefinite("sqrt_posdef: min eigenvalue " +
                                  std::to_string(dec.eigenvalues.front()) +
                                  " not above tol " + std::to_string(tol));
    const int n = m.dim();
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx s{0.0, 0.0};
            for (int k = 0; k < n; ++k)
                s += dec.basis(i, k) * std::sqrt(dec.eigenvalues[static_cast<size_t>(k)]) *
                     std::conj(dec.basis(j, k));
            r(i, j) = s;
        }
    return r;
}

/// Rebuild U f(D) U^dagger from a decomposition and a scalar map.
template <typename F>
inline ComplexMatrix apply_spectral(const EigenDecomposition& dec, F&& f) {
    const int n = dec.basis.dim();
    std::vector<cx> fd(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) fd[static_cast<size_t>(k)] = f(dec.eigenvalues[static_cast<size_t>(k)]);
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx s{0.0, 0.0};
            for (int k = 0; k < n; ++k)
                s += dec.basis(i, k) * fd[static_cast<size_t>(k)] * std::conj(dec.basis(j, k));
            r(i, j) = s;
        }
    return r;
}

/// Inverse of a Hermitian matrix through its eigendecomposition,
/// guarded by a smallest-|eigenvalue| threshold.
inline ComplexMatrix inverse_hermitian(const ComplexMatrix& m, double tol = 1e-12) {
    const auto dec = hermitian_eigen(m, 1e-8);
    for (double ev : dec.eigenvalues)
        if (std::abs(ev) <= tol)
            throw SingularMatrix("inverse_hermitian: eigenvalue below threshold");
    return apply_spectral(dec, [](double ev) { return cx{1.0 / ev, 0.0}; });
}

/// Smallest singular value, via the eigenvalues of m^dagger m.
inline double smallest_singular_value(const ComplexMatrix& m) {
    const auto dec = hermitian_eigen(m.adjoint() * m, 1e-8 * std::max(1.0, m.frobenius_norm()));
    return std::sqrt(std::max(0.0, dec.eigenvalues.front()));
}

namespace detail {

// One complex Givens rotation zeroing g against f.
struct Givens {
    double c = 1.0;
    cx s{0.0, 0.0};
    cx r{0.0, 0.0};
};

inline Givens make_givens(cx f, cx g) {
    Givens gv;
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) { gv.c = 1.0; gv.s = cx{0.0, 0.0}; gv.r = f; return gv; }
    if (af == 0.0) { gv.c = 0.0; gv.s = std::conj(g) / ag; gv.r = ag; return gv; }
    const double d = std::hypot(af, ag);
    gv.c = af / d;
    gv.s = (f / af) * (std::conj(g) / d);
    gv.r = (f / af) * d;
    return gv;
}

} // namespace detail

/// Eigenvalues of a general complex matrix: Householder reduction to upper
/// Hessenberg form followed by shifted QR with Givens rotations. Values only.
inline std::vector<cx> general_eigenvalues(const ComplexMatrix& m, int max_iter_per_eig = 60) {
    const int n = m.dim();
    if (!m.all_finite()) throw InvalidArgument("general_eigenvalues: non-finite entries");
    ComplexMatrix h = m;

    // Reduce to upper Hessenberg with Householder reflectors.
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
        if (scale == 0.0) continue;
        CxVector u(static_cast<size_t>(n), cx{0.0, 0.0});
        double normx = 0.0;
        for (int i = k + 1; i < n; ++i) normx += std::norm(h(i, k));
        normx = std::sqrt(normx);
        const cx x0 = h(k + 1, k);
        const cx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cx{1.0, 0.0};
        const cx alpha = -phase * normx;
        u[static_cast<size_t>(k + 1)] = x0 - alpha;
        for (int i = k + 2; i < n; ++i) u[static_cast<size_t>(i)] = h(i, k);
        double un = 0.0;
        for (int i = k + 1; i < n; ++i) un += std::norm(u[static_cast<size_t>(i)]);
        if (un == 0.0) continue;

        // H <- (I - 2 u u^dagger / |u|^2) H (same from the right)
        for (int j = 0; j < n; ++j) {
            cx s{0.0, 0.0};
            for (int i = k + 1; i < n; ++i) s += std::conj(u[static_cast<size_t>(i)]) * h(i, j);
            s *= 2.0 / un;
            for (int i = k + 1; i < n; ++i) h(i, j) -= s * u[static_cast<size_t>(i)];
        }
        for (int i = 0; i < n; ++i) {
            cx s{0.0, 0.0};
            for (int j = k + 1; j < n; ++j) s += h(i, j) * u[static_cast<size_t>(j)];
            s *= 2.0 / un;
            for (int j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(u[static_cast<size_t>(j)]);
        }
    }

    std::vector<cx> eigs;
    eigs.reserve(static_cast<size_t>(n));
    int hi = n - 1;
    int iter = 0;
    const double eps = 1e-15;
    while (hi >= 0) {
        // Find the active unreduced block [lo..hi].
        int lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (sub <= eps * std::max(diag, 1e-300)) { h(lo, lo - 1) = cx{0.0, 0.0}; break; }
            --lo;
        }
        if (lo == hi) {
            eigs.push_back(h(hi, hi));
            --hi;
            iter = 0;
            continue;
        }

        if (++iter > max_iter_per_eig * n)
            throw NoConvergence("general_eigenvalues: QR iteration stalled");

        // Wilkinson-style shift from the trailing 2x2 block.
        const cx a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
        const cx c = h(hi, hi - 1), d = h(hi, hi);
        cx shift = d;
        const cx delta = 0.5 * (a - d);
        const cx disc = std::sqrt(delta * delta + b * c);
        const cx den1 = delta + disc, den2 = delta - disc;
        const cx den = (std::abs(den1) >= std::abs(den2)) ? den1 : den2;
        if (std::abs(den) > 0.0) shift = d - (b * c) / den;
        if (iter % 20 == 0) shift += cx{std::abs(h(hi, hi - 1)), 0.0};  // exceptional shift

        // Explicit shifted QR step confined to the active block; the coupling
        // blocks do not influence eigenvalues of a block-triangular matrix.
        for (int i = lo; i <= hi; ++i) h(i, i) -= shift;
        std::vector<detail::Givens> rots(static_cast<size_t>(hi - lo));
        for (int k = lo; k < hi; ++k) {
            const auto gv = detail::make_givens(h(k, k), h(k + 1, k));
            rots[static_cast<size_t>(k - lo)] = gv;
            for (int j = k; j <= hi; ++j) {
                const cx hkj = h(k, j), hk1j = h(k + 1, j);
                h(k, j) = gv.c * hkj + gv.s * hk1j;
                h(k + 1, j) = -std::conj(gv.s) * hkj + gv.c * hk1j;
            }
            h(k + 1, k) = cx{0.0, 0.0};
        }
        for (int k = lo; k < hi; ++k) {
            const auto gv = rots[static_cast<size_t>(k - lo)];
            for (int i = lo; i <= std::min(k + 1, hi); ++i) {
                const cx hik = h(i, k), hik1 = h(i, k + 1);
                h(i, k) = gv.c * hik + std::conj(gv.s) * hik1;
                h(i, k + 1) = -gv.s * hik + gv.c * hik1;
            }
        }
        for (int i = lo; i <= hi; ++i) h(i, i) += shift;
    }
    return eigs;
}

/// Eigenvalues sorted by real part (ties by imaginary part).
inline std::vector<cx> general_eigenvalues_sorted(const ComplexMatrix& m) {
    auto e = general_eigenvalues(m);
    std::sort(e.begin(), e.end(), [](const cx& a, const cx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return e;
}

} // namespace qh
