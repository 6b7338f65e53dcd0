#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "qh/errors.hpp"

namespace qh {

using cx = std::complex<double>;
using CxVector = std::vector<cx>;

inline constexpr cx CI{0.0, 1.0};

/// Dense square complex matrix, row-major. The universal operator carrier
/// for Hamiltonians, Dyson maps, metrics and propagators.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, cx{0.0, 0.0}) {
        if (dim <= 0) throw InvalidArgument("ComplexMatrix: dim must be positive");
    }

    ComplexMatrix(int dim, std::initializer_list<cx> entries) : ComplexMatrix(dim) {
        if (static_cast<int>(entries.size()) != dim * dim)
            throw InvalidArgument("ComplexMatrix: entry count does not match dim^2");
        std::copy(entries.begin(), entries.end(), a_.begin());
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

    static ComplexMatrix diagonal(const std::vector<double>& d) {
        ComplexMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<size_t>(i)];
        return m;
    }

    int dim() const { return dim_; }

    cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

    const std::vector<cx>& entries() const { return a_; }
    std::vector<cx>& entries() { return a_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    cx trace() const {
        cx t{0.0, 0.0};
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (const auto& v : a_) s = std::max(s, std::abs(v));
        return s;
    }

    bool all_finite() const {
        for (const auto& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix l, const ComplexMatrix& r) { return l += r; }
    friend ComplexMatrix operator-(ComplexMatrix l, const ComplexMatrix& r) { return l -= r; }
    friend ComplexMatrix operator*(cx s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, cx s) { return m *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& l, const ComplexMatrix& r) {
        l.check_same_dim(r);
        const int n = l.dim_;
        ComplexMatrix out(n);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                const cx lik = l(i, k);
                if (lik == cx{0.0, 0.0}) continue;
                for (int j = 0; j < n; ++j) out(i, j) += lik * r(k, j);
            }
        }
        return out;
    }

    friend CxVector operator*(const ComplexMatrix& m, const CxVector& v) {
        if (static_cast<int>(v.size()) != m.dim_)
            throw InvalidArgument("matrix-vector product: size mismatch");
        CxVector out(v.size(), cx{0.0, 0.0});
        for (int i = 0; i < m.dim_; ++i) {
            cx s{0.0, 0.0};
            for (int j = 0; j < m.dim_; ++j) s += m(i, j) * v[static_cast<size_t>(j)];
            out[static_cast<size_t>(i)] = s;
        }
        return out;
    }

    /// Top-left square block of the given size.
    ComplexMatrix top_left_block(int size) const {
        if (size <= 0 || size > dim_) throw InvalidArgument("top_left_block: bad size");
        ComplexMatrix r(size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) r(i, j) = (*this)(i, j);
        return r;
    }

private:
    void check_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_) throw InvalidArgument("matrix dimension mismatch");
    }

    int dim_ = 0;
    std::vector<cx> a_;
};

/// ||m - m^dagger||_F; zero iff m is Hermitian.
inline double hermiticity_defect(const ComplexMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) s += std::norm(m(i, j) - std::conj(m(j, i)));
    return std::sqrt(s);
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cx aij = a(i, j);
            if (aij == cx{0.0, 0.0}) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return out;
}

inline double vector_norm(const CxVector& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline cx dot(const CxVector& bra, const CxVector& ket) {
    if (bra.size() != ket.size()) throw InvalidArgument("dot: size mismatch");
    cx s{0.0, 0.0};
    for (size_t k = 0; k < bra.size(); ++k) s += std::conj(bra[k]) * ket[k];
    return s;
}

} // namespace qh
