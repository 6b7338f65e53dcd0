#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qh/grid.hpp"
#include "qh/linalg.hpp"
#include "qh/matrix.hpp"
#include "qh/quadrature.hpp"
#include "qh/timefunction.hpp"

namespace qh::spin {

inline ComplexMatrix pauli_x() { return ComplexMatrix(2, {cx{0, 0}, cx{1, 0}, cx{1, 0}, cx{0, 0}}); }
inline ComplexMatrix pauli_y() { return ComplexMatrix(2, {cx{0, 0}, cx{0, -1}, cx{0, 1}, cx{0, 0}}); }
inline ComplexMatrix pauli_z() { return ComplexMatrix(2, {cx{1, 0}, cx{0, 0}, cx{0, 0}, cx{-1, 0}}); }

struct SpinChainParams {
    int sites = 1;          // N
    TimeFunction lambda;    // Ising coupling
    TimeFunction kappa;     // imaginary longitudinal field strength
};

namespace detail {

/// Single-site operator embedded at site j (0-based) of an N-site chain.
inline ComplexMatrix site_operator(const ComplexMatrix& op, int j, int n_sites) {
    ComplexMatrix out = (j == 0) ? op : ComplexMatrix::identity(2);
    for (int s = 1; s < n_sites; ++s) out = kron(out, (s == j) ? op : ComplexMatrix::identity(2));
    return out;
}

} // namespace detail

/// H_N(t) = -1/2 sum_j [ sigma_j^z + lambda(t) sigma_j^x sigma_{j+1}^x
///                       + i kappa(t) sigma_j^x ], periodic boundary.
inline ComplexMatrix build_hamiltonian(const SpinChainParams& p, double t) {
    const int n = p.sites;
    if (n < 1) throw InvalidArgument("build_hamiltonian: need at least one site");
    if (n > 10) throw InvalidArgument("build_hamiltonian: Hilbert dimension beyond 2^10");
    const cx lam = p.lambda.value(t);
    const cx kap = p.kappa.value(t);
    const int dim = 1 << n;
    ComplexMatrix h(dim);
    for (int j = 0; j < n; ++j) {
        const ComplexMatrix zj = detail::site_operator(pauli_z(), j, n);
        const ComplexMatrix xj = detail::site_operator(pauli_x(), j, n);
        const ComplexMatrix xj1 = detail::site_operator(pauli_x(), (j + 1) % n, n);
        h += zj;
        ComplexMatrix xx = xj * xj1;
        xx *= lam;
        h += xx;
        ComplexMatrix ix = xj;
        ix *= CI * kap;
        h += ix;
    }
    h *= cx{-0.5, 0.0};
    return h;
}

/// Convenience: the N=1 matrix -1/2 [[1+lambda, i kappa], [i kappa, lambda-1]].
inline ComplexMatrix h1_matrix(double lambda, double kappa) {
    return ComplexMatrix(2, {cx{-0.5 * (1.0 + lambda), 0.0}, cx{0.0, -0.5 * kappa},
                             cx{0.0, -0.5 * kappa}, cx{-0.5 * (lambda - 1.0), 0.0}});
}

/// Integration of the second-order constraint equation for kappa(t):
/// kappaddot = -kappa (1 - (alpha0+delta0)/2 + kappa0^2/2) + kappa^3/2
///             - gamma0 + kappa0,  state (kappa, kappadot), classic RK4.
struct KappaSeries {
    TimeGrid grid;
    std::vector<double> kappa;
    std::vector<double> kappa_dot;
};

inline KappaSeries kappa_ode_solve(double alpha0, double delta0, double gamma0, double kappa0,
                                   double kappadot0, const TimeGrid& grid, double blowup_bound = 1e6) {
    const double coeff = 1.0 - 0.5 * (alpha0 + delta0) + 0.5 * kappa0 * kappa0;
    const double source = -gamma0 + kappa0;
    auto acc = [&](double k) { return -k * coeff + 0.5 * k * k * k + source; };

    KappaSeries out;
    out.grid = grid;
    out.kappa.reserve(static_cast<size_t>(grid.nodes()));
    out.kappa_dot.reserve(static_cast<size_t>(grid.nodes()));
    double k = kappa0, kd = kappadot0;
    out.kappa.push_back(k);
    out.kappa_dot.push_back(kd);
    const double dt = grid.dt();
    for (int s = 0; s < grid.steps; ++s) {
        const double k1v = kd, k1a = acc(k);
        const double k2v = kd + 0.5 * dt * k1a, k2a = acc(k + 0.5 * dt * k1v);
        const double k3v = kd + 0.5 * dt * k2a, k3a = acc(k + 0.5 * dt * k2v);
        const double k4v = kd + dt * k3a, k4a = acc(k + dt * k3v);
        k += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        kd += (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        if (!(std::abs(k) <= blowup_bound))
            throw Blowup("kappa_ode_solve: |kappa| exceeded " + std::to_string(blowup_bound) +
                             " at t=" + std::to_string(grid.node(s + 1)),
                         grid.node(s + 1));
        out.kappa.push_back(k);
        out.kappa_dot.push_back(kd);
    }
    return out;
}

/// Hermitian 2x2 metric from the ansatz entries.
inline ComplexMatrix assemble_metric(double m_a, double m_b, double m_g, double m_d) {
    return ComplexMatrix(2, {cx{m_a, 0.0}, cx{m_b, m_g}, cx{m_b, -m_g}, cx{m_d, 0.0}});
}

/// Compensated determinant of the Hermitian 2x2 [[a, b+ig],[b-ig, d]].
inline double det2_hermitian(double a, double d, double b, double g) {
    const double bb = b * b;
    const double r = std::fma(a, d, -bb) - std::fma(b, b, -bb);
    return std::fma(-g, g, r);
}

// Small local series type so this header does not depend on the propagator.
struct RealSeriesLike {
    std::vector<double> times;
    std::vector<double> values;
    double max_abs = 0.0;
};

struct MetricSeries {
    Trajectory<ComplexMatrix> rho;
    std::vector<double> m_a, m_b, m_g, m_d;
    RealSeriesLike constraint_residual;
};

/// Metric entries from quadrature of the sampled series:
/// m_a = alpha0 + int beta kappa, m_d = delta0 + same, m_g = gamma0 + int beta,
/// m_b = beta. The constraint residual
/// betadot + int beta - kappa int beta kappa - (kappa/2)(alpha0+delta0) + gamma0
/// is reported on interior nodes (4th-order differences for betadot).
inline MetricSeries metric_entries(const std::vector<double>& beta_series,
                                   const std::vector<double>& kappa_series, double alpha0,
                                   double delta0, double gamma0, const TimeGrid& grid) {
    const size_t n = beta_series.size();
    if (n != static_cast<size_t>(grid.nodes()) || kappa_series.size() != n)
        throw InvalidArgument("metric_entries: series not aligned with grid");
    const double dt = grid.dt();

    std::vector<double> bk(n);
    for (size_t i = 0; i < n; ++i) bk[i] = beta_series[i] * kappa_series[i];
    const std::vector<double> int_b = cumulative_simpson_series(beta_series, dt);
    const std::vector<double> int_bk = cumulative_simpson_series(bk, dt);

    MetricSeries out;
    out.rho.grid = grid;
    out.rho.values.reserve(n);
    out.m_a.resize(n);
    out.m_b.resize(n);
    out.m_g.resize(n);
    out.m_d.resize(n);
    for (size_t i = 0; i < n; ++i) {
        out.m_a[i] = alpha0 + int_bk[i];
        out.m_d[i] = delta0 + int_bk[i];
        out.m_g[i] = gamma0 + int_b[i];
        out.m_b[i] = beta_series[i];
        out.rho.values.push_back(assemble_metric(out.m_a[i], out.m_b[i], out.m_g[i], out.m_d[i]));
    }
    if (n >= 5) {
        for (size_t k = 2; k + 2 < n; ++k) {
            const double betadot = (-beta_series[k + 2] + 8.0 * beta_series[k + 1] -
                                    8.0 * beta_series[k - 1] + beta_series[k - 2]) /
                                   (12.0 * dt);
            const double r = betadot + int_b[k] - kappa_series[k] * int_bk[k] -
                             0.5 * kappa_series[k] * (alpha0 + delta0) + gamma0;
            out.constraint_residual.times.push_back(grid.node(static_cast<int>(k)));
            out.constraint_residual.values.push_back(r);
            out.constraint_residual.max_abs = std::max(out.constraint_residual.max_abs, std::abs(r));
        }
    }
    return out;
}

enum class FamilyKind { tan, sec, tanh };

inline FamilyKind family_from_name(const std::string& name) {
    if (name == "s1" || name == "tan") return FamilyKind::tan;
    if (name == "s2" || name == "sec") return FamilyKind::sec;
    if (name == "s3" || name == "tanh") return FamilyKind::tanh;
    throw InvalidArgument("unknown closed-solution family: " + name);
}

/// One closed solution of the constraint ODE with its parameter bindings.
/// The tan/sec branches keep sec^2 correlated with tan^2 (s^2 = 1 + tan^2)
/// so that determinant cancellations survive in floating point.
struct ClosedSolutionFamily {
    FamilyKind kind = FamilyKind::tan;
    double delta0 = 1.0;
    double gamma0 = 0.0;
    double alpha0 = 0.0;
    double det0 = 0.0;     // the family's quadratic in delta0
    double kappa0 = 0.0;   // kappa(0)
    double kappadot0 = 0.0;

    double kappa(double t) const {
        switch (kind) {
            case FamilyKind::tan: return 2.0 * std::tan(t);
            case FamilyKind::sec: return 2.0 / std::cos(t);
            default: return 2.0 * std::tanh(t);
        }
    }
    double kappa_dot(double t) const {
        switch (kind) {
            case FamilyKind::tan: {
                const double u = std::tan(t);
                return 2.0 * (1.0 + u * u);
            }
            case FamilyKind::sec: {
                const double s = 1.0 / std::cos(t);
                return 2.0 * s * std::tan(t);
            }
            default: {
                const double c = std::cosh(t);
                return 2.0 / (c * c);
            }
        }
    }
    double kappa_ddot(double t) const {
        switch (kind) {
            case FamilyKind::tan: {
                const double u = std::tan(t);
                return 4.0 * (1.0 + u * u) * u;
            }
            case FamilyKind::sec: {
                const double s = 1.0 / std::cos(t);
                const double u = std::tan(t);
                return 2.0 * s * (s * s + u * u);
            }
            default: {
                const double c = std::cosh(t);
                return -4.0 * std::tanh(t) / (c * c);
            }
        }
    }

    double singularity_distance(double t) const {
        if (kind == FamilyKind::tanh) return std::numeric_limits<double>::infinity();
        const double pi = 3.14159265358979323846;
        const double k = std::round((t - pi / 2.0) / pi);
        return std::abs(t - (pi / 2.0 + k * pi));
    }

    /// Closed-form metric entries (under beta = kappadot).
    void metric_entries_at(double t, double& m_a, double& m_b, double& m_g, double& m_d) const {
        const double k = kappa(t);
        const double int_bk = 0.5 * (k * k - kappa0 * kappa0);
        m_a = alpha0 + int_bk;
        m_d = delta0 + int_bk;
        m_g = gamma0 + (k - kappa0);
        m_b = kappa_dot(t);
    }
    ComplexMatrix metric_at(double t) const {
        double a, b, g, d;
        metric_entries_at(t, a, b, g, d);
        return assemble_metric(a, b, g, d);
    }
    ComplexMatrix metric_dot_at(double t) const {
        const double k = kappa(t), kd = kappa_dot(t), kdd = kappa_ddot(t);
        return ComplexMatrix(2, {cx{kd * k, 0.0}, cx{kdd, kd}, cx{kdd, -kd}, cx{kd * k, 0.0}});
    }
    double det_rho0_direct() const {
        return det2_hermitian(alpha0, delta0, kappadot0, gamma0);
    }
};

inline ClosedSolutionFamily closed_family(FamilyKind kind, double delta0) {
    ClosedSolutionFamily f;
    f.kind = kind;
    f.delta0 = delta0;
    switch (kind) {
        case FamilyKind::tan:
            f.gamma0 = 0.0;
            f.alpha0 = 6.0 - delta0;
            f.det0 = -4.0 + 6.0 * delta0 - delta0 * delta0;
            f.kappa0 = 0.0;
            f.kappadot0 = 2.0;
            break;
        case FamilyKind::sec:
            f.gamma0 = 2.0;
            f.alpha0 = 4.0 - delta0;
            f.det0 = -4.0 + 4.0 * delta0 - delta0 * delta0;
            f.kappa0 = 2.0;
            f.kappadot0 = 0.0;
            break;
        case FamilyKind::tanh:
            f.gamma0 = 0.0;
            f.alpha0 = -2.0 - delta0;
            f.det0 = -4.0 - 2.0 * delta0 - delta0 * delta0;
            f.kappa0 = 0.0;
            f.kappadot0 = 2.0;
            break;
    }
    return f;
}

/// The displayed closed forms for the tan family at delta0 = 1: metric,
/// Dyson operator, Hermitian Hamiltonian, plus their analytic derivatives
/// and the non-Hermitian H_1. Self-consistency is enforced on construction.
struct ExplicitTriple {
    ComplexMatrix rho, rho_dot;
    ComplexMatrix eta, eta_dot;
    ComplexMatrix h;
    ComplexMatrix H;
};

inline ExplicitTriple explicit_triple(double t, double lambda_t,
                                      double sing_margin = kSingularityMargin) {
    const double pi = 3.14159265358979323846;
    const double knear = std::round((t - pi / 2.0) / pi);
    if (std::abs(t - (pi / 2.0 + knear * pi)) < sing_margin)
        throw SingularityTooClose("explicit_triple: t=" + std::to_string(t) +
                                  " too close to a pole of tan");

    const double T = std::tan(t);
    const double u = T * T;
    const double s2 = 1.0 + u;       // sec^2, correlated with tan^2
    const double w = s2 + 1.0;
    const double rw = std::sqrt(w);

    ExplicitTriple out{ComplexMatrix(2), ComplexMatrix(2), ComplexMatrix(2), ComplexMatrix(2),
                       ComplexMatrix(2), ComplexMatrix(2)};

    out.rho = assemble_metric(5.0 + 2.0 * u, 2.0 * s2, 2.0 * T, 1.0 + 2.0 * u);
    out.rho_dot = ComplexMatrix(2, {cx{4.0 * s2 * T, 0.0}, cx{4.0 * s2 * T, 2.0 * s2},
                                    cx{4.0 * s2 * T, -2.0 * s2}, cx{4.0 * s2 * T, 0.0}});

    out.eta = ComplexMatrix(2, {cx{(2.0 + s2) / rw, 0.0}, cx{s2 / rw, T / rw},
                                cx{s2 / rw, -T / rw}, cx{s2 / rw, 0.0}});
    const double w32 = w * rw;
    out.eta_dot = ComplexMatrix(
        2, {cx{s2 * s2 * T / w32, 0.0}, cx{s2 * T * (s2 + 2.0) / w32, 2.0 * s2 / w32},
            cx{s2 * T * (s2 + 2.0) / w32, -2.0 * s2 / w32}, cx{s2 * T * (s2 + 2.0) / w32, 0.0}});

    const double c2t = std::cos(2.0 * t);
    const double s2t = std::sin(2.0 * t);
    const double pref = 1.0 / (3.0 + c2t);
    out.h = ComplexMatrix(
        2, {cx{-0.5 * pref * (1.0 + 3.0 * lambda_t + (3.0 + lambda_t) * c2t), 0.0},
            cx{0.0, -pref * s2t}, cx{0.0, pref * s2t},
            cx{0.5 * pref * (1.0 - 3.0 * lambda_t + (3.0 - lambda_t) * c2t), 0.0}});

    out.H = h1_matrix(lambda_t, 2.0 * T);

    // Self-consistency of the displayed forms.
    const double det = det2_hermitian(5.0 + 2.0 * u, 1.0 + 2.0 * u, 2.0 * s2, 2.0 * T);
    if (std::abs(det - 1.0) > 1e-12)
        throw Error("explicit_triple: det rho deviates from 1 by " + std::to_string(det - 1.0));
    const double sq_defect = (out.eta * out.eta - out.rho).frobenius_norm();
    if (sq_defect > 1e-12 * std::max(1.0, out.rho.frobenius_norm()))
        throw Error("explicit_triple: eta^2 != rho, defect " + std::to_string(sq_defect));
    const ComplexMatrix eta_inv = inverse(out.eta);
    const ComplexMatrix dy =
        out.h - out.eta * out.H * eta_inv - CI * (out.eta_dot * eta_inv);
    if (dy.frobenius_norm() > 1e-10 * std::max(1.0, out.H.frobenius_norm()))
        throw Error("explicit_triple: Dyson relation residual " +
                    std::to_string(dy.frobenius_norm()));
    return out;
}

struct AdmissibilityRow {
    double delta0 = 0.0;
    double det0_family = 0.0;  // the family quadratic
    double det0_direct = 0.0;  // from the assembled rho(0)
    double min_eigenvalue = 0.0;
    bool admissible = false;
};

/// Positive-definiteness of rho(0) across a delta0 scan.
inline std::vector<AdmissibilityRow> positivity_window(FamilyKind kind,
                                                       const std::vector<double>& delta0_values) {
    std::vector<AdmissibilityRow> rows;
    rows.reserve(delta0_values.size());
    for (double d0 : delta0_values) {
        const auto fam = closed_family(kind, d0);
        AdmissibilityRow row;
        row.delta0 = d0;
        row.det0_family = fam.det0;
        row.det0_direct = fam.det_rho0_direct();
        const double tr = fam.alpha0 + fam.delta0;
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * row.det0_direct));
        row.min_eigenvalue = 0.5 * (tr - disc);
        row.admissible = row.min_eigenvalue > 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace qh::spin
