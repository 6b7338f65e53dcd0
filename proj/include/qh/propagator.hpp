#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qh/expm.hpp"
#include "qh/grid.hpp"
#include "qh/linalg.hpp"
#include "qh/matrix.hpp"
#include "qh/relations.hpp"

namespace qh {

using MatrixOfTime = std::function<ComplexMatrix(double)>;

struct HermitianEvolveResult {
    Trajectory<ComplexMatrix> u;       // u(t_k, t0)
    double unitarity_defect_max = 0.0; // max_k ||u_k^dagger u_k - I||_F
    double c_bound = 0.0;              // defect / (dt^2 (t1-t0))
};

/// Time-ordered propagator for a Hermitian generator: per-step midpoint
/// exponential u <- exp(-i dt h(t_mid)) u. Each factor is unitary, so the
/// only unitarity defect is roundoff; the midpoint rule makes the
/// time-ordering error second order.
inline HermitianEvolveResult evolve_hermitian(const MatrixOfTime& h_of_t, const TimeGrid& grid,
                                              double herm_tol = 1e-10) {
    HermitianEvolveResult res;
    res.u.grid = grid;
    res.u.values.reserve(static_cast<size_t>(grid.nodes()));

    const ComplexMatrix first = h_of_t(grid.midpoint(0));
    const int n = first.dim();
    ComplexMatrix u = ComplexMatrix::identity(n);
    res.u.values.push_back(u);
    const ComplexMatrix eye = ComplexMatrix::identity(n);
    const double dt = grid.dt();

    for (int k = 0; k < grid.steps; ++k) {
        const ComplexMatrix hm = (k == 0) ? first : h_of_t(grid.midpoint(k));
        const double defect = hermiticity_defect(hm);
        const double scale = std::max(1.0, hm.frobenius_norm());
        if (defect > herm_tol * scale)
            throw NotHermitian("evolve_hermitian: generator not Hermitian at t=" +
                               std::to_string(grid.midpoint(k)));
        ComplexMatrix exponent = hm;
        exponent *= cx{0.0, -dt};
        u = expm(exponent) * u;
        res.u.values.push_back(u);
        const double ud = (u.adjoint() * u - eye).frobenius_norm();
        if (ud > res.unitarity_defect_max) res.unitarity_defect_max = ud;
    }
    res.c_bound = res.unitarity_defect_max / (dt * dt * (grid.t1 - grid.t0));
    return res;
}

struct MetricEvolveResult {
    Trajectory<ComplexMatrix> rho;
    double symmetrization_drift_max = 0.0;  // max pre-symmetrization Hermiticity defect
    std::vector<double> min_eigenvalues;    // one per node
};

/// Classic fixed-step RK4 on rhodot = -i (H^dagger rho - rho H), with
/// Hermitian symmetrization after each step and positivity monitoring.
inline MetricEvolveResult evolve_metric(const MatrixOfTime& H_of_t, const ComplexMatrix& rho0,
                                        const TimeGrid& grid, double pos_tol = 1e-10) {
    {
        const auto pd = posdef_check(rho0, 1e-8 * std::max(1.0, rho0.frobenius_norm()));
        if (!pd.positive_definite)
            throw NotPositiveDefinite("evolve_metric: rho0 min eigenvalue " +
                                      std::to_string(pd.min_eigenvalue));
    }
    MetricEvolveResult res;
    res.rho.grid = grid;
    res.rho.values.reserve(static_cast<size_t>(grid.nodes()));
    res.min_eigenvalues.reserve(static_cast<size_t>(grid.nodes()));

    auto rhs = [](const ComplexMatrix& H, const ComplexMatrix& rho) {
        ComplexMatrix r = H.adjoint() * rho - rho * H;
        r *= cx{0.0, -1.0};
        return r;
    };

    ComplexMatrix rho = hermitian_part(rho0);
    const double dt = grid.dt();
    auto record = [&](const ComplexMatrix& m, double t) {
        const auto dec = hermitian_eigen(m, 1e-6 * std::max(1.0, m.frobenius_norm()));
        const double min_eig = dec.eigenvalues.front();
        res.min_eigenvalues.push_back(min_eig);
        if (min_eig <= pos_tol)
            throw PositivityLost("evolve_metric: metric positivity lost at t=" + std::to_string(t),
                                 t);
    };
    record(rho, grid.t0);
    res.rho.values.push_back(rho);

    ComplexMatrix H_lo = H_of_t(grid.t0);
    for (int k = 0; k < grid.steps; ++k) {
        const double t = grid.node(k);
        const ComplexMatrix H_mid = H_of_t(t + 0.5 * dt);
        const ComplexMatrix H_hi = H_of_t(t + dt);

        const ComplexMatrix k1 = rhs(H_lo, rho);
        ComplexMatrix tmp = k1; tmp *= cx{0.5 * dt, 0.0}; tmp += rho;
        const ComplexMatrix k2 = rhs(H_mid, tmp);
        tmp = k2; tmp *= cx{0.5 * dt, 0.0}; tmp += rho;
        const ComplexMatrix k3 = rhs(H_mid, tmp);
        tmp = k3; tmp *= cx{dt, 0.0}; tmp += rho;
        const ComplexMatrix k4 = rhs(H_hi, tmp);

        ComplexMatrix incr = k1;
        incr += k4;
        ComplexMatrix mid = k2; mid += k3; mid *= cx{2.0, 0.0};
        incr += mid;
        incr *= cx{dt / 6.0, 0.0};
        rho += incr;

        const double drift = hermiticity_defect(rho);
        if (drift > res.symmetrization_drift_max) res.symmetrization_drift_max = drift;
        rho = hermitian_part(rho);

        record(rho, t + dt);
        res.rho.values.push_back(rho);
        H_lo = H_hi;
    }
    return res;
}

/// RK4 on a state: psidot = -i H(t) psi.
inline Trajectory<CxVector> evolve_state(const MatrixOfTime& H_of_t, const CxVector& psi0,
                                         const TimeGrid& grid) {
    Trajectory<CxVector> traj;
    traj.grid = grid;
    traj.values.reserve(static_cast<size_t>(grid.nodes()));
    traj.values.push_back(psi0);

    auto axpy = [](const CxVector& x, cx a, const CxVector& y) {
        CxVector r(x.size());
        for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + a * y[i];
        return r;
    };
    auto rhs = [](const ComplexMatrix& H, const CxVector& psi) {
        CxVector r = H * psi;
        for (auto& z : r) z *= cx{0.0, -1.0};
        return r;
    };

    CxVector psi = psi0;
    const double dt = grid.dt();
    ComplexMatrix H_lo = H_of_t(grid.t0);
    for (int k = 0; k < grid.steps; ++k) {
        const double t = grid.node(k);
        const ComplexMatrix H_mid = H_of_t(t + 0.5 * dt);
        const ComplexMatrix H_hi = H_of_t(t + dt);
        const CxVector k1 = rhs(H_lo, psi);
        const CxVector k2 = rhs(H_mid, axpy(psi, cx{0.5 * dt, 0.0}, k1));
        const CxVector k3 = rhs(H_mid, axpy(psi, cx{0.5 * dt, 0.0}, k2));
        const CxVector k4 = rhs(H_hi, axpy(psi, cx{dt, 0.0}, k3));
        for (size_t i = 0; i < psi.size(); ++i)
            psi[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        traj.values.push_back(psi);
        H_lo = H_hi;
    }
    return traj;
}

/// U(t, t0) = eta^{-1}(t) u(t, t0) eta(t0) at every node.
inline Trajectory<ComplexMatrix> map_evolution(const Trajectory<ComplexMatrix>& u_traj,
                                               const MatrixOfTime& eta_of_t) {
    Trajectory<ComplexMatrix> out;
    out.grid = u_traj.grid;
    out.values.reserve(u_traj.values.size());
    const ComplexMatrix eta0 = eta_of_t(u_traj.grid.t0);
    for (int k = 0; k < u_traj.nodes(); ++k) {
        const double t = u_traj.grid.node(k);
        const ComplexMatrix eta_t = eta_of_t(t);
        try {
            require_invertible_eta(eta_t);
        } catch (const SingularEta&) {
            throw SingularEta("map_evolution: eta singular at t=" + std::to_string(t));
        }
        out.values.push_back(solve(eta_t, u_traj.at(k) * eta0));
    }
    return out;
}

/// Named residual/diagnostic time series.
struct RealSeries {
    std::vector<double> times;
    std::vector<double> values;
    double max_abs = 0.0;
};

/// || H(t) psi(t) - i psidot(t) ||_2 on interior nodes, with the state
/// derivative from 4th-order central differences. Endpoints are excluded.
inline RealSeries tdse_residual(const Trajectory<CxVector>& traj, const MatrixOfTime& H_of_t) {
    const int n = traj.nodes();
    if (n < 5) throw GridTooShort("tdse_residual: need at least 5 nodes for 4th-order stencil");
    RealSeries out;
    const double dt = traj.grid.dt();
    for (int k = 2; k < n - 2; ++k) {
        const CxVector& m2 = traj.at(k - 2);
        const CxVector& m1 = traj.at(k - 1);
        const CxVector& p1 = traj.at(k + 1);
        const CxVector& p2 = traj.at(k + 2);
        CxVector dpsi(m2.size());
        for (size_t i = 0; i < dpsi.size(); ++i)
            dpsi[i] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * dt);
        const double t = traj.grid.node(k);
        CxVector r = H_of_t(t) * traj.at(k);
        for (size_t i = 0; i < r.size(); ++i) r[i] -= CI * dpsi[i];
        const double v = vector_norm(r);
        out.times.push_back(t);
        out.values.push_back(v);
        if (v > out.max_abs) out.max_abs = v;
    }
    return out;
}

/// <psi(t) | rho(t) psi(t)> per node plus its maximal drift from the initial
/// value. The imaginary part is discarded (it vanishes for Hermitian rho).
struct ConservationSeries {
    std::vector<double> times;
    std::vector<double> values;
    double max_drift = 0.0;
};

inline ConservationSeries conservation_series(const Trajectory<CxVector>& traj,
                                              const MatrixOfTime& rho_of_t) {
    ConservationSeries out;
    for (int k = 0; k < traj.nodes(); ++k) {
        const double t = traj.grid.node(k);
        const double p = rho_inner(traj.at(k), traj.at(k), rho_of_t(t)).real();
        out.times.push_back(t);
        out.values.push_back(p);
    }
    for (double p : out.values) out.max_drift = std::max(out.max_drift, std::abs(p - out.values.front()));
    return out;
}

} // namespace qh
