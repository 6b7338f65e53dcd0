#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qh/expm.hpp"
#include "qh/grid.hpp"
#include "qh/matrix.hpp"
#include "qh/quadrature.hpp"
#include "qh/timefunction.hpp"

namespace qh::osc {

/// Truncated creation/annihilation pair: a|n> = sqrt(n)|n-1>. The commutator
/// [a, a^dagger] equals the identity except for the last diagonal entry,
/// which truncation turns into 1-dim.
inline std::pair<ComplexMatrix, ComplexMatrix> fock_operators(int dim) {
    if (dim < 2) throw InvalidArgument("fock_operators: dim must be at least 2");
    ComplexMatrix a(dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {a, a.adjoint()};
}

inline ComplexMatrix number_operator(int dim) {
    ComplexMatrix n_op(dim);
    for (int n = 0; n < dim; ++n) n_op(n, n) = static_cast<double>(n);
    return n_op;
}

struct OscillatorParams {
    TimeFunction omega;  // oscillator frequency (real for the solved family)
    TimeFunction alpha;  // coefficient of a
    TimeFunction beta;   // coefficient of a^dagger
    int dim = 16;        // Fock truncation
    cx gamma0{0.0, 0.0}; // initial Dyson exponent

    /// The analytically solved branch fixes beta = -conj(alpha).
    static OscillatorParams solved_family(TimeFunction omega, TimeFunction alpha, int dim,
                                          cx gamma0) {
        OscillatorParams p;
        p.omega = std::move(omega);
        p.beta = TimeFunction::scaled(cx{-1.0, 0.0}, alpha.conjugate());
        p.alpha = std::move(alpha);
        p.dim = dim;
        p.gamma0 = gamma0;
        return p;
    }
};

/// Pointwise gate for the solved branch: omega real and beta = -conj(alpha).
inline void require_solved_family(const OscillatorParams& p, const TimeGrid& grid,
                                  double tol = 1e-12) {
    for (int k = 0; k <= grid.steps; ++k) {
        const double t = grid.node(k);
        if (std::abs(p.omega.value(t).imag()) > tol)
            throw InvalidArgument("solved-family gate: omega not real at t=" + std::to_string(t));
        if (std::abs(p.beta.value(t) + std::conj(p.alpha.value(t))) > tol)
            throw InvalidArgument("solved-family gate: beta != -conj(alpha) at t=" +
                                  std::to_string(t));
    }
}

/// H(t) = omega a^dagger a + alpha a + beta a^dagger on the truncated space.
inline ComplexMatrix build_H(const OscillatorParams& p, double t) {
    const auto [a, adag] = fock_operators(p.dim);
    ComplexMatrix h = number_operator(p.dim);
    h *= p.omega.value(t);
    ComplexMatrix ta = a;
    ta *= p.alpha.value(t);
    h += ta;
    ComplexMatrix tb = adag;
    tb *= p.beta.value(t);
    h += tb;
    return h;
}

/// Solution data of the Dyson-exponent equation along a grid. All series are
/// node-aligned; f is kept complex so its (tiny) imaginary part stays
/// observable to the checks.
struct GammaSeries {
    TimeGrid grid;
    std::vector<cx> gamma;
    std::vector<cx> gamma_dot;
    std::vector<double> chi;    // integral of omega from 0 to t
    std::vector<cx> f;          // scalar shift in the Hermitian counterpart
    std::vector<double> int_f;  // integral of Re f from 0 to t
    double richardson_error = 0.0;

    cx gamma_at(int k) const { return gamma[static_cast<size_t>(k)]; }
};

namespace detail {

struct GammaPass {
    std::vector<cx> gamma, gamma_dot, f;
    std::vector<double> chi, int_f;
};

inline GammaPass gamma_pass(const OscillatorParams& p, const TimeGrid& grid, int refine) {
    const int m = grid.steps * refine;  // fine intervals
    const double h = grid.dt() / refine;

    // chi on the fine grid and at fine midpoints (Simpson per subinterval).
    std::vector<double> chi_fine(static_cast<size_t>(m + 1), 0.0);
    std::vector<double> chi_mid(static_cast<size_t>(m), 0.0);
    auto w = [&](double t) { return p.omega.value(t).real(); };
    for (int j = 0; j < m; ++j) {
        const double s0 = grid.t0 + j * h;
        chi_mid[static_cast<size_t>(j)] =
            chi_fine[static_cast<size_t>(j)] +
            (h / 12.0) * (w(s0) + 4.0 * w(s0 + 0.25 * h) + w(s0 + 0.5 * h));
        chi_fine[static_cast<size_t>(j + 1)] =
            chi_fine[static_cast<size_t>(j)] +
            (h / 6.0) * (w(s0) + 4.0 * w(s0 + 0.5 * h) + w(s0 + h));
    }

    // Bracket integral B(t) = int_0^t alpha(s) e^{-i chi(s)} ds on fine nodes.
    auto F = [&](double t, double chi_t) { return p.alpha.value(t) * std::exp(cx{0.0, -chi_t}); };
    std::vector<cx> b_fine(static_cast<size_t>(m + 1), cx{0.0, 0.0});
    for (int j = 0; j < m; ++j) {
        const double s0 = grid.t0 + j * h;
        const cx f0 = F(s0, chi_fine[static_cast<size_t>(j)]);
        const cx fm = F(s0 + 0.5 * h, chi_mid[static_cast<size_t>(j)]);
        const cx f1 = F(s0 + h, chi_fine[static_cast<size_t>(j + 1)]);
        b_fine[static_cast<size_t>(j + 1)] =
            b_fine[static_cast<size_t>(j)] + (h / 6.0) * (f0 + 4.0 * fm + f1);
    }

    // gamma, analytic gamma_dot and the scalar shift f on the fine grid.
    std::vector<cx> gamma_fine(static_cast<size_t>(m + 1));
    std::vector<cx> f_fine(static_cast<size_t>(m + 1));
    for (int j = 0; j <= m; ++j) {
        const double t = grid.t0 + j * h;
        const cx g = std::exp(cx{0.0, chi_fine[static_cast<size_t>(j)]}) *
                     (p.gamma0 + CI * b_fine[static_cast<size_t>(j)]);
        gamma_fine[static_cast<size_t>(j)] = g;
        const cx gd = CI * (p.alpha.value(t) + p.omega.value(t) * g);
        const cx z = gd * std::conj(g);
        f_fine[static_cast<size_t>(j)] =
            p.omega.value(t) * std::norm(g) + cx{0.0, 0.5} * (z - std::conj(z));
    }
    const std::vector<cx> intf_fine = cumulative_simpson_series(f_fine, h);

    GammaPass out;
    out.gamma.reserve(static_cast<size_t>(grid.nodes()));
    for (int k = 0; k <= grid.steps; ++k) {
        const size_t j = static_cast<size_t>(k) * refine;
        const double t = grid.node(k);
        const cx g = gamma_fine[j];
        out.gamma.push_back(g);
        out.gamma_dot.push_back(CI * (p.alpha.value(t) + p.omega.value(t) * g));
        out.chi.push_back(chi_fine[j]);
        out.f.push_back(f_fine[j]);
        out.int_f.push_back(intf_fine[j].real());
    }
    return out;
}

} // namespace detail

/// gamma(t) = e^{i chi(t)} [gamma(0) + i int_0^t alpha(s) e^{-i chi(s)} ds]
/// by composite Simpson quadrature (internally refined), with the analytic
/// derivative gammadot = i (alpha + omega gamma). A Richardson comparison of
/// two refinement levels gates quadrature accuracy.
inline GammaSeries gamma_solve(const OscillatorParams& p, const TimeGrid& grid, int refine = 4) {
    if (std::abs(grid.t0) > 0.0)
        throw InvalidArgument("gamma_solve: grid must start at t=0, the anchor of the integrals");
    require_solved_family(p, grid);

    const auto coarse = detail::gamma_pass(p, grid, refine);
    const auto fine = detail::gamma_pass(p, grid, 2 * refine);
    double est = 0.0;
    for (size_t k = 0; k < coarse.gamma.size(); ++k) {
        est = std::max(est, std::abs(coarse.gamma[k] - fine.gamma[k]));
        est = std::max(est, std::abs(coarse.int_f[k] - fine.int_f[k]));
    }
    if (est > 1e-10)
        throw QuadratureTooCoarse("gamma_solve: Richardson estimate " + std::to_string(est) +
                                  " exceeds 1e-10");
    GammaSeries out;
    out.grid = grid;
    out.gamma = fine.gamma;
    out.gamma_dot = fine.gamma_dot;
    out.chi = fine.chi;
    out.f = fine.f;
    out.int_f = fine.int_f;
    out.richardson_error = est;
    return out;
}

/// The two Hermiticity constraints and the (u, v, f) coefficients of the
/// transformed generator, for arbitrary exponent pair (gamma, lambda).
struct DysonCoefficients {
    cx u, v, f;
    cx const1, const2;
};

inline DysonCoefficients dyson_coefficients(cx alpha, cx beta, cx omega, cx gamma, cx gamma_dot,
                                            cx lambda, cx lambda_dot) {
    DysonCoefficients c;
    c.u = alpha + omega * gamma + CI * gamma_dot;
    c.v = beta - omega * lambda + CI * lambda_dot;
    c.f = cx{0.0, 0.5} * (gamma * lambda_dot - gamma_dot * lambda) - omega * gamma * lambda -
          alpha * lambda + beta * gamma;
    c.const1 = alpha - std::conj(beta) + omega * (gamma + std::conj(lambda)) +
               CI * (gamma_dot + std::conj(lambda_dot));
    c.const2 = cx{0.0, 0.5} * (gamma * lambda_dot - gamma_dot * lambda +
                               std::conj(gamma) * std::conj(lambda_dot) -
                               std::conj(gamma_dot) * std::conj(lambda)) +
               omega * (std::conj(gamma) * std::conj(lambda) - gamma * lambda) +
               std::conj(alpha) * std::conj(lambda) - alpha * lambda + beta * gamma -
               std::conj(beta) * std::conj(gamma);
    return c;
}

struct HermitianForm {
    cx u, v, f;
    cx const1, const2;
    ComplexMatrix h;  // omega a^dagger a + u a + v a^dagger + f
};

/// Hermitian counterpart coefficients on the adopted branch lambda = conj(gamma).
inline HermitianForm hermitian_form(const OscillatorParams& p, cx gamma, cx gamma_dot, double t) {
    const cx omega = p.omega.value(t);
    const cx alpha = p.alpha.value(t);
    const cx beta = p.beta.value(t);
    const auto c =
        dyson_coefficients(alpha, beta, omega, gamma, gamma_dot, std::conj(gamma), std::conj(gamma_dot));
    HermitianForm out{c.u, c.v, c.f, c.const1, c.const2, ComplexMatrix(p.dim)};
    const auto [a, adag] = fock_operators(p.dim);
    out.h = number_operator(p.dim);
    out.h *= omega;
    ComplexMatrix ua = a;
    ua *= c.u;
    out.h += ua;
    ComplexMatrix va = adag;
    va *= c.v;
    out.h += va;
    for (int n = 0; n < p.dim; ++n) out.h(n, n) += c.f;
    return out;
}

/// eta = exp(gamma a + conj(gamma) a^dagger): Hermitian by construction.
inline ComplexMatrix build_eta(cx gamma, int dim) {
    if (dim < 8) throw InvalidArgument("build_eta: dim must be at least 8");
    const auto [a, adag] = fock_operators(dim);
    ComplexMatrix g = a;
    g *= gamma;
    ComplexMatrix gd = adag;
    gd *= std::conj(gamma);
    g += gd;
    return expm(g);
}

/// Apply exp(s (gamma a + conj(gamma) a^dagger)) to a state without forming
/// the dense exponential: scaled Taylor series on the tridiagonal action.
inline CxVector displace_apply(cx gamma, double s, const CxVector& v) {
    const int dim = static_cast<int>(v.size());
    const double bound = 2.0 * std::abs(gamma) * std::abs(s) * std::sqrt(static_cast<double>(dim));
    int halvings = 0;
    if (bound > 0.5) halvings = static_cast<int>(std::ceil(std::log2(bound / 0.5)));
    if (halvings > 60) throw Overflow("displace_apply: exponent norm too large");
    const double step = s * std::ldexp(1.0, -halvings);

    auto apply_g = [&](const CxVector& x) {
        CxVector y(x.size(), cx{0.0, 0.0});
        for (int n = 0; n < dim; ++n) {
            cx acc{0.0, 0.0};
            if (n + 1 < dim) acc += gamma * std::sqrt(static_cast<double>(n + 1)) * x[static_cast<size_t>(n + 1)];
            if (n > 0) acc += std::conj(gamma) * std::sqrt(static_cast<double>(n)) * x[static_cast<size_t>(n - 1)];
            y[static_cast<size_t>(n)] = step * acc;
        }
        return y;
    };

    CxVector w = v;
    const int reps = 1 << halvings;
    for (int r = 0; r < reps; ++r) {
        CxVector acc = w;
        CxVector term = w;
        for (int k = 1; k <= 40; ++k) {
            term = apply_g(term);
            for (auto& z : term) z /= static_cast<double>(k);
            double tn = 0.0, an = 0.0;
            for (size_t i = 0; i < term.size(); ++i) {
                acc[i] += term[i];
                tn += std::norm(term[i]);
                an += std::norm(acc[i]);
            }
            if (tn <= 1e-36 * std::max(an, 1e-300)) break;
        }
        w = acc;
    }
    return w;
}

/// Normalized coherent state: e^{-|theta|^2/2} sum theta^n / sqrt(n!) |n>.
inline CxVector coherent_state(cx theta, int dim, double tail_tol = 1e-12) {
    CxVector v(static_cast<size_t>(dim));
    cx c = std::exp(cx{-0.5 * std::norm(theta), 0.0});
    double mass = 0.0;
    for (int n = 0; n < dim; ++n) {
        v[static_cast<size_t>(n)] = c;
        mass += std::norm(c);
        c *= theta / std::sqrt(static_cast<double>(n + 1));
    }
    if (1.0 - mass > tail_tol)
        throw TruncationTooSmall("coherent_state: tail mass " + std::to_string(1.0 - mass) +
                                 " above " + std::to_string(tail_tol));
    return v;
}

/// Coherent amplitude and phase data of the ground solution.
struct CoherentSolution {
    cx theta0{0.0, 0.0};
    double phi0_init = 0.0;
};

/// phi(t) = e^{i phi0(t)} |theta(0) e^{-i chi(t)}>, the invariant eigenstate
/// dressed with its time-dependent phase, sampled on the series grid.
inline Trajectory<CxVector> ground_solution(const CoherentSolution& sol, const GammaSeries& series,
                                            int dim) {
    if (std::norm(sol.theta0) > 0.25 * dim)
        throw TruncationTooSmall("ground_solution: |theta0|^2 too close to dim");
    Trajectory<CxVector> traj;
    traj.grid = series.grid;
    traj.values.reserve(series.gamma.size());
    for (size_t k = 0; k < series.gamma.size(); ++k) {
        const double phi0 = sol.phi0_init - series.int_f[k];
        const cx theta = sol.theta0 * std::exp(cx{0.0, -series.chi[k]});
        CxVector v = coherent_state(theta, dim);
        const cx phase = std::exp(cx{0.0, phi0});
        for (auto& z : v) z *= phase;
        traj.values.push_back(std::move(v));
    }
    return traj;
}

/// psi(t) = eta^{-1}(t) phi(t) node by node.
inline Trajectory<CxVector> map_state_trajectory(const GammaSeries& series,
                                                 const Trajectory<CxVector>& phi) {
    Trajectory<CxVector> out;
    out.grid = phi.grid;
    out.values.reserve(phi.values.size());
    for (int k = 0; k < phi.nodes(); ++k)
        out.values.push_back(displace_apply(series.gamma_at(k), -1.0, phi.at(k)));
    return out;
}

struct Quadratures {
    ComplexMatrix X, P, Htilde;
};

/// Mapped quadratures X = x - i sqrt(2) Im(gamma), P = p - i sqrt(2) Re(gamma)
/// and the isospectral companion
/// Htilde = omega [a^dagger a - gamma a + conj(gamma) a^dagger]
///          + (i/2)(gammadot conj(gamma) - gamma conj(gammadot)).
inline Quadratures quadratures_and_htilde(const OscillatorParams& p, cx gamma, cx gamma_dot,
                                          double t) {
    const int dim = p.dim;
    const auto [a, adag] = fock_operators(dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    ComplexMatrix x = a;
    x += adag;
    x *= cx{inv_sqrt2, 0.0};
    ComplexMatrix pm = adag;
    pm -= a;
    pm *= cx{0.0, inv_sqrt2};

    Quadratures q{x, pm, ComplexMatrix(dim)};
    const cx shift_x = cx{0.0, -std::sqrt(2.0) * gamma.imag()};
    const cx shift_p = cx{0.0, -std::sqrt(2.0) * gamma.real()};
    for (int n = 0; n < dim; ++n) {
        q.X(n, n) += shift_x;
        q.P(n, n) += shift_p;
    }

    const cx omega = p.omega.value(t);
    ComplexMatrix ht = number_operator(dim);
    ComplexMatrix ga = a;
    ga *= -gamma;
    ht += ga;
    ComplexMatrix gd = adag;
    gd *= std::conj(gamma);
    ht += gd;
    ht *= omega;
    const cx z = gamma_dot * std::conj(gamma);
    const cx shift = cx{0.0, 0.5} * (z - std::conj(z));
    for (int n = 0; n < dim; ++n) ht(n, n) += shift;
    q.Htilde = ht;
    return q;
}

} // namespace qh::osc
