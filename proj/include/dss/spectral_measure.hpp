// spectral_measure.hpp — the right-continuous spectral step function
// τ_{α,β}, Riemann–Stieltjes integration against it, and the Nevanlinna
// integral representation of M(λ).

#pragma once

#include "dss/bvp.hpp"

#include <functional>

namespace dss {

// ── SpectralStepFunction ──────────────────────────────────────────────────
// Jumps sit at the eigenvalues with Hermitian PSD jump matrices
// D_j = Σ_ℓ η_j^{[ℓ]} η_j^{[ℓ]*} = −L_{-1}^{[j]}.  Evaluation follows the
// three-branch convention: τ(t) sums jumps in (0, t] for t > 0, minus the
// jumps in (t, 0] for t < 0, and τ(0) = 0.
struct SpectralStepFunction {
    struct Jump {
        double t = 0.0;
        Matrix D;
    };
    int n = 0;
    std::vector<Jump> jumps;  // sorted by t

    Matrix tau_at(double t) const {
        Matrix acc = Matrix::Zero(n, n);
        if (t > 0.0) {
            for (const auto& j : jumps)
                if (j.t > 0.0 && j.t <= t) acc += j.D;
        } else if (t < 0.0) {
            for (const auto& j : jumps)
                if (j.t > t && j.t <= 0.0) acc -= j.D;
        }
        return acc;
    }
};

inline SpectralStepFunction spectral_function(const SymplecticSystem& sys,
                                              const BoundaryMatrix& alpha,
                                              const BoundaryMatrix& beta, double eig_tol = 1e-8) {
    const OrthonormalEigenSet eigset = orthonormal_eigen_set(sys, alpha, beta, eig_tol);
    SpectralStepFunction tau;
    tau.n = sys.n;
    for (std::size_t j = 0; j < eigset.lambdas.size(); ++j) {
        Matrix d = Matrix::Zero(sys.n, sys.n);
        for (const auto& e : eigset.entries)
            if (e.eigenvalue_index == static_cast<int>(j)) d += e.eta * e.eta.adjoint();
        tau.jumps.push_back({eigset.lambdas[j], std::move(d)});
    }
    std::sort(tau.jumps.begin(), tau.jumps.end(),
              [](const auto& a, const auto& b) { return a.t < b.t; });
    return tau;
}

// ∫_a^b f dτ = Σ f(t_j)·[τ(t_j⁺) − τ(t_j⁻)] over jumps in [a, b], with the
// endpoint conventions τ(a⁻) := τ(a) and τ(b⁺) := τ(b); by right continuity
// a jump exactly at a contributes nothing and a jump at b counts in full.
inline Matrix rs_step_integral(const SpectralStepFunction& tau,
                               const std::function<Complex(double)>& f, double a, double b) {
    if (a > b) throw std::invalid_argument("rs_step_integral: need a <= b");
    Matrix acc = Matrix::Zero(tau.n, tau.n);
    for (const auto& j : tau.jumps) {
        if (j.t <= a || j.t > b) continue;
        const Complex w = f(j.t);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw MathDomainError("rs_step_integral: integrand singular at a jump (t = " +
                                  std::to_string(j.t) + ")");
        acc += w * j.D;
    }
    return acc;
}

// ── integral representation of M ──────────────────────────────────────────

struct MRepresentation {
    Matrix M0;        // re M(i)
    Matrix M1;        // lim M(iμ)/(iμ), PSD; floored to 0 below 1e−8
    Matrix M_rebuilt; // M0 + λM1 + ∫ (1/(t−λ) − t/(1+t²)) dτ
    Matrix M_direct;
    double gap = 0.0;     // ‖M_rebuilt − M_direct‖
    double im_gap = 0.0;  // ‖im M(λ) − im(λ)M1 − ∫ im(t−λ)^{-1} dτ‖
};

inline Matrix imag_part(const Matrix& a) { return (a - a.adjoint()) / Complex(0.0, 2.0); }

inline MRepresentation m_integral_representation(const SymplecticSystem& sys,
                                                 const BoundaryMatrix& alpha,
                                                 const BoundaryMatrix& beta, Complex lambda,
                                                 double eig_tol = 1e-8) {
    if (lambda.imag() == 0.0)
        throw MathDomainError("m_integral_representation: lambda must be non-real");

    const SpectralStepFunction tau = spectral_function(sys, alpha, beta, eig_tol);

    MRepresentation out;
    out.M0 = hermitian_part(m_function(sys, alpha, beta, Complex(0, 1), eig_tol).M);

    // M1 by large-μ sampling with one Richardson step; exact limit for the
    // rational finite-interval M, so a 1e−8 floor snaps clean zeros.
    const double mu1 = 1e6, mu2 = 1e7;
    const Matrix f1 = m_function(sys, alpha, beta, Complex(0, mu1), eig_tol).M / Complex(0, mu1);
    const Matrix f2 = m_function(sys, alpha, beta, Complex(0, mu2), eig_tol).M / Complex(0, mu2);
    Matrix m1 = ((mu2 / mu1) * f2 - f1) / (mu2 / mu1 - 1.0);
    if (max_abs(m1) < 1e-8) m1 = Matrix::Zero(sys.n, sys.n);
    m1 = hermitian_part(m1);
    if (min_hermitian_eigenvalue(m1) < -1e-8 * std::max(1.0, one_norm(m1)))
        throw ConsistencyError("m_integral_representation: M1 is not positive semidefinite");
    out.M1 = m1;

    double lo = -1.0, hi = 1.0;
    if (!tau.jumps.empty()) {
        lo = tau.jumps.front().t - 1.0;
        hi = tau.jumps.back().t + 1.0;
    }
    const Matrix integral = rs_step_integral(
        tau, [&](double t) { return 1.0 / (t - lambda) - t / (1.0 + t * t); }, lo, hi);
    out.M_rebuilt = out.M0 + lambda * out.M1 + integral;
    out.M_direct = m_function(sys, alpha, beta, lambda, eig_tol).M;
    out.gap = max_abs(out.M_rebuilt - out.M_direct);

    const Matrix im_integral = rs_step_integral(
        tau, [&](double t) { return Complex(std::imag(1.0 / (t - lambda)), 0.0); }, lo, hi);
    out.im_gap = max_abs(imag_part(out.M_direct) - lambda.imag() * out.M1 - im_integral);
    return out;
}

}  // namespace dss
