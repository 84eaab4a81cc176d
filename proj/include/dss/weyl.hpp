// weyl.hpp — the Weyl–Titchmarsh M(λ)-function, the Weyl solution
// 𝒳(λ) = Ẑ(λ) + Z̃(λ)M(λ), the Green kernel of the boundary value problem,
// and the residues of M at the eigenvalues.

#pragma once

#include "dss/eigenbasis.hpp"

#include <limits>
#include <numbers>

namespace dss {

// ── M(λ) ──────────────────────────────────────────────────────────────────

struct MFunctionValue {
    Complex lambda;
    Matrix M;          // n×n, M(λ) = −[βZ̃_{N+1}(λ)]^{-1} βẐ_{N+1}(λ)
    double condition = 0.0;  // condition number of βZ̃_{N+1}(λ)
};

// Linear solve with partial pivoting; no explicit inverse.  The smallest
// singular value of βZ̃_{N+1}(λ) guards against evaluation at (or numerically
// on top of) an eigenvalue.
inline MFunctionValue m_function(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                 const BoundaryMatrix& beta, Complex lambda,
                                 double eig_tol = 1e-8) {
    beta.require_valid();
    const FundamentalPair fp = fundamental_solutions(sys, alpha, lambda);
    const Matrix ztail = fp.Ztilde[static_cast<std::size_t>(sys.N + 1)];
    const Matrix bz = beta.mat * ztail;
    const Matrix bh = beta.mat * fp.Zhat[static_cast<std::size_t>(sys.N + 1)];

    Eigen::JacobiSVD<Matrix> svd(bz);
    const auto& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double sigma_min = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
    if (sigma_min <= eig_tol * std::max(sigma_max, ztail.operatorNorm()))
        throw EigenvalueProximityError("m_function: lambda is (numerically) an eigenvalue");

    MFunctionValue out;
    out.lambda = lambda;
    out.M = bz.partialPivLu().solve(-bh);
    out.condition = sigma_max / sigma_min;
    return out;
}

// 𝒳(λ) as a 2n×n column bundle on [0, N+1]; α𝒳_0 = I and β𝒳_{N+1} = 0.
inline VectorSequence weyl_solution(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                    const BoundaryMatrix& beta, Complex lambda,
                                    double eig_tol = 1e-8) {
    const Matrix m = m_function(sys, alpha, beta, lambda, eig_tol).M;
    const FundamentalPair fp = fundamental_solutions(sys, alpha, lambda);
    std::vector<Matrix> vals(static_cast<std::size_t>(sys.length()));
    for (int k = 0; k <= sys.N + 1; ++k)
        vals[static_cast<std::size_t>(k)] =
            fp.Zhat[static_cast<std::size_t>(k)] + fp.Ztilde[static_cast<std::size_t>(k)] * m;
    return VectorSequence(std::move(vals));
}

// ── Green kernel ──────────────────────────────────────────────────────────
// G_{k,j}(λ) = 𝒳_k(λ) Z̃_j*(λ̄) for j < k and Z̃_k(λ) 𝒳_j*(λ̄) for j ≥ k.
// Evaluation is on demand; dense() materializes the full (N+2)² table.
// Symmetries: G_{k,j}*(λ) = G_{j,k}(λ̄) off the diagonal and
// G_{k,k}*(λ) = G_{k,k}(λ̄) + J on it (the jump across j = k is −J).
struct GreenKernel {
    Complex lambda;
    int n = 0;
    int N = 0;
    VectorSequence weyl;             // 𝒳(λ)
    VectorSequence weyl_conj;        // 𝒳(λ̄)
    VectorSequence ztilde;           // Z̃(λ)
    VectorSequence ztilde_conj;      // Z̃(λ̄)

    Matrix operator()(int k, int j) const {
        if (k < 0 || k > N + 1 || j < 0 || j > N + 1)
            throw std::invalid_argument("GreenKernel: index outside [0, N+1]");
        if (j < k) return weyl[k] * ztilde_conj[j].adjoint();
        return ztilde[k] * weyl_conj[j].adjoint();
    }

    std::vector<std::vector<Matrix>> dense() const {
        std::vector<std::vector<Matrix>> g(static_cast<std::size_t>(N + 2));
        for (int k = 0; k <= N + 1; ++k) {
            g[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(N + 2));
            for (int j = 0; j <= N + 1; ++j)
                g[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = (*this)(k, j);
        }
        return g;
    }
};

inline GreenKernel green_kernel(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                const BoundaryMatrix& beta, Complex lambda,
                                double eig_tol = 1e-8) {
    GreenKernel g;
    g.lambda = lambda;
    g.n = sys.n;
    g.N = sys.N;
    g.weyl = weyl_solution(sys, alpha, beta, lambda, eig_tol);
    g.weyl_conj = weyl_solution(sys, alpha, beta, std::conj(lambda), eig_tol);
    g.ztilde = fundamental_solutions(sys, alpha, lambda).ztilde_sequence();
    g.ztilde_conj = fundamental_solutions(sys, alpha, std::conj(lambda)).ztilde_sequence();
    return g;
}

// ── residues of M ─────────────────────────────────────────────────────────

struct ResidueMatrix {
    double lambda_j = 0.0;
    Matrix L_minus1;           // −Σ_ℓ η_j^{[ℓ]} η_j^{[ℓ]*}, Hermitian NSD
    double numeric_gap = 0.0;  // relative disagreement with the contour limit
};

namespace detail {

// Discrete contour integral (1/K)·Σ (λ_m − λ_j)·M(λ_m) over K points of the
// circle |λ − λ_j| = r; equals the residue up to O((δ/r)^K + r^K).
inline Matrix residue_on_circle(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                const BoundaryMatrix& beta, double lambda_j, double r,
                                double eig_tol) {
    constexpr int K = 8;
    Matrix acc = Matrix::Zero(sys.n, sys.n);
    for (int m = 0; m < K; ++m) {
        const double ang = 2.0 * std::numbers::pi * (m + 0.5) / K;
        const Complex offset = r * Complex(std::cos(ang), std::sin(ang));
        const Complex la = lambda_j + offset;
        acc += offset * m_function(sys, alpha, beta, la, eig_tol).M;
    }
    return acc / double(K);
}

}  // namespace detail

// Residue of M at the eigenvalue: the projector formula L_{-1} = −Σ η η*,
// cross-checked against the limit (λ−λ_j)M(λ) sampled on circles of radius
// 1e−3 and 1e−4 with one Richardson step.  `isolation` is the distance to
// the nearest other eigenvalue; when it is smaller than the default circle,
// both radii shrink so the contour encloses only this pole.
inline ResidueMatrix m_residue(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                               const BoundaryMatrix& beta, const Eigenvalue& ev,
                               const std::vector<Vector>& etas, double eig_tol = 1e-8,
                               double isolation = std::numeric_limits<double>::infinity()) {
    ResidueMatrix out;
    out.lambda_j = ev.lambda.real();
    out.L_minus1 = Matrix::Zero(sys.n, sys.n);
    for (const Vector& eta : etas) out.L_minus1 -= eta * eta.adjoint();

    const double r1 = std::min(1e-3, isolation / 10.0);
    const double r2 = r1 / 10.0;
    const Matrix coarse = detail::residue_on_circle(sys, alpha, beta, out.lambda_j, r1, eig_tol);
    const Matrix fine = detail::residue_on_circle(sys, alpha, beta, out.lambda_j, r2, eig_tol);
    const Matrix numeric = (10.0 * fine - coarse) / 9.0;
    out.numeric_gap = one_norm(numeric - out.L_minus1) / std::max(1.0, one_norm(out.L_minus1));
    return out;
}

// Limit (λ−λ0)M(λ) for a point λ0 that need not be an eigenvalue; used to
// confirm that M has no pole there (the limit is then ≈ 0).
inline Matrix m_residue_numeric_at(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                   const BoundaryMatrix& beta, double lambda0,
                                   double eig_tol = 1e-8) {
    const Matrix coarse = detail::residue_on_circle(sys, alpha, beta, lambda0, 1e-3, eig_tol);
    const Matrix fine = detail::residue_on_circle(sys, alpha, beta, lambda0, 1e-4, eig_tol);
    return (10.0 * fine - coarse) / 9.0;
}

// ── kernel energy gap ─────────────────────────────────────────────────────
// Σ_s G_{k,s}(λ) Ψ_s G_{k,s}*(λ) − Σ_j Σ_ℓ |λ−λ_j|^{-2} z_k^{[ℓ]} z_k^{[ℓ]*},
// positive semidefinite whenever λ is off the spectrum (a Bessel-type bound
// for the kernel row at k).
inline Matrix green_energy_gap(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                               const BoundaryMatrix& beta, Complex lambda, int k,
                               const OrthonormalEigenSet& eigset, double eig_tol = 1e-8) {
    if (k < 0 || k > sys.N + 1)
        throw std::invalid_argument("green_energy_gap: index outside [0, N+1]");
    const GreenKernel g = green_kernel(sys, alpha, beta, lambda, eig_tol);
    Matrix energy = Matrix::Zero(sys.dim(), sys.dim());
    for (int s = 0; s <= sys.N; ++s) {
        const Matrix gks = g(k, s);
        energy += gks * sys.Psi[static_cast<std::size_t>(s)] * gks.adjoint();
    }
    Matrix poles = Matrix::Zero(sys.dim(), sys.dim());
    for (const auto& e : eigset.entries) {
        const double w = 1.0 / std::norm(lambda - Complex(e.lambda, 0.0));
        poles += w * (e.z[k] * e.z[k].adjoint());
    }
    return energy - poles;
}

inline Matrix green_energy_gap(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                               const BoundaryMatrix& beta, Complex lambda, int k,
                               double eig_tol = 1e-8) {
    return green_energy_gap(sys, alpha, beta, lambda, k,
                            orthonormal_eigen_set(sys, alpha, beta, eig_tol), eig_tol);
}

}  // namespace dss
