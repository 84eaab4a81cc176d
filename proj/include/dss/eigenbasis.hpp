// eigenbasis.hpp — Ω^{±1/2} orthonormalization of eigenspaces and the full
// orthonormal set of eigenfunctions z^{[ℓ]}(λ_j) = Z̃(λ_j) η_j^{[ℓ]}.

#pragma once

#include "dss/spectrum.hpp"

namespace dss {

// Ω(λ) = Σ_{k=0}^{N} Z̃_k*(λ) Ψ_k Z̃_k(λ), Hermitian PSD; positive definite
// exactly when the Weak Atkinson condition holds.
inline Matrix omega_matrix(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                           Complex lambda) {
    const FundamentalPair fp = fundamental_solutions(sys, alpha, lambda);
    const VectorSequence zt = fp.ztilde_sequence();
    return hermitian_part(semi_gram(sys, zt, zt));
}

namespace detail {

// Hermitian square root and inverse square root with a positivity floor.
struct OmegaRoots {
    Matrix half;
    Matrix inv_half;
};

inline OmegaRoots omega_roots(const Matrix& omega, double atk_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(omega);
    const auto& ev = es.eigenvalues();
    const double floor = atk_tol * std::max(1.0, one_norm(omega));
    if (ev.minCoeff() <= floor)
        throw AtkinsonError("omega matrix is not positive definite (Weak Atkinson fails)");
    Eigen::VectorXd rt = ev.array().sqrt();
    OmegaRoots out;
    out.half = es.eigenvectors() * rt.asDiagonal() * es.eigenvectors().adjoint();
    out.inv_half =
        es.eigenvectors() * rt.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
    return out;
}

// Modified Gram–Schmidt with one reorthogonalization pass.
inline Matrix orthonormal_columns(Matrix w) {
    for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            for (Eigen::Index p = 0; p < c; ++p)
                w.col(c) -= (w.col(p).adjoint() * w.col(c))(0, 0) * w.col(p);
            const double nrm = w.col(c).norm();
            if (nrm < 1e-12)
                throw ConsistencyError("orthonormalize: near-dependent kernel vectors");
            w.col(c) /= nrm;
        }
    return w;
}

}  // namespace detail

// Ω-orthonormal kernel vectors for one eigenvalue: η^{[ℓ]} = Ω^{-1/2} ρ^{[ℓ]}
// where the ρ's orthonormalize the span of Ω^{1/2}·(kernel basis).  Each η
// stays inside ker βZ̃_{N+1}(λ_j) and η^{[i]*} Ω η^{[ℓ]} = δ_{iℓ}.
inline std::vector<Vector> orthonormalize(const SymplecticSystem& sys,
                                          const BoundaryMatrix& alpha,
                                          const BoundaryMatrix& beta, const Eigenvalue& ev,
                                          double atk_tol = 1e-12) {
    (void)beta;  // kernel basis already encodes β; kept for interface symmetry
    if (ev.kernel_basis.cols() == 0)
        throw std::invalid_argument("orthonormalize: eigenvalue carries no kernel basis");
    const Matrix omega = omega_matrix(sys, alpha, ev.lambda);
    const auto roots = detail::omega_roots(omega, atk_tol);
    const Matrix rho = detail::orthonormal_columns(roots.half * ev.kernel_basis);
    const Matrix eta = roots.inv_half * rho;

    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(eta.cols()));
    for (Eigen::Index c = 0; c < eta.cols(); ++c) out.push_back(eta.col(c));
    return out;
}

// ── OrthonormalEigenSet ───────────────────────────────────────────────────

struct OrthonormalEigenSet {
    struct Entry {
        double lambda = 0.0;
        Vector eta;        // n-vector, Ω-orthonormal within its eigenspace
        VectorSequence z;  // eigenfunction Z̃(λ)η on [0, N+1]
        int eigenvalue_index = 0;
    };
    std::vector<Entry> entries;     // grouped by eigenvalue, ascending λ
    std::vector<double> lambdas;    // distinct eigenvalues
    std::vector<Matrix> omegas;     // Ω(λ_j) per distinct eigenvalue

    int size() const { return static_cast<int>(entries.size()); }
};

// The finite orthonormal set of all eigenfunctions.  Requires the Weak
// Atkinson condition and a non-degenerate spectrum.
inline OrthonormalEigenSet orthonormal_eigen_set(const SymplecticSystem& sys,
                                                 const BoundaryMatrix& alpha,
                                                 const BoundaryMatrix& beta,
                                                 double eig_tol = 1e-8, double atk_tol = 1e-12) {
    const Spectrum spec = eigenvalues(sys, alpha, beta, eig_tol);
    if (spec.degenerate)
        throw DegenerateSpectrumError(
            "orthonormal_eigen_set: degenerate spectrum (det beta Ztilde == 0 identically)");
    if (!spec.atkinson_holds)
        throw AtkinsonError("orthonormal_eigen_set: Weak Atkinson condition fails");

    OrthonormalEigenSet set;
    for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
        const Eigenvalue& ev = spec.eigenvalues[j];
        const double la = ev.lambda.real();
        const FundamentalPair fp = fundamental_solutions(sys, alpha, la);
        set.lambdas.push_back(la);
        set.omegas.push_back(omega_matrix(sys, alpha, la));
        for (const Vector& eta : orthonormalize(sys, alpha, beta, ev, atk_tol)) {
            OrthonormalEigenSet::Entry e;
            e.lambda = la;
            e.eta = eta;
            e.eigenvalue_index = static_cast<int>(j);
            std::vector<Matrix> vals(static_cast<std::size_t>(sys.length()));
            for (int k = 0; k <= sys.N + 1; ++k)
                vals[static_cast<std::size_t>(k)] = fp.Ztilde[static_cast<std::size_t>(k)] * eta;
            e.z = VectorSequence(std::move(vals));
            set.entries.push_back(std::move(e));
        }
    }
    return set;
}

}  // namespace dss
