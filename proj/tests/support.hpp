// support.hpp — shared test machinery: seeded random generators for valid
// (and guaranteed-Atkinson) systems, boundary matrices in Γ, and a few
// independent oracles kept deliberately free of the library's own linear
// algebra shortcuts.

#pragma once

#include "dss/dss.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

namespace dss::testing {

using Rng = std::mt19937_64;

inline Matrix random_matrix(Rng& rng, int rows, int cols, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = Complex(g(rng), g(rng));
    return m;
}

inline Matrix random_hermitian(Rng& rng, int dim, double scale = 1.0, bool real_only = false) {
    std::normal_distribution<double> g(0.0, scale);
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = real_only ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng));
    return 0.5 * (m + m.adjoint());
}

// exp(J H) with Hermitian H satisfies S* J S = J
inline Matrix random_symplectic(Rng& rng, int n, double scale = 0.35, bool real_only = false) {
    const Matrix h = random_hermitian(rng, 2 * n, scale, real_only);
    const Matrix a = symplectic_unit(n) * h;
    return a.exp();
}

inline Matrix hermitian_inv_sqrt(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    Eigen::VectorXcd d = es.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

// (I 0)·W for symplectic W keeps the row space J-Lagrangian; row
// orthonormalization then lands the matrix in Γ.
inline BoundaryMatrix random_boundary(Rng& rng, int n, bool real_only = false) {
    const Matrix w = random_symplectic(rng, n, 0.5, real_only);
    Matrix a = Matrix::Zero(n, 2 * n);
    a.leftCols(n) = Matrix::Identity(n, n);
    a = a * w;
    return BoundaryMatrix(hermitian_inv_sqrt(a * a.adjoint()) * a);
}

// Hermitian PSD weight with J-isotropic range: (Jγ*) D (Jγ*)* for γ ∈ Γ.
inline Matrix random_weight(Rng& rng, int n, int rank, bool real_only = false) {
    const BoundaryMatrix gamma = random_boundary(rng, n, real_only);
    const Matrix frame = symplectic_unit(n) * gamma.mat.adjoint();
    std::uniform_real_distribution<double> u(0.2, 2.0);
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < rank; ++i) d(i, i) = u(rng);
    return hermitian_part(frame * d * frame.adjoint());
}

struct RandomSystem {
    SymplecticSystem sys;
    BoundaryMatrix alpha;
};

// General valid system: symplectic S_k, random-rank isotropic weights.
inline SymplecticSystem random_valid_system(Rng& rng, int n, int N, bool real_only = false) {
    std::uniform_int_distribution<int> rk(0, n);
    std::bernoulli_distribution canonical(0.3);
    const bool s_is_identity = canonical(rng);
    std::vector<Matrix> s, psi;
    for (int k = 0; k <= N; ++k) {
        s.push_back(s_is_identity ? Matrix::Identity(2 * n, 2 * n)
                                  : random_symplectic(rng, n, 0.35, real_only));
        psi.push_back(random_weight(rng, n, rk(rng), real_only));
    }
    return SymplecticSystem(n, N, std::move(s), std::move(psi));
}

// Guaranteed Weak Atkinson: Ψ_0 = (Jα*) D_0 (Jα*)* with D_0 ⪰ ¼I gives
// Z̃_0*(λ) Ψ_0 Z̃_0(λ) = D_0 for every λ, so Ω(λ) ⪰ ¼I.
inline RandomSystem random_atkinson_system(Rng& rng, int n, int N, bool real_only = false) {
    SymplecticSystem sys = random_valid_system(rng, n, N, real_only);
    BoundaryMatrix alpha = random_boundary(rng, n, real_only);
    const Matrix frame = symplectic_unit(n) * alpha.mat.adjoint();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix d0 = Matrix::Identity(n, n) * 0.25;
    for (int i = 0; i < n; ++i) d0(i, i) += u(rng);
    sys.Psi[0] = hermitian_part(frame * d0 * frame.adjoint());
    return {std::move(sys), std::move(alpha)};
}

inline VectorSequence random_sequence(Rng& rng, const SymplecticSystem& sys, int cols = 1,
                                      double scale = 1.0) {
    std::vector<Matrix> vals;
    for (int k = 0; k < sys.length(); ++k) vals.push_back(random_matrix(rng, sys.dim(), cols, scale));
    return VectorSequence(std::move(vals));
}

// Entry-by-entry Σ z̄_i Ψ_ij u_j, no matrix products involved.
inline Complex brute_force_semi_product(const SymplecticSystem& sys, const VectorSequence& z,
                                        const VectorSequence& u) {
    Complex acc(0.0, 0.0);
    for (int k = 0; k <= sys.N; ++k)
        for (int i = 0; i < sys.dim(); ++i)
            for (int j = 0; j < sys.dim(); ++j)
                acc += std::conj(z[k](i, 0)) * sys.Psi[static_cast<std::size_t>(k)](i, j) * u[k](j, 0);
    return acc;
}

inline double max_seq_diff(const VectorSequence& a, const VectorSequence& b) {
    double worst = 0.0;
    for (int k = 0; k < a.length(); ++k) worst = std::max(worst, max_abs(a[k] - b[k]));
    return worst;
}

}  // namespace dss::testing
