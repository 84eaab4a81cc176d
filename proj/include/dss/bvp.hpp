// bvp.hpp — nonhomogeneous boundary value problem solvers (variation of
// constants, Green-kernel summation, and a dense stacked least-squares
// oracle), Fourier coefficients against the eigenfunction set, the
// eigenfunction expansion with Parseval's identity, the truncation bound,
// and the pointwise expansion for qualifying right-hand sides.

#pragma once

#include "dss/weyl.hpp"

namespace dss {

enum class BvpMethod { closed_form, kernel_sum, dense_oracle, eigen_expansion };

struct BvpSolution {
    Complex lambda;
    VectorSequence z;
    BvpMethod method = BvpMethod::closed_form;
    double boundary_residual = 0.0;
    double step_residual = 0.0;
    // dense oracle only: least-squares consistency and the nullspace of the
    // stacked system (columns are flattened sequences; nonempty only at an
    // eigenvalue, where it spans the eigenspace)
    double consistency_residual = 0.0;
    Matrix nullspace;
};

namespace detail {

// residual of z against z_k = 𝕊_k(λ) z_{k+1} − J Ψ_k f_k and the boundary rows
inline void bvp_residuals(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                          const BoundaryMatrix& beta, Complex lambda, const VectorSequence& f,
                          const Matrix& xi, BvpSolution& sol) {
    const Matrix j = sys.J();
    double step = 0.0;
    for (int k = 0; k <= sys.N; ++k) {
        Matrix r = sol.z[k] - transition(sys, k, lambda) * sol.z[k + 1];
        if (f.length() > 0) r += j * sys.Psi[static_cast<std::size_t>(k)] * f[k];
        step = std::max(step, max_abs(r));
    }
    sol.step_residual = step;
    const Matrix b0 = alpha.mat * sol.z[0] - xi;
    const Matrix b1 = beta.mat * sol.z[sys.N + 1];
    sol.boundary_residual = std::max(max_abs(b0), max_abs(b1));
}

inline Matrix xi_or_zero(const SymplecticSystem& sys, const Matrix& xi) {
    if (xi.size() == 0) return Matrix::Zero(sys.n, 1);
    if (xi.rows() != sys.n || xi.cols() != 1)
        throw std::invalid_argument("boundary datum xi must be an n-vector");
    return xi;
}

}  // namespace detail

// Unique solution of z_k = 𝕊_k(λ)z_{k+1} − JΨ_k f_k, αz_0 = ξ, βz_{N+1} = 0
// for λ off the spectrum, by variation of constants:
//   ẑ_k = Z̃_k(λ)·Σ_j [M(λ)Z̃_j*(λ̄) + Ẑ_j*(λ̄)] Ψ_j f_j
//         + Σ_{j<k} Φ_k(λ) J Φ_j*(λ̄) Ψ_j f_j,
// plus 𝒳(λ)ξ for the modified boundary datum.
inline BvpSolution solve_bvp(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                             const BoundaryMatrix& beta, Complex lambda, const VectorSequence& f,
                             const Matrix& xi = Matrix{}, double eig_tol = 1e-8) {
    check_sequence(sys, f);
    if (f.cols() != 1) throw std::invalid_argument("solve_bvp: f must be single-column");
    const Matrix xi0 = detail::xi_or_zero(sys, xi);

    const Matrix m = m_function(sys, alpha, beta, lambda, eig_tol).M;
    const FundamentalPair fp = fundamental_solutions(sys, alpha, lambda);
    const FundamentalPair fpc = fundamental_solutions(sys, alpha, std::conj(lambda));
    const Matrix j = sys.J();

    Matrix tail = Matrix::Zero(sys.n, 1);  // Σ_j [M Z̃_j*(λ̄) + Ẑ_j*(λ̄)] Ψ_j f_j
    for (int k = 0; k <= sys.N; ++k) {
        const Matrix pf = sys.Psi[static_cast<std::size_t>(k)] * f[k];
        tail += m * fpc.Ztilde[static_cast<std::size_t>(k)].adjoint() * pf +
                fpc.Zhat[static_cast<std::size_t>(k)].adjoint() * pf;
    }

    std::vector<Matrix> vals(static_cast<std::size_t>(sys.length()));
    Matrix prefix = Matrix::Zero(sys.dim(), 1);  // Σ_{j<k} J Φ_j*(λ̄) Ψ_j f_j
    for (int k = 0; k <= sys.N + 1; ++k) {
        vals[static_cast<std::size_t>(k)] =
            fp.Ztilde[static_cast<std::size_t>(k)] * tail + fp.phi(k) * prefix;
        if (k <= sys.N)
            prefix += j * fpc.phi(k).adjoint() * (sys.Psi[static_cast<std::size_t>(k)] * f[k]);
    }

    // modified boundary datum enters through the Weyl solution
    if (max_abs(xi0) > 0.0) {
        const VectorSequence x = weyl_solution(sys, alpha, beta, lambda, eig_tol);
        for (int k = 0; k <= sys.N + 1; ++k) vals[static_cast<std::size_t>(k)] += x[k] * xi0;
    }

    BvpSolution sol;
    sol.lambda = lambda;
    sol.method = BvpMethod::closed_form;
    sol.z = VectorSequence(std::move(vals));
    detail::bvp_residuals(sys, alpha, beta, lambda, f, xi0, sol);
    return sol;
}

// Same problem through the kernel: ẑ_k = Σ_j G_{k,j}(λ) Ψ_j f_j (+ 𝒳ξ).
inline BvpSolution solve_bvp_kernel(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                    const BoundaryMatrix& beta, Complex lambda,
                                    const VectorSequence& f, const Matrix& xi = Matrix{},
                                    double eig_tol = 1e-8) {
    check_sequence(sys, f);
    const Matrix xi0 = detail::xi_or_zero(sys, xi);
    const GreenKernel g = green_kernel(sys, alpha, beta, lambda, eig_tol);

    std::vector<Matrix> vals(static_cast<std::size_t>(sys.length()));
    for (int k = 0; k <= sys.N + 1; ++k) {
        Matrix acc = Matrix::Zero(sys.dim(), 1);
        for (int j = 0; j <= sys.N; ++j)
            acc += g(k, j) * (sys.Psi[static_cast<std::size_t>(j)] * f[j]);
        acc += g.weyl[k] * xi0;
        vals[static_cast<std::size_t>(k)] = acc;
    }

    BvpSolution sol;
    sol.lambda = lambda;
    sol.method = BvpMethod::kernel_sum;
    sol.z = VectorSequence(std::move(vals));
    detail::bvp_residuals(sys, alpha, beta, lambda, f, xi0, sol);
    return sol;
}

// Independent oracle: all 2n(N+1) step equations plus the 2n boundary rows
// as one dense linear system in the 2n(N+2) unknowns, solved by SVD least
// squares.  Works at eigenvalues too: the minimum-norm solution is returned,
// the consistency residual reports solvability, and the nullspace basis
// spans the eigenspace.
inline BvpSolution solve_bvp_dense_oracle(const SymplecticSystem& sys,
                                          const BoundaryMatrix& alpha,
                                          const BoundaryMatrix& beta, Complex lambda,
                                          const VectorSequence& f, const Matrix& xi = Matrix{},
                                          double rank_tol = 1e-10) {
    check_sequence(sys, f);
    const Matrix xi0 = detail::xi_or_zero(sys, xi);
    const int d = sys.dim();
    const int unknowns = d * sys.length();
    const int rows = d * (sys.N + 1) + 2 * sys.n;
    const Matrix j = sys.J();

    Matrix a = Matrix::Zero(rows, unknowns);
    Matrix b = Matrix::Zero(rows, 1);
    for (int k = 0; k <= sys.N; ++k) {
        a.block(k * d, k * d, d, d) = Matrix::Identity(d, d);
        a.block(k * d, (k + 1) * d, d, d) = -transition(sys, k, lambda);
        b.block(k * d, 0, d, 1) = -j * sys.Psi[static_cast<std::size_t>(k)] * f[k];
    }
    const int br = d * (sys.N + 1);
    a.block(br, 0, sys.n, d) = alpha.mat;
    b.block(br, 0, sys.n, 1) = xi0;
    a.block(br + sys.n, (sys.N + 1) * d, sys.n, d) = beta.mat;

    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0 ? sv(0) : 0.0) * rank_tol;
    Eigen::VectorXcd y = svd.matrixU().adjoint() * b;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) {
            y(i) /= sv(i);
            ++rank;
        } else {
            y(i) = 0.0;
        }
    }
    const Eigen::VectorXcd x = svd.matrixV().leftCols(y.size()) * y;

    BvpSolution sol;
    sol.lambda = lambda;
    sol.method = BvpMethod::dense_oracle;
    std::vector<Matrix> vals(static_cast<std::size_t>(sys.length()));
    for (int k = 0; k <= sys.N + 1; ++k) vals[static_cast<std::size_t>(k)] = x.segment(k * d, d);
    sol.z = VectorSequence(std::move(vals));
    sol.consistency_residual = (a * x - b).norm();
    sol.nullspace = svd.matrixV().rightCols(unknowns - rank);
    detail::bvp_residuals(sys, alpha, beta, lambda, f, xi0, sol);
    return sol;
}

inline VectorSequence nullspace_sequence(const SymplecticSystem& sys, const Matrix& nullspace,
                                         int column) {
    const int d = sys.dim();
    std::vector<Matrix> vals(static_cast<std::size_t>(sys.length()));
    for (int k = 0; k <= sys.N + 1; ++k)
        vals[static_cast<std::size_t>(k)] = nullspace.block(k * d, column, d, 1);
    return VectorSequence(std::move(vals));
}

// ── expansion ─────────────────────────────────────────────────────────────

// c_j^{[ℓ]} = Σ_{k=0}^{N} z_k^{[ℓ]*}(λ_j) Ψ_k ẑ_k, aligned with eigset.entries.
inline std::vector<Complex> fourier_coefficients(const SymplecticSystem& sys,
                                                 const OrthonormalEigenSet& eigset,
                                                 const VectorSequence& zhat) {
    check_sequence(sys, zhat);
    std::vector<Complex> c;
    c.reserve(eigset.entries.size());
    for (const auto& e : eigset.entries) c.push_back(semi_inner_product(sys, e.z, zhat));
    return c;
}

struct ExpansionResult {
    std::vector<Complex> coefficients;
    VectorSequence reconstruction;
    double residual_seminorm = 0.0;
    double parseval_gap = 0.0;
    double norm_sq = 0.0;  // ‖ẑ‖²_Ψ
};

namespace detail {

// (zhat, f) must satisfy the λ=0 nonhomogeneous problem with the stated
// boundary conditions; anything else voids the expansion theorem.
inline void require_bvp_solution(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                 const BoundaryMatrix& beta, const VectorSequence& zhat,
                                 const VectorSequence& f, double tol) {
    BvpSolution probe;
    probe.z = zhat;
    bvp_residuals(sys, alpha, beta, Complex(0, 0), f, Matrix::Zero(sys.n, 1), probe);
    double scale = 1.0;
    for (int k = 0; k <= sys.N + 1; ++k) scale = std::max(scale, max_abs(zhat[k]));
    if (probe.step_residual > tol * scale || probe.boundary_residual > tol * scale)
        throw PreconditionError(
            "expand: zhat does not solve the nonhomogeneous problem for the given f "
            "(step residual " + std::to_string(probe.step_residual) + ", boundary residual " +
            std::to_string(probe.boundary_residual) + ")");
}

}  // namespace detail

// Expansion of a solution ẑ of the λ=0 problem in the orthonormal
// eigenfunctions; the Ψ-seminorm residual and the Parseval gap
// |‖ẑ‖² − Σ|c|²| both vanish for genuine solutions.
inline ExpansionResult expand(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                              const BoundaryMatrix& beta, const VectorSequence& zhat,
                              const VectorSequence& f, double precondition_tol = 1e-9) {
    check_sequence(sys, zhat);
    check_sequence(sys, f);
    detail::require_bvp_solution(sys, alpha, beta, zhat, f, precondition_tol);

    const OrthonormalEigenSet eigset = orthonormal_eigen_set(sys, alpha, beta);
    ExpansionResult out;
    out.coefficients = fourier_coefficients(sys, eigset, zhat);

    VectorSequence rec = VectorSequence::zero(sys, 1);
    for (std::size_t i = 0; i < eigset.entries.size(); ++i)
        for (int k = 0; k <= sys.N + 1; ++k) rec[k] += out.coefficients[i] * eigset.entries[i].z[k];
    out.reconstruction = rec;

    VectorSequence diff = zhat;
    for (int k = 0; k <= sys.N + 1; ++k) diff[k] -= rec[k];
    out.residual_seminorm = semi_norm(sys, diff);
    out.norm_sq = std::real(semi_inner_product(sys, zhat, zhat));
    double sum_sq = 0.0;
    for (const Complex& c : out.coefficients) sum_sq += std::norm(c);
    out.parseval_gap = std::abs(out.norm_sq - sum_sq);
    return out;
}

// ẑ^a = ẑ − Σ_{|λ_j|≤a} c_j^{[ℓ]} z^{[ℓ]}(λ_j); returns (‖ẑ^a‖²_Ψ, a^{-2}‖f‖²_Ψ),
// the truncated remainder and its guaranteed bound.
inline std::pair<double, double> truncation_bound(const SymplecticSystem& sys,
                                                  const BoundaryMatrix& alpha,
                                                  const BoundaryMatrix& beta,
                                                  const VectorSequence& zhat,
                                                  const VectorSequence& f, double a,
                                                  double precondition_tol = 1e-9) {
    if (a <= 0.0) throw std::invalid_argument("truncation_bound: a must be positive");
    check_sequence(sys, zhat);
    check_sequence(sys, f);
    detail::require_bvp_solution(sys, alpha, beta, zhat, f, precondition_tol);

    const OrthonormalEigenSet eigset = orthonormal_eigen_set(sys, alpha, beta);
    const std::vector<Complex> c = fourier_coefficients(sys, eigset, zhat);

    VectorSequence trunc = zhat;
    for (std::size_t i = 0; i < eigset.entries.size(); ++i) {
        if (std::abs(eigset.entries[i].lambda) > a) continue;
        for (int k = 0; k <= sys.N + 1; ++k) trunc[k] -= c[i] * eigset.entries[i].z[k];
    }
    const double lhs = std::pow(semi_norm(sys, trunc), 2);
    const double rhs = std::pow(semi_norm(sys, f) / a, 2);
    return {lhs, rhs};
}

// Pointwise expansion z̃_k = Σ (λ_j − λ)^{-1} d_j^{[ℓ]} z_k^{[ℓ]}(λ_j) of the
// solution of the λ-problem with right-hand side g, valid when [g] contains
// a solution of the λ=0 problem (checked operationally through the Ψ-residual
// of g against its own eigenfunction expansion).
inline BvpSolution pointwise_expansion(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                       const BoundaryMatrix& beta, Complex lambda,
                                       const VectorSequence& g, double qualification_tol = 1e-8) {
    check_sequence(sys, g);
    const OrthonormalEigenSet eigset = orthonormal_eigen_set(sys, alpha, beta);
    const std::vector<Complex> d = fourier_coefficients(sys, eigset, g);

    VectorSequence rec = VectorSequence::zero(sys, 1);
    for (std::size_t i = 0; i < eigset.entries.size(); ++i)
        for (int k = 0; k <= sys.N + 1; ++k) rec[k] += d[i] * eigset.entries[i].z[k];
    VectorSequence diff = g;
    for (int k = 0; k <= sys.N + 1; ++k) diff[k] -= rec[k];
    const double qual = semi_norm(sys, diff);
    if (qual > qualification_tol * (1.0 + semi_norm(sys, g)))
        throw PreconditionError(
            "pointwise_expansion: g is not expandable (Psi-residual " + std::to_string(qual) + ")");

    for (const auto& e : eigset.entries)
        if (std::abs(Complex(e.lambda, 0.0) - lambda) < 1e-12 * (1.0 + std::abs(lambda)))
            throw EigenvalueProximityError("pointwise_expansion: lambda is an eigenvalue");

    BvpSolution sol;
    sol.lambda = lambda;
    sol.method = BvpMethod::eigen_expansion;
    VectorSequence z = VectorSequence::zero(sys, 1);
    for (std::size_t i = 0; i < eigset.entries.size(); ++i) {
        const Complex w = d[i] / (Complex(eigset.entries[i].lambda, 0.0) - lambda);
        for (int k = 0; k <= sys.N + 1; ++k) z[k] += w * eigset.entries[i].z[k];
    }
    sol.z = std::move(z);
    detail::bvp_residuals(sys, alpha, beta, lambda, g, Matrix::Zero(sys.n, 1), sol);
    return sol;
}

}  // namespace dss
