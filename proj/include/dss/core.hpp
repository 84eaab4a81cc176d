// core.hpp — domain types for discrete symplectic systems on a finite
// interval [0, N]: the coefficient pair (S_k, Ψ_k), boundary matrices,
// vector sequences, structural validation, and the Ψ-weighted semi-inner
// product together with the Lagrange-identity residual.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dss {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;

// ── errors ────────────────────────────────────────────────────────────────

// A computation left its mathematical domain (λ sitting on an eigenvalue,
// missing definiteness condition, degenerate spectrum, overflow).
struct MathDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EigenvalueProximityError : MathDomainError {
    using MathDomainError::MathDomainError;
};
struct AtkinsonError : MathDomainError {
    using MathDomainError::MathDomainError;
};
struct DegenerateSpectrumError : MathDomainError {
    using MathDomainError::MathDomainError;
};
struct OverflowError : MathDomainError {
    using MathDomainError::MathDomainError;
};
// Caller handed in data violating a stated hypothesis (e.g. a sequence that
// does not solve the boundary value problem it claims to solve).
struct PreconditionError : MathDomainError {
    using MathDomainError::MathDomainError;
};
// A cross-check that theory guarantees failed numerically; indicates a bug
// or an input far outside the supported conditioning range.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ── small helpers ─────────────────────────────────────────────────────────

inline double one_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

inline double max_abs(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().maxCoeff();
}

inline Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline double min_hermitian_eigenvalue(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
    return es.eigenvalues().minCoeff();
}

// Canonical skew form J = [[0, I],[−I, 0]].  The sign is pinned by the
// worked families: with this J the block family has its nonzero eigenvalue
// at +1/((N+1)√(ab)) and the scalar family's M(λ) = −1/(λ v_{N+1}) has the
// Nevanlinna sign.
inline Matrix symplectic_unit(int n) {
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n)   = Matrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return j;
}

// ── SymplecticSystem ──────────────────────────────────────────────────────
// The pair (S_k, Ψ_k), k ∈ [0, N].  V_k is always derived from Ψ_k, never
// stored, so the coupling V = −JΨS cannot drift out of sync.  Ψ is
// symmetrized on ingest; the original asymmetry is kept for validation.
struct SymplecticSystem {
    int n = 0;  // block dimension, matrices are 2n×2n
    int N = 0;  // interval endpoint, sequences live on [0, N+1]
    std::vector<Matrix> S;
    std::vector<Matrix> Psi;
    std::vector<double> psi_asymmetry;  // ‖Ψ_k − Ψ_k*‖₁ before symmetrization

    SymplecticSystem(int n_, int N_, std::vector<Matrix> s, std::vector<Matrix> psi)
        : n(n_), N(N_), S(std::move(s)), Psi(std::move(psi)) {
        if (n <= 0 || N < 0)
            throw std::invalid_argument("SymplecticSystem: need n >= 1 and N >= 0");
        const auto count = static_cast<std::size_t>(N + 1);
        if (S.size() != count || Psi.size() != count)
            throw std::invalid_argument("SymplecticSystem: need N+1 coefficient matrices");
        const int d = 2 * n;
        psi_asymmetry.resize(count);
        for (std::size_t k = 0; k < count; ++k) {
            if (S[k].rows() != d || S[k].cols() != d || Psi[k].rows() != d || Psi[k].cols() != d)
                throw std::invalid_argument("SymplecticSystem: coefficient matrix is not 2n x 2n");
            psi_asymmetry[k] = one_norm(Psi[k] - Psi[k].adjoint());
            Psi[k] = hermitian_part(Psi[k]);
        }
    }

    int dim() const { return 2 * n; }
    int length() const { return N + 2; }
    Matrix J() const { return symplectic_unit(n); }

    void check_index(int k) const {
        if (k < 0 || k > N) throw std::invalid_argument("index k outside [0, N]");
    }
};

// V_k = −J Ψ_k S_k.  Round trip: Ψ_k = J S_k J V_k* J.
inline Matrix v_from_psi(const SymplecticSystem& sys, int k) {
    sys.check_index(k);
    return -sys.J() * sys.Psi[static_cast<std::size_t>(k)] * sys.S[static_cast<std::size_t>(k)];
}

// ── BoundaryMatrix ────────────────────────────────────────────────────────
// An n×2n matrix α with αα* = I and αJα* = 0 (the set Γ of admissible
// separated boundary conditions).
struct BoundaryMatrix {
    Matrix mat;  // n×2n

    explicit BoundaryMatrix(Matrix m) : mat(std::move(m)) {
        if (mat.rows() <= 0 || mat.cols() != 2 * mat.rows())
            throw std::invalid_argument("BoundaryMatrix: expected an n x 2n matrix");
    }

    int n() const { return static_cast<int>(mat.rows()); }

    // max of ‖αα* − I‖ and ‖αJα*‖; zero for members of Γ
    double gamma_residual() const {
        const int nn = n();
        const Matrix eye = Matrix::Identity(nn, nn);
        double r1 = max_abs(mat * mat.adjoint() - eye);
        double r2 = max_abs(mat * symplectic_unit(nn) * mat.adjoint());
        return std::max(r1, r2);
    }

    void require_valid(double tol = 1e-8) const {
        if (gamma_residual() > tol)
            throw std::invalid_argument("boundary matrix is not in Gamma (alpha alpha* = I, alpha J alpha* = 0)");
    }
};

// ── VectorSequence ────────────────────────────────────────────────────────
// A sequence of N+2 values indexed 0..N+1; each value is 2n×m (m = 1 for
// plain vector sequences, m > 1 for column bundles).
struct VectorSequence {
    std::vector<Matrix> values;

    VectorSequence() = default;
    explicit VectorSequence(std::vector<Matrix> v) : values(std::move(v)) {
        for (const auto& m : values)
            if (m.rows() != values.front().rows() || m.cols() != values.front().cols())
                throw std::invalid_argument("VectorSequence: ragged entries");
    }

    static VectorSequence zero(const SymplecticSystem& sys, int cols = 1) {
        return VectorSequence(std::vector<Matrix>(
            static_cast<std::size_t>(sys.length()), Matrix::Zero(sys.dim(), cols)));
    }

    int length() const { return static_cast<int>(values.size()); }
    int rows() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
    int cols() const { return values.empty() ? 0 : static_cast<int>(values.front().cols()); }
    Matrix& operator[](int k) { return values[static_cast<std::size_t>(k)]; }
    const Matrix& operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
};

inline void check_sequence(const SymplecticSystem& sys, const VectorSequence& z) {
    if (z.length() != sys.length())
        throw std::invalid_argument("sequence length must be N+2");
    if (z.rows() != sys.dim())
        throw std::invalid_argument("sequence entries must have 2n rows");
}

// ── semi-inner product ────────────────────────────────────────────────────
// ⟨z, u⟩_Ψ = Σ_{k=0}^{N} z_k* Ψ_k u_k; the index N+1 never enters.  For
// column bundles this yields the full Gram matrix.

inline Matrix semi_gram(const SymplecticSystem& sys, const VectorSequence& z,
                        const VectorSequence& u) {
    check_sequence(sys, z);
    check_sequence(sys, u);
    Matrix acc = Matrix::Zero(z.cols(), u.cols());
    for (int k = 0; k <= sys.N; ++k)
        acc += z[k].adjoint() * sys.Psi[static_cast<std::size_t>(k)] * u[k];
    return acc;
}

inline Complex semi_inner_product(const SymplecticSystem& sys, const VectorSequence& z,
                                  const VectorSequence& u) {
    if (z.cols() != 1 || u.cols() != 1)
        throw std::invalid_argument("semi_inner_product: scalar form needs single-column sequences");
    return semi_gram(sys, z, u)(0, 0);
}

// ‖z‖_Ψ = sqrt(re⟨z,z⟩); ⟨z,z⟩ must be real up to roundoff.
inline double semi_norm(const SymplecticSystem& sys, const VectorSequence& z) {
    Complex q = semi_inner_product(sys, z, z);
    if (std::abs(q.imag()) > 1e-10 * (1.0 + std::abs(q.real())))
        throw ConsistencyError("semi_norm: <z,z> has a non-negligible imaginary part");
    return std::sqrt(std::max(q.real(), 0.0));
}

// ── validation ────────────────────────────────────────────────────────────

struct CheckResult {
    std::string name;
    double worst_residual = 0.0;
    std::vector<int> failing_indices;
};

struct ValidationReport {
    bool passed = true;
    double tol = 0.0;
    std::vector<CheckResult> checks;

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

namespace detail {

inline void record(CheckResult& c, int k, double residual, double tol) {
    c.worst_residual = std::max(c.worst_residual, residual);
    if (residual > tol) c.failing_indices.push_back(k);
}

}  // namespace detail

// Checks every structural hypothesis: S_k symplectic, Ψ_k Hermitian / range
// J-isotropic / positive semidefinite, V_k*JS_k Hermitian, and the
// symplectic identity of S_k + λV_k at two probe values of λ.  Residuals are
// relative to the matrix 1-norms; numeric failure is reported, not thrown.
inline ValidationReport validate_system(const SymplecticSystem& sys, double tol_struct = 1e-10) {
    ValidationReport rep;
    rep.tol = tol_struct;
    const Matrix j = sys.J();

    CheckResult symp{"transition_symplectic", 0.0, {}};
    CheckResult herm{"weight_hermitian", 0.0, {}};
    CheckResult isot{"weight_isotropic", 0.0, {}};
    CheckResult psd{"weight_psd", 0.0, {}};
    CheckResult coup{"coupling_hermitian", 0.0, {}};
    const Complex probes[2] = {Complex(0.7, 0.4), Complex(-1.3, 1.1)};
    CheckResult para[2] = {{"parametrized_symplectic_probe1", 0.0, {}},
                           {"parametrized_symplectic_probe2", 0.0, {}}};

    for (int k = 0; k <= sys.N; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const Matrix& s = sys.S[ku];
        const Matrix& p = sys.Psi[ku];
        const double s_scale = std::max(1.0, one_norm(s) * one_norm(s));
        const double p_scale = std::max(1.0, one_norm(p));

        detail::record(symp, k, one_norm(s.adjoint() * j * s - j) / s_scale, tol_struct);
        detail::record(herm, k, sys.psi_asymmetry[ku] / p_scale, tol_struct);
        detail::record(isot, k, one_norm(p * j * p) / std::max(1.0, one_norm(p) * one_norm(p)),
                       tol_struct);
        detail::record(psd, k, std::max(0.0, -min_hermitian_eigenvalue(p)) / p_scale, tol_struct);

        const Matrix v = -j * p * s;
        const Matrix vjs = v.adjoint() * j * s;
        detail::record(coup, k, one_norm(vjs - vjs.adjoint()) / std::max(1.0, one_norm(vjs)),
                       tol_struct);

        for (int i = 0; i < 2; ++i) {
            const Complex la = probes[i];
            const Matrix t_la = s + la * v;
            const Matrix t_conj = s + std::conj(la) * v;
            const double t_scale = std::max(1.0, one_norm(t_la) * one_norm(t_conj));
            detail::record(para[i], k, one_norm(t_conj.adjoint() * j * t_la - j) / t_scale,
                           tol_struct);
        }
    }

    rep.checks = {symp, herm, isot, psd, coup, para[0], para[1]};
    for (const auto& c : rep.checks)
        if (!c.failing_indices.empty()) rep.passed = false;
    return rep;
}

// ── space dimensions ──────────────────────────────────────────────────────
// dim ℓ²_Ψ = 2n(N+2); the quotient by the null sequences has dimension
// Σ_k rank Ψ_k (ranks via singular values above rank_tol·σ_max).
struct SpaceDimensions {
    long dim_ltp = 0;
    long dim_quotient = 0;
};

inline SpaceDimensions space_dimensions(const SymplecticSystem& sys, double rank_tol = 1e-10) {
    SpaceDimensions out;
    out.dim_ltp = 2L * sys.n * (sys.N + 2);
    for (int k = 0; k <= sys.N; ++k) {
        Eigen::JacobiSVD<Matrix> svd(sys.Psi[static_cast<std::size_t>(k)]);
        const auto& sv = svd.singularValues();
        if (sv.size() == 0 || sv(0) <= 0.0) continue;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > rank_tol * sv(0)) ++out.dim_quotient;
    }
    return out;
}

// ── Lagrange identity residual ────────────────────────────────────────────
// For z solving the λ-system with forcing f and u solving the ν-system with
// forcing g,
//   z*J u |_s^{t+1}  =  Σ_{k=s}^{t} { (λ̄−ν) z_k*Ψ_k u_k + f_k*Ψ_k u_k − z_k*Ψ_k g_k }.
// Returns the worst violation over all windows 0 ≤ s ≤ t ≤ N; zero (to
// roundoff) for genuine solutions.  Empty f or g stands for zero forcing.
inline double lagrange_residual(const SymplecticSystem& sys, Complex lambda, Complex nu,
                                const VectorSequence& z, const VectorSequence& u,
                                const VectorSequence& f = VectorSequence{},
                                const VectorSequence& g = VectorSequence{}) {
    check_sequence(sys, z);
    check_sequence(sys, u);
    const bool has_f = f.length() > 0;
    const bool has_g = g.length() > 0;
    if (has_f) check_sequence(sys, f);
    if (has_g) check_sequence(sys, g);

    const Matrix j = sys.J();
    const Complex factor = std::conj(lambda) - nu;

    // wronskian-type pairings at every index, and prefix sums of the summand
    std::vector<Matrix> w(static_cast<std::size_t>(sys.N + 2));
    std::vector<Matrix> prefix(static_cast<std::size_t>(sys.N + 2));
    Matrix acc = Matrix::Zero(z.cols(), u.cols());
    prefix[0] = acc;
    for (int k = 0; k <= sys.N + 1; ++k) {
        w[static_cast<std::size_t>(k)] = z[k].adjoint() * j * u[k];
        if (k <= sys.N) {
            const Matrix& psi = sys.Psi[static_cast<std::size_t>(k)];
            Matrix term = factor * (z[k].adjoint() * psi * u[k]);
            if (has_f) term += f[k].adjoint() * psi * u[k];
            if (has_g) term -= z[k].adjoint() * psi * g[k];
            acc += term;
            prefix[static_cast<std::size_t>(k + 1)] = acc;
        }
    }

    double worst = 0.0;
    for (int s = 0; s <= sys.N; ++s)
        for (int t = s; t <= sys.N; ++t) {
            const Matrix lhs = w[static_cast<std::size_t>(t + 1)] - w[static_cast<std::size_t>(s)];
            const Matrix rhs = prefix[static_cast<std::size_t>(t + 1)] - prefix[static_cast<std::size_t>(s)];
            worst = std::max(worst, max_abs(lhs - rhs));
        }
    return worst;
}

}  // namespace dss
