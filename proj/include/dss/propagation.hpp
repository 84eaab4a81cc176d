// propagation.hpp — transition matrices S_k + λV_k, their closed-form
// inverses, and the fundamental solution pair (Ẑ(λ), Z̃(λ)) on [0, N+1].

#pragma once

#include "dss/core.hpp"

namespace dss {

// 𝕊_k(λ) = S_k + λ V_k with V_k = −J Ψ_k S_k.
inline Matrix transition(const SymplecticSystem& sys, int k, Complex lambda) {
    sys.check_index(k);
    return sys.S[static_cast<std::size_t>(k)] + lambda * v_from_psi(sys, k);
}

// 𝕊_k^{-1}(λ) = −J 𝕊_k*(λ̄) J, always by the closed formula.
inline Matrix transition_inverse(const SymplecticSystem& sys, int k, Complex lambda) {
    const Matrix j = sys.J();
    return -j * transition(sys, k, std::conj(lambda)).adjoint() * j;
}

namespace detail {

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw OverflowError(std::string(what) + ": propagation overflowed");
}

}  // namespace detail

// Forward solve of z_k = 𝕊_k(λ) z_{k+1} − J Ψ_k f_k from a given z_0,
// i.e. z_{k+1} = 𝕊_k^{-1}(λ) (z_k + J Ψ_k f_k).  z0 may carry m columns;
// empty f means the homogeneous system.
inline VectorSequence solve_ivp(const SymplecticSystem& sys, Complex lambda, const Matrix& z0,
                                const VectorSequence& f = VectorSequence{}) {
    if (z0.rows() != sys.dim())
        throw std::invalid_argument("solve_ivp: initial value must have 2n rows");
    const bool has_f = f.length() > 0;
    if (has_f) check_sequence(sys, f);

    const Matrix j = sys.J();
    std::vector<Matrix> vals(static_cast<std::size_t>(sys.length()));
    vals[0] = z0;
    for (int k = 0; k <= sys.N; ++k) {
        Matrix rhs = vals[static_cast<std::size_t>(k)];
        if (has_f) rhs += j * sys.Psi[static_cast<std::size_t>(k)] * f[k];
        vals[static_cast<std::size_t>(k + 1)] = transition_inverse(sys, k, lambda) * rhs;
        detail::require_finite(vals[static_cast<std::size_t>(k + 1)], "solve_ivp");
    }
    return VectorSequence(std::move(vals));
}

// ── FundamentalPair ───────────────────────────────────────────────────────
// The 2n×n solution blocks determined by Ẑ_0 = α*, Z̃_0 = −Jα*.  The
// juxtaposition Φ_k = (Ẑ_k, Z̃_k) satisfies Φ_k*(λ̄) J Φ_k(λ) = Φ_0* J Φ_0
// for every k, so Φ_k is invertible with Φ_k^{-1}(λ) = −J Φ_k*(λ̄) J.
struct FundamentalPair {
    Complex lambda;
    std::vector<Matrix> Zhat;    // indices 0..N+1, each 2n×n
    std::vector<Matrix> Ztilde;  // same shape

    int length() const { return static_cast<int>(Zhat.size()); }

    Matrix phi(int k) const {
        const auto ku = static_cast<std::size_t>(k);
        Matrix out(Zhat[ku].rows(), Zhat[ku].cols() + Ztilde[ku].cols());
        out << Zhat[ku], Ztilde[ku];
        return out;
    }

    VectorSequence zhat_sequence() const { return VectorSequence(Zhat); }
    VectorSequence ztilde_sequence() const { return VectorSequence(Ztilde); }
};

inline FundamentalPair fundamental_solutions(const SymplecticSystem& sys,
                                             const BoundaryMatrix& alpha, Complex lambda) {
    if (alpha.n() != sys.n)
        throw std::invalid_argument("fundamental_solutions: boundary matrix has wrong dimension");
    alpha.require_valid();

    const Matrix astar = alpha.mat.adjoint();
    FundamentalPair fp;
    fp.lambda = lambda;
    fp.Zhat.resize(static_cast<std::size_t>(sys.length()));
    fp.Ztilde.resize(static_cast<std::size_t>(sys.length()));
    fp.Zhat[0] = astar;
    fp.Ztilde[0] = -sys.J() * astar;
    for (int k = 0; k <= sys.N; ++k) {
        const Matrix inv = transition_inverse(sys, k, lambda);
        fp.Zhat[static_cast<std::size_t>(k + 1)] = inv * fp.Zhat[static_cast<std::size_t>(k)];
        fp.Ztilde[static_cast<std::size_t>(k + 1)] = inv * fp.Ztilde[static_cast<std::size_t>(k)];
        detail::require_finite(fp.Ztilde[static_cast<std::size_t>(k + 1)], "fundamental_solutions");
    }
    return fp;
}

}  // namespace dss
