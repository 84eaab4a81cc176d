// examples.hpp — the two closed-form system families used for end-to-end
// verification: a scalar Sturm–Liouville-type family driven by a
// nondecreasing sequence v, and a constant rank-2 block family driven by
// parameters a, b > 0.

#pragma once

#include "dss/core.hpp"

namespace dss {

// n = 1, S_k ≡ I₂, Ψ_k = diag{0, Δv_k} for a nondecreasing v with v_0 = 0;
// N = v.size() − 2.  Spectrum, M-function, and eigenfunction norms are all
// expressible through v_{N+1}.
inline SymplecticSystem build_sl_scalar(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("sl-scalar: need at least v_0 and v_1");
    if (v.front() != 0.0) throw std::invalid_argument("sl-scalar: v_0 must be 0");
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        if (v[k + 1] < v[k]) throw std::invalid_argument("sl-scalar: v must be nondecreasing");

    const int N = static_cast<int>(v.size()) - 2;
    std::vector<Matrix> s(static_cast<std::size_t>(N + 1), Matrix::Identity(2, 2));
    std::vector<Matrix> psi(static_cast<std::size_t>(N + 1));
    for (int k = 0; k <= N; ++k) {
        Matrix p = Matrix::Zero(2, 2);
        p(1, 1) = v[static_cast<std::size_t>(k + 1)] - v[static_cast<std::size_t>(k)];
        psi[static_cast<std::size_t>(k)] = p;
    }
    return SymplecticSystem(1, N, std::move(s), std::move(psi));
}

// n = 2, S_k ≡ I₄, Ψ_k ≡ [[aI₂, √(ab)I₂],[√(ab)I₂, bI₂]] on [0, N]; rank
// Ψ_k = 2 and the spectrum is carried by the scalar √(ab).
inline SymplecticSystem build_block_ab(double a, double b, int N) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("block-ab: need a, b > 0");
    if (N < 0) throw std::invalid_argument("block-ab: need N >= 0");
    const double c = std::sqrt(a * b);
    Matrix p = Matrix::Zero(4, 4);
    p.topLeftCorner(2, 2) = a * Matrix::Identity(2, 2);
    p.topRightCorner(2, 2) = c * Matrix::Identity(2, 2);
    p.bottomLeftCorner(2, 2) = c * Matrix::Identity(2, 2);
    p.bottomRightCorner(2, 2) = b * Matrix::Identity(2, 2);
    std::vector<Matrix> s(static_cast<std::size_t>(N + 1), Matrix::Identity(4, 4));
    std::vector<Matrix> psi(static_cast<std::size_t>(N + 1), p);
    return SymplecticSystem(2, N, std::move(s), std::move(psi));
}

// n×2n boundary matrix from a real row-major initializer, e.g. {{1, 0}}.
inline BoundaryMatrix make_boundary(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    Matrix m(n, 2 * n);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != 2 * n)
            throw std::invalid_argument("make_boundary: rows must have 2n entries");
        for (int c = 0; c < 2 * n; ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return BoundaryMatrix(m);
}

}  // namespace dss
