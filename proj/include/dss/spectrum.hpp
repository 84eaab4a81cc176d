// spectrum.hpp — the characteristic polynomial det βZ̃_{N+1}(λ), eigenvalue
// extraction with algebraic/geometric multiplicities, and the Weak Atkinson
// definiteness check Ω(λ) = Σ Z̃_k*(λ) Ψ_k Z̃_k(λ) > 0.

#pragma once

#include "dss/propagation.hpp"

#include <numbers>

namespace dss {

// ── CharPoly ──────────────────────────────────────────────────────────────
// p(λ) = det βZ̃_{N+1}(λ), a polynomial of degree at most n(N+1).  p ≡ 0 is
// a legal state (every λ is an eigenvalue) and is flagged, not thrown.
struct CharPoly {
    std::vector<Complex> coeffs;  // c_0..c_d after trailing trim; empty if p ≡ 0
    bool is_identically_zero = false;

    int degree() const { return coeffs.empty() ? -1 : static_cast<int>(coeffs.size()) - 1; }

    Complex eval(Complex la) const {
        Complex acc(0.0, 0.0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * la + *it;
        return acc;
    }
};

namespace detail {

inline Complex boundary_det(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                            const BoundaryMatrix& beta, Complex la, double* hadamard = nullptr) {
    const FundamentalPair fp = fundamental_solutions(sys, alpha, la);
    const Matrix m = beta.mat * fp.Ztilde[static_cast<std::size_t>(sys.N + 1)];
    if (hadamard) {
        double h = 1.0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) h *= m.row(r).norm();
        *hadamard = h;
    }
    return m.determinant();
}

// βZ̃_{N+1}(λ) together with its λ-derivative, both propagated forward:
// d(𝕊_k^{-1})(λ) = −J V_k* J is constant in λ.
inline void boundary_block_with_derivative(const SymplecticSystem& sys,
                                           const BoundaryMatrix& alpha,
                                           const BoundaryMatrix& beta, Complex la, Matrix& a,
                                           Matrix& da) {
    const Matrix j = sys.J();
    Matrix z = -j * alpha.mat.adjoint();
    Matrix dz = Matrix::Zero(sys.dim(), sys.n);
    for (int k = 0; k <= sys.N; ++k) {
        const Matrix inv = transition_inverse(sys, k, la);
        const Matrix dinv = -j * v_from_psi(sys, k).adjoint() * j;
        dz = dinv * z + inv * dz;
        z = inv * z;
    }
    a = beta.mat * z;
    da = beta.mat * dz;
}

// det and its derivative via the adjugate, adj(A) = det(UV*)·V diag(τ) U*
// with τ_i = Π_{j≠i} σ_j; stays finite through the singularity at a root.
inline void det_with_derivative(const Matrix& a, const Matrix& da, Complex& q, Complex& dq) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Complex phase = (svd.matrixU() * svd.matrixV().adjoint()).determinant();
    double all = 1.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) all *= sv(i);
    Eigen::VectorXd tau(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        double p = 1.0;
        for (Eigen::Index l = 0; l < sv.size(); ++l)
            if (l != i) p *= sv(l);
        tau(i) = p;
    }
    const Matrix adj =
        phase * svd.matrixV() * tau.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
    q = phase * all;
    dq = (adj * da).trace();
}

// A few Newton steps on det βZ̃_{N+1}(λ), polishing interpolation roots to
// the accuracy of direct propagation.  Converges linearly at multiple roots,
// which is all the cluster merge needs.
inline Complex newton_polish(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                             const BoundaryMatrix& beta, Complex la) {
    for (int it = 0; it < 25; ++it) {
        Matrix a, da;
        boundary_block_with_derivative(sys, alpha, beta, la, a, da);
        Complex q, dq;
        det_with_derivative(a, da, q, dq);
        if (std::abs(dq) == 0.0) break;
        Complex step = q / dq;
        const double cap = 0.5 * (1.0 + std::abs(la));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        la -= step;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(la))) break;
    }
    return la;
}

// Coefficients from values on the circle of radius R via inverse DFT.
inline std::vector<Complex> idft_coeffs(const std::vector<Complex>& vals, double radius) {
    const int m = static_cast<int>(vals.size());
    std::vector<Complex> c(static_cast<std::size_t>(m));
    for (int jj = 0; jj < m; ++jj) {
        Complex acc(0.0, 0.0);
        for (int k = 0; k < m; ++k) {
            const double ang = -2.0 * std::numbers::pi * jj * k / m;
            acc += vals[static_cast<std::size_t>(k)] * Complex(std::cos(ang), std::sin(ang));
        }
        c[static_cast<std::size_t>(jj)] = acc / (double(m) * std::pow(radius, jj));
    }
    return c;
}

}  // namespace detail

// Evaluation–interpolation on d+1 = n(N+1)+1 roots of unity, with one
// radius adaptation pass when the coefficient profile suggests roots far
// from the unit circle.  Trailing coefficients below zero_poly_tol·max|c|
// are trimmed.
inline CharPoly char_poly(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                          const BoundaryMatrix& beta, double zero_poly_tol = 1e-10) {
    beta.require_valid();
    const int d = sys.n * (sys.N + 1);
    const int m = d + 1;

    auto evaluate = [&](double radius, double* worst_scale) {
        std::vector<Complex> vals(static_cast<std::size_t>(m));
        double scale = 0.0;
        for (int k = 0; k < m; ++k) {
            const double ang = 2.0 * std::numbers::pi * k / m;
            const Complex la = radius * Complex(std::cos(ang), std::sin(ang));
            double h = 0.0;
            vals[static_cast<std::size_t>(k)] = detail::boundary_det(sys, alpha, beta, la, &h);
            scale = std::max(scale, h);
        }
        if (worst_scale) *worst_scale = scale;
        return vals;
    };

    double radius = 1.0;
    double det_scale = 0.0;
    std::vector<Complex> vals = evaluate(radius, &det_scale);

    double max_val = 0.0;
    for (const auto& v : vals) max_val = std::max(max_val, std::abs(v));
    CharPoly p;
    if (max_val <= zero_poly_tol * std::max(1.0, det_scale)) {
        p.is_identically_zero = true;
        return p;
    }

    std::vector<Complex> c = detail::idft_coeffs(vals, radius);

    auto trim_trailing = [&](std::vector<Complex>& coeff) {
        double max_c = 0.0;
        for (const auto& x : coeff) max_c = std::max(max_c, std::abs(x));
        int dd = static_cast<int>(coeff.size()) - 1;
        while (dd >= 0 && std::abs(coeff[static_cast<std::size_t>(dd)]) <= zero_poly_tol * max_c)
            --dd;
        coeff.resize(static_cast<std::size_t>(dd + 1));
    };
    trim_trailing(c);

    // one adaptation pass: enlarge the sampling radius toward the Cauchy-type
    // root magnitude bound when the trimmed coefficients indicate roots far
    // outside the unit circle.  The bound uses trimmed coefficients so a
    // noise-level leading term cannot fake a huge bound, and R never drops
    // below 1, which would amplify high-order interpolation noise by R^{-j}.
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg > 0) {
        double bound = 0.0;
        const double lead = std::abs(c[static_cast<std::size_t>(deg)]);
        for (int jj = 0; jj < deg; ++jj) {
            const double mag = std::abs(c[static_cast<std::size_t>(jj)]);
            if (mag > 0.0) bound = std::max(bound, std::pow(mag / lead, 1.0 / double(deg - jj)));
        }
        if (bound > 2.0 && double(deg) * std::log10(std::min(bound, 1e3)) < 200.0) {
            radius = std::min(bound, 1e3);
            vals = evaluate(radius, nullptr);
            c = detail::idft_coeffs(vals, radius);
            trim_trailing(c);
        }
    }

    p.coeffs = std::move(c);
    return p;
}

// ── Weak Atkinson condition ───────────────────────────────────────────────

struct AtkinsonCheck {
    bool holds = false;
    std::vector<Complex> probes;
    std::vector<double> min_eigs;  // smallest eigenvalue of the Hermitian part of Ω per probe
};

inline std::vector<Complex> default_atkinson_probes() {
    return {Complex(0, 0), Complex(0, 1), Complex(1, 1)};
}

// Ω(λ) > 0 at every probe.  The verdict is λ-independent in exact
// arithmetic, so multiple probes act as a consistency cross-check.
inline AtkinsonCheck check_atkinson(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                                    std::vector<Complex> probes = default_atkinson_probes(),
                                    double atk_tol = 1e-12) {
    if (probes.empty()) probes = default_atkinson_probes();
    AtkinsonCheck out;
    out.probes = probes;
    out.holds = true;
    for (const Complex& la : probes) {
        const FundamentalPair fp = fundamental_solutions(sys, alpha, la);
        const VectorSequence zt = fp.ztilde_sequence();
        const Matrix omega = semi_gram(sys, zt, zt);
        const double floor = atk_tol * std::max(1.0, one_norm(omega));
        const double me = min_hermitian_eigenvalue(omega);
        out.min_eigs.push_back(me);
        if (me <= floor) out.holds = false;
    }
    return out;
}

// ── eigenvalues ───────────────────────────────────────────────────────────

struct Eigenvalue {
    Complex lambda;
    int alg_mult = 0;
    int geom_mult = 0;
    Matrix kernel_basis;  // n×geom_mult, orthonormal columns spanning ker βZ̃_{N+1}(λ)
};

struct Spectrum {
    std::vector<Eigenvalue> eigenvalues;  // sorted by real part
    bool degenerate = false;              // p ≡ 0: every λ is an eigenvalue
    bool atkinson_holds = false;
};

namespace detail {

inline std::vector<Complex> companion_roots(const std::vector<Complex>& coeffs) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 1) return {};

    // balance in the scaled variable λ/R so coefficients with a huge dynamic
    // range (roots spread over several decades) stay resolvable
    double r_bal = 1.0;
    const double lead = std::abs(coeffs[static_cast<std::size_t>(deg)]);
    for (int jj = 0; jj < deg; ++jj) {
        const double mag = std::abs(coeffs[static_cast<std::size_t>(jj)]);
        if (mag > 0.0) r_bal = std::max(r_bal, std::pow(mag / lead, 1.0 / double(deg - jj)));
    }
    r_bal = std::clamp(r_bal, 1e-3, 1e6);

    std::vector<Complex> b(coeffs.size());
    double pw = 1.0;
    for (int jj = 0; jj <= deg; ++jj) {
        b[static_cast<std::size_t>(jj)] = coeffs[static_cast<std::size_t>(jj)] * pw;
        pw *= r_bal;
    }

    Matrix comp = Matrix::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        comp(i, deg - 1) = -b[static_cast<std::size_t>(i)] / b[static_cast<std::size_t>(deg)];
    Eigen::ComplexEigenSolver<Matrix> es(comp, /*computeEigenvectors=*/false);
    std::vector<Complex> roots(es.eigenvalues().data(),
                               es.eigenvalues().data() + es.eigenvalues().size());
    for (Complex& r : roots) r *= r_bal;
    return roots;
}

struct RootCluster {
    Complex center;
    int count = 0;
};

inline std::vector<RootCluster> cluster_roots(std::vector<Complex> roots, double cluster_tol) {
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<RootCluster> clusters;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Complex sum = roots[i];
        int count = 1;
        used[i] = true;
        for (std::size_t jj = i + 1; jj < roots.size(); ++jj) {
            if (used[jj]) continue;
            const Complex mean = sum / double(count);
            if (std::abs(roots[jj] - mean) <= cluster_tol * (1.0 + std::abs(mean))) {
                sum += roots[jj];
                ++count;
                used[jj] = true;
            }
        }
        clusters.push_back({sum / double(count), count});
    }
    return clusters;
}

}  // namespace detail

// Roots of the characteristic polynomial via companion-matrix eigenvalues;
// nearby roots merge into one eigenvalue whose algebraic multiplicity is the
// cluster size.  Geometric multiplicity and the kernel basis come from the
// SVD of βZ̃_{N+1}(λ_j).  Under the Weak Atkinson condition every eigenvalue
// is real with alg = geom, and both facts are enforced as cross-checks.
inline Spectrum eigenvalues(const SymplecticSystem& sys, const BoundaryMatrix& alpha,
                            const BoundaryMatrix& beta, double eig_tol = 1e-8,
                            double cluster_tol = 1e-7) {
    Spectrum spec;
    spec.atkinson_holds = check_atkinson(sys, alpha).holds;

    const CharPoly p = char_poly(sys, alpha, beta);
    if (p.is_identically_zero) {
        spec.degenerate = true;
        return spec;
    }
    if (p.degree() < 1) return spec;  // constant nonzero: no eigenvalues

    std::vector<Complex> roots = detail::companion_roots(p.coeffs);
    for (Complex& r : roots) r = detail::newton_polish(sys, alpha, beta, r);
    auto clusters = detail::cluster_roots(std::move(roots), cluster_tol);

    double root_scale = 1.0;
    for (const auto& cl : clusters) root_scale = std::max(root_scale, std::abs(cl.center));

    for (auto& cl : clusters) {
        Complex la = cl.center;
        if (spec.atkinson_holds && std::abs(la.imag()) <= eig_tol * (1.0 + std::abs(la.real())))
            la = Complex(la.real(), 0.0);
        // an eigenvalue indistinguishable from zero must land exactly at 0
        // so the spectral function's t = 0 branch sees it
        if (std::abs(la) <= eig_tol * root_scale) la = Complex(0.0, 0.0);

        const FundamentalPair fp = fundamental_solutions(sys, alpha, la);
        const Matrix ztail = fp.Ztilde[static_cast<std::size_t>(sys.N + 1)];
        const Matrix bz = beta.mat * ztail;
        Eigen::JacobiSVD<Matrix> svd(bz, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
        const double thresh = eig_tol * std::max(sigma_max, ztail.operatorNorm());
        int geom = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) <= thresh) ++geom;
        if (geom == 0) {
            // interpolation noise can fabricate roots; a genuine root must
            // shrink the determinant far below its Hadamard scale
            double hadamard = 0.0;
            const Complex q = detail::boundary_det(sys, alpha, beta, la, &hadamard);
            if (std::abs(q) > 1e-6 * std::max(1.0, hadamard)) continue;
            throw ConsistencyError("eigenvalues: characteristic root with an empty kernel");
        }

        Eigenvalue ev;
        ev.lambda = la;
        ev.alg_mult = cl.count;
        ev.geom_mult = geom;
        ev.kernel_basis = svd.matrixV().rightCols(geom);

        if (spec.atkinson_holds && ev.alg_mult != ev.geom_mult)
            throw ConsistencyError(
                "eigenvalues: algebraic and geometric multiplicities disagree under the "
                "Atkinson condition (alg=" + std::to_string(ev.alg_mult) +
                ", geom=" + std::to_string(ev.geom_mult) + ")");
        spec.eigenvalues.push_back(std::move(ev));
    }

    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
              [](const Eigenvalue& a, const Eigenvalue& b) {
                  return a.lambda.real() < b.lambda.real();
              });
    return spec;
}

}  // namespace dss
