#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace dss;
using dss::testing::Rng;

TEST_CASE("omega matrix closed forms") {
    SECTION("block family: b(N+1) I at any lambda") {
        const int N = 4;
        auto sys = build_block_ab(2, 3, N);
        auto alpha = make_boundary({{1, 0, 0, 0}, {0, 1, 0, 0}});
        for (Complex la : {Complex(0, 0), Complex(0.3, 1.2), Complex(-2, 0)}) {
            const Matrix omega = omega_matrix(sys, alpha, la);
            CHECK(max_abs(omega - 3.0 * (N + 1) * Matrix::Identity(2, 2)) <= 1e-9);
        }
    }
    SECTION("zero weight gives zero omega") {
        std::vector<Matrix> s(3, Matrix::Identity(2, 2));
        std::vector<Matrix> psi(3, Matrix::Zero(2, 2));
        SymplecticSystem sys(1, 2, s, psi);
        CHECK(max_abs(omega_matrix(sys, make_boundary({{1, 0}}), Complex(0, 1))) == 0.0);
    }
    SECTION("scalar family: omega is v_{N+1}") {
        auto sys = build_sl_scalar({0, 1, 2});
        CHECK(std::abs(omega_matrix(sys, make_boundary({{1, 0}}), Complex(0, 0))(0, 0) -
                       Complex(2, 0)) <= 1e-12);
    }
}

TEST_CASE("orthonormalization of kernel vectors") {
    SECTION("scalar family: eta = 1/sqrt(v_{N+1})") {
        auto sys = build_sl_scalar({0, 1, 2});
        auto a10 = make_boundary({{1, 0}});
        auto spec = eigenvalues(sys, a10, a10);
        REQUIRE(spec.eigenvalues.size() == 1);
        auto etas = orthonormalize(sys, a10, a10, spec.eigenvalues[0]);
        REQUIRE(etas.size() == 1);
        CHECK(std::abs(etas[0](0)) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
    }
    SECTION("scaled-identity omega divides an orthonormal kernel basis by sqrt(c)") {
        const int N = 2;
        const double c = 3.0 * (N + 1);  // omega of the block family is cI
        auto sys = build_block_ab(2, 3, N);
        auto alpha = make_boundary({{1, 0, 0, 0}, {0, 1, 0, 0}});
        auto spec = eigenvalues(sys, alpha, make_boundary({{0, 0, 1, 0}, {0, 0, 0, 1}}));
        REQUIRE(spec.eigenvalues.size() == 1);
        const auto& ev = spec.eigenvalues[0];
        auto etas = orthonormalize(sys, alpha, make_boundary({{0, 0, 1, 0}, {0, 0, 0, 1}}), ev);
        REQUIRE(static_cast<int>(etas.size()) == ev.geom_mult);
        for (std::size_t l = 0; l < etas.size(); ++l)
            CHECK((etas[l] - ev.kernel_basis.col(static_cast<Eigen::Index>(l)) / std::sqrt(c))
                      .norm() <= 1e-10);
    }
    SECTION("eta vectors stay inside the kernel and are omega-orthonormal") {
        Rng rng(84001);
        for (int rep = 0; rep < 5; ++rep) {
            auto rs = dss::testing::random_atkinson_system(rng, 2 + rep % 2, 4);
            auto beta = dss::testing::random_boundary(rng, rs.sys.n);
            auto spec = eigenvalues(rs.sys, rs.alpha, beta);
            for (const auto& ev : spec.eigenvalues) {
                auto etas = orthonormalize(rs.sys, rs.alpha, beta, ev);
                const Matrix omega = omega_matrix(rs.sys, rs.alpha, ev.lambda);
                auto fp = fundamental_solutions(rs.sys, rs.alpha, ev.lambda);
                const Matrix bz = beta.mat * fp.Ztilde[static_cast<std::size_t>(rs.sys.N + 1)];
                for (std::size_t i = 0; i < etas.size(); ++i) {
                    CHECK((bz * etas[i]).norm() <= 1e-9 * std::max(1.0, one_norm(bz)));
                    for (std::size_t l = 0; l < etas.size(); ++l) {
                        const Complex q = (etas[i].adjoint() * omega * etas[l])(0, 0);
                        CHECK(std::abs(q - (i == l ? Complex(1, 0) : Complex(0, 0))) <= 1e-9);
                    }
                }
            }
        }
    }
    SECTION("atkinson violation is reported") {
        auto sys = build_sl_scalar({0, 1, 2});
        auto a01 = make_boundary({{0, 1}});
        auto a10 = make_boundary({{1, 0}});
        // alpha=(0,1) kills the weight along the second-kind solution
        auto spec = eigenvalues(sys, a01, a10);
        REQUIRE_FALSE(spec.atkinson_holds);
        REQUIRE(spec.eigenvalues.empty());  // constant polynomial, nothing to orthonormalize
        // build a fake eigenvalue to drive orthonormalize directly
        Eigenvalue ev;
        ev.lambda = Complex(0, 0);
        ev.alg_mult = ev.geom_mult = 1;
        ev.kernel_basis = Matrix::Identity(1, 1);
        CHECK_THROWS_AS(orthonormalize(sys, a01, a10, ev), AtkinsonError);
    }
}

TEST_CASE("orthonormal eigenfunction set") {
    SECTION("block family, left-clamped: two constant eigenfunctions") {
        const int N = 4;
        const double b = 3.0;
        auto sys = build_block_ab(2, b, N);
        auto alpha = make_boundary({{1, 0, 0, 0}, {0, 1, 0, 0}});
        auto eigset = orthonormal_eigen_set(sys, alpha, alpha);
        REQUIRE(eigset.size() == 2);
        for (const auto& e : eigset.entries) {
            CHECK(std::abs(e.lambda) <= 1e-10);
            CHECK(semi_norm(sys, e.z) == Catch::Approx(1.0).margin(1e-10));
            for (int k = 0; k <= sys.N + 1; ++k) CHECK(max_abs(e.z[k] - e.z[0]) <= 1e-11);
            // unnormalized counterpart has norm sqrt(b(N+1))
            VectorSequence unnorm = e.z;
            const double scale = std::sqrt(b * (N + 1));
            for (int k = 0; k <= sys.N + 1; ++k) unnorm[k] *= scale;
            CHECK(semi_norm(sys, unnorm) == Catch::Approx(scale).margin(1e-9));
        }
    }
    SECTION("no eigenvalues gives an empty set") {
        auto sys = build_sl_scalar({0, 1, 2});
        auto eigset = orthonormal_eigen_set(sys, make_boundary({{1, 0}}), make_boundary({{0, 1}}));
        CHECK(eigset.size() == 0);
    }
    SECTION("mixed block pair: orthogonal eigenfunctions at distinct eigenvalues") {
        auto sys = build_block_ab(1, 1, 1);
        auto alpha = make_boundary({{1, 0, 0, 0}, {0, 1, 0, 0}});
        auto beta = make_boundary({{1, 0, 0, 0}, {0, 0, 0, 1}});
        auto eigset = orthonormal_eigen_set(sys, alpha, beta);
        REQUIRE(eigset.size() == 2);
        CHECK(std::abs(semi_inner_product(sys, eigset.entries[0].z, eigset.entries[1].z)) <= 1e-9);
        // first eigenfunction is constant with third-component modulus 1/sqrt(b(N+1))
        const auto& z0 = eigset.entries[0].z;
        CHECK(std::abs(z0[0](2, 0)) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-10));
        CHECK(std::abs(z0[0](0, 0)) <= 1e-12);
        CHECK(std::abs(z0[0](1, 0)) <= 1e-12);
        CHECK(std::abs(z0[0](3, 0)) <= 1e-12);
    }
}

TEST_CASE("gram matrix of the full set is the identity") {
    Rng rng(84002);
    for (int rep = 0; rep < 5; ++rep) {
        auto rs = dss::testing::random_atkinson_system(rng, 1 + rep % 3, 4);
        auto beta = dss::testing::random_boundary(rng, rs.sys.n);
        auto eigset = orthonormal_eigen_set(rs.sys, rs.alpha, beta);
        for (int i = 0; i < eigset.size(); ++i)
            for (int l = 0; l < eigset.size(); ++l) {
                const Complex q =
                    semi_inner_product(rs.sys, eigset.entries[i].z, eigset.entries[l].z);
                CHECK(std::abs(q - (i == l ? Complex(1, 0) : Complex(0, 0))) <= 1e-9);
            }
    }
}

TEST_CASE("eigenfunctions solve the system and carry weight") {
    Rng rng(84003);
    auto rs = dss::testing::random_atkinson_system(rng, 2, 5);
    auto beta = dss::testing::random_boundary(rng, 2);
    auto eigset = orthonormal_eigen_set(rs.sys, rs.alpha, beta);
    for (const auto& e : eigset.entries) {
        for (int k = 0; k <= rs.sys.N; ++k)
            CHECK(max_abs(e.z[k] - transition(rs.sys, k, e.lambda) * e.z[k + 1]) <= 1e-10);
        CHECK((rs.alpha.mat * e.z[0]).norm() <= 1e-9);
        CHECK((beta.mat * e.z[rs.sys.N + 1]).norm() <= 1e-9);
        double weight = 0.0;
        for (int k = 0; k <= rs.sys.N; ++k)
            weight = std::max(weight, (rs.sys.Psi[static_cast<std::size_t>(k)] * e.z[k]).norm());
        CHECK(weight > 1e-8);
    }
}

TEST_CASE("orthonormalization is idempotent up to unitary mixing") {
    Rng rng(84004);
    auto rs = dss::testing::random_atkinson_system(rng, 3, 4);
    auto beta = dss::testing::random_boundary(rng, 3);
    auto spec = eigenvalues(rs.sys, rs.alpha, beta);
    for (const auto& ev : spec.eigenvalues) {
        auto etas = orthonormalize(rs.sys, rs.alpha, beta, ev);
        Matrix basis(rs.sys.n, static_cast<Eigen::Index>(etas.size()));
        for (std::size_t c = 0; c < etas.size(); ++c)
            basis.col(static_cast<Eigen::Index>(c)) = etas[c];
        // feed the eta span back in as a freshly orthonormalized kernel basis
        Eigen::HouseholderQR<Matrix> qr(basis);
        Eigenvalue again = ev;
        again.kernel_basis =
            qr.householderQ() * Matrix::Identity(rs.sys.n, static_cast<Eigen::Index>(etas.size()));
        auto etas2 = orthonormalize(rs.sys, rs.alpha, beta, again);
        REQUIRE(etas2.size() == etas.size());
        // same span and same omega-Gram, though individual vectors may mix
        const Matrix omega = omega_matrix(rs.sys, rs.alpha, ev.lambda);
        Matrix basis2(rs.sys.n, static_cast<Eigen::Index>(etas2.size()));
        for (std::size_t c = 0; c < etas2.size(); ++c)
            basis2.col(static_cast<Eigen::Index>(c)) = etas2[c];
        const Matrix gram = basis2.adjoint() * omega * basis2;
        CHECK(max_abs(gram - Matrix::Identity(gram.rows(), gram.cols())) <= 1e-9);
        // spans agree: projector onto col(basis) reproduces basis2
        Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeThinU);
        const Matrix proj = svd.matrixU() * svd.matrixU().adjoint();
        CHECK(max_abs(proj * basis2 - basis2) <= 1e-9);
    }
}
