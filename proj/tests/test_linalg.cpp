#include "doctest.h"

#include "test_support.hpp"
#include "tlbt/linalg.hpp"

#include <algorithm>

using namespace tlbt;
using namespace tlbt::linalg;
using tlbt::testing::random_matrix;
using tlbt::testing::random_stable;

TEST_CASE("lu_solve: identity and diagonal")
{
    const Matrix b = (Matrix(3, 1) << 1.0, -2.0, 3.5).finished();
    CHECK((lu_solve(Matrix::Identity(3, 3), b) - b).norm() == 0.0);

    const Matrix D = Eigen::Vector2d(2.0, 4.0).asDiagonal();
    const Matrix x = lu_solve(D, (Matrix(2, 1) << 2.0, 4.0).finished());
    CHECK(x(0, 0) == doctest::Approx(1.0));
    CHECK(x(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("lu_solve: residual on random well-conditioned systems")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial)
    {
        const Index n = 8;
        Matrix A = random_matrix(rng, n, n) + 4.0 * Matrix::Identity(n, n);
        Eigen::JacobiSVD<Matrix> sv(A);
        const double kappa = sv.singularValues()(0) / sv.singularValues()(n - 1);
        REQUIRE(kappa <= 1e6);
        const Matrix b = random_matrix(rng, n, 2);
        const Matrix x = lu_solve(A, b);
        CHECK((A * x - b).norm() <= 1e-10 * b.norm());
    }
}

TEST_CASE("lu_solve: complex variant and singular detection")
{
    CMatrix A(2, 2);
    A << Complex(1, 1), Complex(0, 0), Complex(2, 0), Complex(0, -1);
    CMatrix b(2, 1);
    b << Complex(1, 0), Complex(0, 1);
    const CMatrix x = lu_solve(A, b);
    CHECK((A * x - b).norm() <= 1e-14);

    Matrix S(2, 2);
    S << 1.0, 2.0, 2.0, 4.0;
    try
    {
        lu_solve(S, Matrix::Ones(2, 1));
        FAIL("expected SingularMatrix");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::SingularMatrix);
    }
}

TEST_CASE("orthonormal_extend: orthogonal, dependent and hand Gram-Schmidt cases")
{
    const Matrix e1 = Matrix::Identity(3, 3).col(0);
    const Matrix e2 = Matrix::Identity(3, 3).col(1);

    const Matrix q2 = orthonormal_extend(e1, e2);
    REQUIRE(q2.cols() == 2);
    CHECK((q2.col(1) - e2).norm() <= 1e-15);

    CHECK(orthonormal_extend(e1, e1).cols() == 1);

    const Matrix v = (Matrix(3, 1) << 1.0, 1.0, 0.0).finished();
    const Matrix q = orthonormal_extend(e1, v);
    REQUIRE(q.cols() == 2);
    CHECK(std::abs(std::abs(q(1, 1)) - 1.0) <= 1e-15);
    CHECK(std::abs(q(0, 1)) <= 1e-15);
}

TEST_CASE("orthonormal_extend: stays orthonormal under many additions")
{
    std::mt19937_64 rng(3);
    Matrix Q(40, 0);
    for (int k = 0; k < 10; ++k)
        Q = orthonormal_extend(Q, random_matrix(rng, 40, 3));
    CHECK(Q.cols() == 30);
    CHECK((Q.transpose() * Q - Matrix::Identity(30, 30)).norm() <= 1e-12);
}

TEST_CASE("svd: diagonal, zero, random reconstruction")
{
    const Matrix D = Eigen::Vector2d(3.0, 1.0).asDiagonal();
    const Svd d = svd(D);
    CHECK(d.sigma(0) == doctest::Approx(3.0));
    CHECK(d.sigma(1) == doctest::Approx(1.0));

    CHECK(svd(Matrix::Zero(3, 2)).sigma.norm() == 0.0);

    std::mt19937_64 rng(5);
    const Matrix A = random_matrix(rng, 6, 4);
    const Svd s = svd(A);
    const Matrix rebuilt = s.U * s.sigma.asDiagonal() * s.V.transpose();
    CHECK((A - rebuilt).norm() <= 1e-12 * s.sigma(0));
    CHECK((s.U.transpose() * s.U - Matrix::Identity(4, 4)).norm() <= 1e-12);
    CHECK(std::is_sorted(s.sigma.data(), s.sigma.data() + 4, std::greater<>()));
}

TEST_CASE("sym_eig: ordering, identity, residual, PSD floor")
{
    const Matrix D = Eigen::Vector2d(-1.0, 2.0).asDiagonal();
    const SymEig d = sym_eig(D);
    CHECK(d.values(0) == doctest::Approx(2.0));
    CHECK(d.values(1) == doctest::Approx(-1.0));

    CHECK((sym_eig(Matrix::Identity(5, 5)).values - Vector::Ones(5)).norm() <= 1e-15);

    std::mt19937_64 rng(9);
    Matrix G = random_matrix(rng, 10, 10);
    Matrix S = G + G.transpose();
    const SymEig e = sym_eig(S);
    CHECK((S * e.vectors - e.vectors * e.values.asDiagonal()).norm() <= 1e-11 * S.norm());

    Matrix F = random_matrix(rng, 10, 4);
    const SymEig p = sym_eig(F * F.transpose());
    CHECK(p.values.minCoeff() >= -1e-12 * p.values(0));
}

TEST_CASE("sym_eig rejects non-symmetric input")
{
    Matrix A(2, 2);
    A << 1.0, 2.0, 0.0, 1.0;
    CHECK_THROWS_AS(sym_eig(A), Error);
}

TEST_CASE("gen_eig: rotation, triangular, companion")
{
    Matrix R(2, 2);
    R << 0.0, 1.0, -1.0, 0.0;
    const auto r = gen_eig(R);
    CHECK(std::abs(r.values(0).real()) <= 1e-15);
    CHECK(std::abs(std::abs(r.values(0).imag()) - 1.0) <= 1e-15);

    Matrix T(2, 2);
    T << -1.0, 5.0, 0.0, -2.0;
    auto t = gen_eig(T).values;
    std::vector<double> tv = {t(0).real(), t(1).real()};
    std::sort(tv.begin(), tv.end());
    CHECK(tv[0] == doctest::Approx(-2.0));
    CHECK(tv[1] == doctest::Approx(-1.0));

    // s^2 + 3 s + 2 = (s + 1)(s + 2)
    Matrix C(2, 2);
    C << 0.0, 1.0, -2.0, -3.0;
    auto c = gen_eig(C, true);
    std::vector<double> cv = {c.values(0).real(), c.values(1).real()};
    std::sort(cv.begin(), cv.end());
    CHECK(cv[0] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(cv[1] == doctest::Approx(-1.0).epsilon(1e-14));
    const CMatrix residual =
        C.cast<Complex>() * c.vectors - c.vectors * c.values.asDiagonal();
    CHECK(residual.norm() <= 1e-13 * C.norm());
}

TEST_CASE("expm: zero, nilpotent, diagonal")
{
    CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

    Matrix N(2, 2);
    N << 0.0, 1.0, 0.0, 0.0;
    Matrix expected(2, 2);
    expected << 1.0, 1.0, 0.0, 1.0;
    CHECK((expm(N) - expected).norm() <= 1e-15);

    const Matrix D = Eigen::Vector2d(-1.0, -2.0).asDiagonal();
    const Matrix E = expm(D);
    CHECK(E(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(E(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(E(0, 0) == doctest::Approx(0.3678794).epsilon(1e-7));
    CHECK(E(1, 1) == doctest::Approx(0.1353353).epsilon(1e-7));
}

TEST_CASE("expm: group and semigroup properties")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial)
    {
        Matrix A = random_matrix(rng, 6, 6);
        A *= 5.0 / tlbt::testing::spectral_norm(A) * (trial + 1) / 20.0;
        const Matrix I = Matrix::Identity(6, 6);
        CHECK(tlbt::testing::spectral_norm(expm(A) * expm(-A) - I) <= 1e-10);

        const double t1 = 0.3, t2 = 0.9;
        const Matrix lhs = expm(A * (t1 + t2));
        const Matrix rhs = expm(A * t1) * expm(A * t2);
        CHECK(tlbt::testing::spectral_norm(lhs - rhs) <= 1e-9 * tlbt::testing::spectral_norm(lhs));
    }
}

TEST_CASE("expm: agrees with an eigen-based exponential on a stable matrix")
{
    std::mt19937_64 rng(4);
    const Matrix A = random_stable(rng, 12);
    tlbt::testing::EigenExponential ref(A);
    for (double t : {0.01, 0.5, 3.0, 20.0})
        CHECK(tlbt::testing::rel_diff(expm(A * t), ref.at(t)) <= 1e-11);
}

TEST_CASE("expm: overflow is reported")
{
    Matrix A = Matrix::Identity(2, 2) * 1000.0;
    CHECK_THROWS_AS(expm(A), Error);
}

TEST_CASE("lyap_dense: scaled identity and scalar")
{
    const Matrix A = -0.5 * Matrix::Identity(2, 2);
    const Matrix W = Matrix::Ones(2, 2);
    CHECK((lyap_dense(A, W) - W).norm() <= 1e-15);

    const Matrix X = lyap_dense(Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 2.0));
    CHECK(X(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("lyap_dense: matches Kronecker brute force on random stable 12x12")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial)
    {
        const Matrix A = random_stable(rng, 12);
        const Matrix B = random_matrix(rng, 12, 2);
        const Matrix W = B * B.transpose();
        const Matrix X = lyap_dense(A, W);
        const Matrix ref = tlbt::testing::kron_lyap(A, W);
        CHECK(tlbt::testing::rel_diff(X, ref) <= 1e-9);
        const double res = tlbt::testing::spectral_norm(A * X + X * A.transpose() + W);
        CHECK(res <= 1e-10 * (2.0 * tlbt::testing::spectral_norm(A) * tlbt::testing::spectral_norm(X) +
                              tlbt::testing::spectral_norm(W)));
        CHECK((X - X.transpose()).norm() == 0.0);
    }
}

TEST_CASE("lyap_dense: integral form by quadrature on 3x3")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 3; ++trial)
    {
        const Matrix A = random_stable(rng, 3, 0.5);
        const Matrix B = random_matrix(rng, 3, 1);
        const Matrix W = B * B.transpose();
        Eigen::EigenSolver<Matrix> es(A, false);
        const double horizon = 40.0 / std::abs(es.eigenvalues().real().maxCoeff());
        const Matrix integral = tlbt::testing::gramian_quadrature(A, W, 0.0, horizon);
        CHECK(tlbt::testing::rel_diff(lyap_dense(A, W), integral) <= 1e-6);
    }
}

TEST_CASE("lyap_dense: unstable but admissible spectrum is allowed, conflicts are rejected")
{
    Matrix A(2, 2);
    A << 0.3, 1.0, 0.0, -2.0;
    const Matrix W = Matrix::Identity(2, 2);
    const Matrix X = lyap_dense(A, W);
    CHECK((A * X + X * A.transpose() + W).norm() <= 1e-12);

    Matrix C(2, 2);
    C << 1.0, 0.0, 0.0, -1.0;
    try
    {
        lyap_dense(C, W);
        FAIL("expected SpectrumConflict");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::SpectrumConflict);
    }
}

TEST_CASE("lyap_dense: complex Schur bumps (oscillatory spectrum)")
{
    Matrix A(4, 4);
    A << -0.05, 3.0, 0.2, 0.0, -3.0, -0.05, 0.0, 0.1, 0.0, 0.0, -0.4, 7.0, 0.0, 0.0, -7.0, -0.4;
    std::mt19937_64 rng(2);
    const Matrix T = tlbt::testing::random_orthogonal(rng, 4);
    const Matrix At = T * A * T.transpose();
    const Matrix W = Matrix::Identity(4, 4);
    const Matrix X = lyap_dense(At, W);
    CHECK(tlbt::testing::rel_diff(X, tlbt::testing::kron_lyap(At, W)) <= 1e-10);
}
