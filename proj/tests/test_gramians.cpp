#include "doctest.h"

#include <set>

#include "test_support.hpp"
#include "tlbt/gramians.hpp"
#include "tlbt/linalg.hpp"
#include "tlbt/model.hpp"

using namespace tlbt;
using namespace tlbt::gramians;
using tlbt::testing::EigenExponential;
using tlbt::testing::error_code_of;
using tlbt::testing::gramian_quadrature;
using tlbt::testing::kron_lyap;
using tlbt::testing::random_matrix;
using tlbt::testing::random_orthogonal;
using tlbt::testing::random_spd;
using tlbt::testing::random_stable;
using tlbt::testing::rel_diff;
using tlbt::testing::spectral_norm;

namespace
{

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

model::StandardSystem standard(const Matrix& A, const Matrix& B, const Matrix& C)
{
    return {A, B, C, Matrix::Zero(C.rows(), B.cols())};
}

model::StandardSystem scalar_system() { return standard(scalar(-1.0), scalar(1.0), scalar(1.0)); }

// Smallest grid time with ||e^{At}B||_F <= ||B||_F / 2.
double half_decay(const Matrix& A, const Matrix& B, double dt = 0.01)
{
    EigenExponential expo(A);
    for (int k = 1; k < 100000; ++k)
        if ((expo.at(k * dt) * B).norm() <= 0.5 * B.norm())
            return k * dt;
    return 100000 * dt;
}

// Time-limited Gramian by brute force: int_{ts}^{te} e^{At} BB^T e^{A^Tt} dt.
Matrix tl_quadrature(const Matrix& A, const Matrix& B, double ts, double te)
{
    return gramian_quadrature(A, B * B.transpose(), ts, te);
}

Matrix gram(const Matrix& Z) { return Z * Z.transpose(); }

double min_eig(const Matrix& S)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
    return es.eigenvalues()(0);
}

// Independent rational Krylov basis: orth[B, (A - s_1 I)^{-1} B, ...].
Matrix rational_basis(const Matrix& A, const Matrix& B, const std::vector<double>& poles)
{
    Matrix V = B;
    Matrix last = B;
    const Index n = A.rows();
    for (double s : poles)
    {
        last = (A - s * Matrix::Identity(n, n)).fullPivLu().solve(last);
        V.conservativeResize(n, V.cols() + last.cols());
        V.rightCols(last.cols()) = last;
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(V);
    return qr.householderQ() * Matrix::Identity(n, qr.rank());
}

} // namespace

TEST_CASE("window and config validation")
{
    CHECK(error_code_of([] { TimeWindow{1.0, 1.0}.validate(); }) == ErrorCode::InvalidArgument);
    CHECK(error_code_of([] { TimeWindow{-0.1, 1.0}.validate(); }) == ErrorCode::InvalidArgument);
    CHECK_FALSE(error_code_of([] { TimeWindow{0.0, 2.0}.validate(); }));
    SolverConfig cfg;
    cfg.cadence = 0;
    CHECK(error_code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
    cfg = SolverConfig{};
    cfg.tol_f = 0.0;
    CHECK(error_code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("infinite dense gramian")
{
    SUBCASE("scalar")
    {
        CHECK(gramian_infinite_dense(scalar_system())(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("A = -I/2 gives BB^T")
    {
        std::mt19937_64 rng(11);
        const Matrix B = random_matrix(rng, 5, 2);
        const Matrix W = B * B.transpose();
        const Matrix P = gramian_infinite_dense(standard(-0.5 * Matrix::Identity(5, 5), B, Matrix::Zero(1, 5)));
        CHECK(rel_diff(P, W) <= 1e-13);
    }
    SUBCASE("quadrature oracle, 10 x 10")
    {
        std::mt19937_64 rng(12);
        const Matrix A = random_stable(rng, 10, 0.5);
        const Matrix B = random_matrix(rng, 10, 2);
        const Matrix P = gramian_infinite_dense(standard(A, B, Matrix::Zero(1, 10)));
        const Matrix ref = tl_quadrature(A, B, 0.0, 80.0);
        CHECK(rel_diff(P, ref) <= 1e-6);
    }
    SUBCASE("observability solves A^T Q + Q A = -C^T C")
    {
        std::mt19937_64 rng(13);
        const Matrix A = random_stable(rng, 8);
        const Matrix C = random_matrix(rng, 3, 8);
        const Matrix Q = gramian_infinite_dense(standard(A, Matrix::Zero(8, 1), C), GramianKind::Observability);
        CHECK(rel_diff(Q, kron_lyap(A.transpose(), C.transpose() * C)) <= 1e-10);
    }
    SUBCASE("spectrum conflict")
    {
        Matrix A = Matrix::Zero(2, 2);
        A(0, 0) = 1.0;
        A(1, 1) = -1.0;
        CHECK(error_code_of([&] { gramian_infinite_dense(standard(A, Matrix::Ones(2, 1), Matrix::Ones(1, 2))); }) ==
              ErrorCode::SpectrumConflict);
    }
}

TEST_CASE("time-limited dense gramian")
{
    const auto s = scalar_system();
    CHECK(gramian_timelimited_dense(s, {0.0, 1.0})(0, 0) ==
          doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-13));
    CHECK(gramian_timelimited_dense(s, {0.5, 1.0})(0, 0) ==
          doctest::Approx((std::exp(-1.0) - std::exp(-2.0)) / 2.0).epsilon(1e-13));
    CHECK(gramian_timelimited_dense(s, {0.0, 1.0})(0, 0) == doctest::Approx(0.4323324).epsilon(1e-7));
    CHECK(gramian_timelimited_dense(s, {0.5, 1.0})(0, 0) == doctest::Approx(0.1162721).epsilon(1e-6));

    std::mt19937_64 rng(21);
    const Matrix A = random_stable(rng, 8, 0.3);
    const Matrix B = random_matrix(rng, 8, 2);
    const auto sys = standard(A, B, random_matrix(rng, 2, 8));

    SUBCASE("quadrature oracle with t_s > 0")
    {
        const Matrix P = gramian_timelimited_dense(sys, {0.4, 2.5});
        CHECK(rel_diff(P, tl_quadrature(A, B, 0.4, 2.5)) <= 1e-9);
    }
    SUBCASE("difference and Lyapunov routes agree; Lyapunov residual")
    {
        const TimeWindow w{0.3, 1.7};
        const Matrix Pd = gramian_timelimited_dense(sys, w, GramianKind::Reachability, DenseRoute::Difference);
        const Matrix Pl = gramian_timelimited_dense(sys, w, GramianKind::Reachability, DenseRoute::Lyapunov);
        CHECK(rel_diff(Pd, Pl) <= 1e-9);
        EigenExponential expo(A);
        const Matrix Bs = expo.at(w.t_s) * B;
        const Matrix Be = expo.at(w.t_e) * B;
        const Matrix F = Bs * Bs.transpose() - Be * Be.transpose();
        const Matrix R = A * Pd + Pd * A.transpose() + F;
        CHECK(spectral_norm(R) <= 1e-9 * spectral_norm(F));
    }
    SUBCASE("large t_e recovers the infinite gramian")
    {
        const double R = model::spectral_abscissa(A);
        const Matrix Pinf = gramian_infinite_dense(sys);
        const Matrix PT = gramian_timelimited_dense(sys, {0.0, 40.0 / std::abs(R)});
        CHECK(spectral_norm(PT - Pinf) <= 1e-10 * spectral_norm(Pinf));
    }
    SUBCASE("observability")
    {
        const Matrix C = random_matrix(rng, 2, 8);
        const auto so = standard(A, B, C);
        const Matrix Q = gramian_timelimited_dense(so, {0.2, 3.0}, GramianKind::Observability);
        CHECK(rel_diff(Q, gramian_quadrature(A.transpose(), C.transpose() * C, 0.2, 3.0)) <= 1e-9);
    }
}

TEST_CASE("ordering and decay of the time-limited gramian")
{
    std::mt19937_64 rng(22);
    const Matrix A = random_stable(rng, 10, 0.2);
    const Matrix b = random_matrix(rng, 10, 1);
    const auto sys = standard(A, b, random_matrix(rng, 1, 10));
    const Matrix Pinf = gramian_infinite_dense(sys);
    const double lam1 = Eigen::SelfAdjointEigenSolver<Matrix>(Pinf).eigenvalues().maxCoeff();

    const DiagonalizedSystem d = diagonalize(sys);
    const double R = model::spectral_abscissa(A);
    // ||C|| for the Cauchy matrix -1/(l_i + conj(l_j))
    const Index n = 10;
    CMatrix cauchy(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            cauchy(i, j) = -1.0 / (d.lambda(i) + std::conj(d.lambda(j)));
    const Eigen::JacobiSVD<CMatrix> svx(d.X);
    const double normX = svx.singularValues()(0);
    const double normC = Eigen::JacobiSVD<CMatrix>(cauchy).singularValues()(0);
    const double w_inf = d.w.cwiseAbs().maxCoeff();

    double prev = std::numeric_limits<double>::infinity();
    for (double te : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0})
    {
        const Matrix PT = gramian_timelimited_dense(sys, {0.0, te});
        CHECK(min_eig(Pinf - PT) >= -1e-10 * lam1);
        const double gap = spectral_norm(Pinf - PT);
        CHECK(gap < prev);
        prev = gap;
        CHECK(gap <= std::exp(2.0 * R * te) * normX * normX * w_inf * w_inf * normC * (1.0 + 1e-8));
    }
}

TEST_CASE("Cauchy factorization")
{
    SUBCASE("scalar")
    {
        const DiagonalizedSystem d = diagonalize(scalar_system());
        CHECK(gramian_timelimited_cauchy(d, 1.0)(0, 0) == doctest::Approx(0.4323324).epsilon(1e-7));
        CHECK(gramian_timelimited_cauchy(d, 0.0).norm() == 0.0);
    }
    SUBCASE("random diagonalizable 6 x 6 against dense")
    {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 5; ++trial)
        {
            const auto sys = standard(random_stable(rng, 6, 0.2), random_matrix(rng, 6, 1), random_matrix(rng, 1, 6));
            const DiagonalizedSystem d = diagonalize(sys);
            CHECK(rel_diff(gramian_timelimited_cauchy(d, 1.5), gramian_timelimited_dense(sys, {0.0, 1.5})) <= 1e-8);
            CHECK(rel_diff(gramian_timelimited_cauchy(d, 1.5, 0.5), gramian_timelimited_dense(sys, {0.5, 1.5})) <=
                  1e-8);
        }
    }
    SUBCASE("errors")
    {
        Matrix J(2, 2);
        J << -1.0, 1.0, 0.0, -1.0 - 1e-12;
        CHECK(error_code_of([&] { diagonalize(standard(J, Matrix::Ones(2, 1), Matrix::Ones(1, 2))); }) ==
              ErrorCode::NearDefective);
        Matrix D = Matrix::Zero(2, 2);
        D(0, 0) = -1.0;
        D(1, 1) = -2.0;
        Matrix b(2, 1);
        b << 1.0, 0.0;
        CHECK(error_code_of([&] { diagonalize(standard(D, b, Matrix::Ones(1, 2))); }) == ErrorCode::NotControllable);
        CHECK(error_code_of([&] { diagonalize(standard(D, Matrix::Ones(2, 2), Matrix::Ones(1, 2))); }) ==
              ErrorCode::InvalidArgument);
    }
}

TEST_CASE("adaptive shift")
{
    const Complex inf(std::numeric_limits<double>::infinity(), 0.0);
    SUBCASE("Ritz {-1, -3} after the infinite pole, literal objective")
    {
        CVector ritz(2);
        ritz << Complex(-1.0, 0.0), Complex(-3.0, 0.0);
        // brute force: maximize |(s+1)(s+3)| over 1000 points of [1, 3]
        double best = 0.0, arg = 0.0;
        for (int i = 0; i < 1000; ++i)
        {
            const double s = 1.0 + 2.0 * i / 999.0;
            const double v = std::abs((s + 1.0) * (s + 3.0));
            if (v > best)
                best = v, arg = s;
        }
        const Complex s = adaptive_shift(ritz, {inf}, 1, true, ShiftRule::Literal);
        CHECK(s.imag() == 0.0);
        CHECK(s.real() == doctest::Approx(arg).epsilon(1e-12));
        CHECK(s.real() == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("residual objective stays on the mirrored interval")
    {
        CVector ritz(2);
        ritz << Complex(-1.0, 0.0), Complex(-3.0, 0.0);
        const Complex s = adaptive_shift(ritz, {inf}, 1, true);
        CHECK(s.imag() == 0.0);
        CHECK(s.real() >= 1.0 - 1e-12);
        CHECK(s.real() <= 3.0 + 1e-12);
    }
    SUBCASE("never repeats a pole or a mirrored Ritz value")
    {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> re(-10.0, -0.1), im(-5.0, 5.0);
        for (int run = 0; run < 50; ++run)
        {
            const bool symmetric = run % 2 == 0;
            const Index nr = 2 + run % 7;
            CVector ritz(nr);
            for (Index i = 0; i < nr; ++i)
                ritz(i) = Complex(re(rng), symmetric ? 0.0 : im(rng));
            std::vector<Complex> shifts{inf};
            for (int step = 0; step < 6; ++step)
            {
                const Complex s = adaptive_shift(ritz, shifts, 1 + run % 3, symmetric);
                CHECK(s.real() >= 0.0);
                if (symmetric)
                    CHECK(s.imag() == 0.0);
                for (const Complex& old : shifts)
                    if (std::isfinite(old.real()))
                    {
                        CHECK(std::abs(s - old) > 1e-12 * std::abs(old));
                        CHECK(std::abs(s - std::conj(old)) > 1e-12 * std::abs(old));
                    }
                shifts.push_back(s);
                if (s.imag() != 0.0)
                    shifts.push_back(std::conj(s));
            }
        }
    }
    SUBCASE("degenerate hull")
    {
        CVector ritz = CVector::Constant(3, Complex(-2.0, 0.0));
        const Complex s = adaptive_shift(ritz, {inf}, 1, false);
        CHECK(std::isfinite(s.real()));
        CHECK(s.real() > 0.0);
        CHECK(std::abs(s - Complex(2.0, 0.0)) > 1e-12);
    }
    SUBCASE("symmetric operator yields real shifts throughout a solve")
    {
        std::mt19937_64 rng(42);
        const Matrix U = random_orthogonal(rng, 60);
        Vector lam(60);
        for (Index i = 0; i < 60; ++i)
            lam(i) = -std::pow(10.0, 3.0 * i / 59.0);
        const Matrix A = U * lam.asDiagonal() * U.transpose();
        const Matrix As = 0.5 * (A + A.transpose());
        const auto g = solve_infinite_lowrank(standard(As, random_matrix(rng, 60, 1), random_matrix(rng, 1, 60)));
        REQUIRE(g.shifts.size() > 1);
        for (std::size_t i = 1; i < g.shifts.size(); ++i)
            CHECK(g.shifts[i].imag() == 0.0);
    }
}

TEST_CASE("expm action approximation")
{
    std::mt19937_64 rng(51);
    const Matrix A = random_stable(rng, 12);
    const Matrix B = random_matrix(rng, 12, 2);
    SUBCASE("t = 0 returns B")
    {
        const Matrix Q = rational_basis(A, B, {1.0, 2.0});
        const KrylovWorkspace ws = workspace_from_basis(A, Q, B);
        const ExpmAction e = expm_action_approx(ws, 0.0);
        CHECK((e.coeff - ws.B_proj).norm() == 0.0);
        CHECK((e.lifted - B).norm() <= 1e-14 * B.norm());
    }
    SUBCASE("full orthogonal basis is exact")
    {
        const Matrix Qb = rational_basis(A, B, {0.5, 1.0, 2.0, 4.0, 8.0});
        REQUIRE(Qb.cols() == 12);
        const KrylovWorkspace ws = workspace_from_basis(A, Qb, B);
        EigenExponential expo(A);
        for (double t : {0.1, 1.0, 3.0})
        {
            const Matrix ref = expo.at(t) * B;
            CHECK((expm_action_approx(ws, t).lifted - ref).norm() <= 1e-10 * ref.norm());
        }
    }
    SUBCASE("scalar")
    {
        const KrylovWorkspace ws = workspace_from_basis(scalar(-2.0), scalar(1.0), scalar(1.0));
        CHECK(expm_action_approx(ws, 0.5).lifted(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
        CHECK(expm_action_approx(ws, 0.5).lifted(0, 0) == doctest::Approx(0.3678794).epsilon(1e-7));
    }
    SUBCASE("converged solver actions interpolate e^{At}B")
    {
        const Index n = 80;
        const Matrix An = random_stable(rng, n, 0.3);
        const Matrix Bn = random_matrix(rng, n, 2);
        const auto sys = standard(An, Bn, random_matrix(rng, 1, n));
        EigenExponential expo(An);
        const TimeWindow w{0.4, 1.5};
        const SolverConfig cfg;
        const auto g = solve_timelimited_lowrank(sys, w, GramianKind::Reachability, cfg);
        for (double t : {w.t_s, w.t_e})
        {
            const Matrix ref = expo.at(t) * Bn;
            const Matrix& got = t == w.t_s ? g.B_ts : g.B_te;
            CHECK((got - ref).norm() <= 10.0 * cfg.tol_f * ref.norm());
        }
    }
}

TEST_CASE("modified right-hand side")
{
    SUBCASE("eigenvalues {2, -3} become {3, 2}")
    {
        Matrix B(2, 1);
        B << std::sqrt(2.0), 0.0;
        const KrylovWorkspace ws = workspace_from_basis(Matrix(Vector::Constant(2, -1.0).asDiagonal()),
                                                        Matrix::Identity(2, 2), B);
        Matrix Bte(2, 1);
        Bte << 0.0, std::sqrt(3.0);
        const Matrix F = modified_rhs(ws, Bte);
        Eigen::SelfAdjointEigenSolver<Matrix> es(F * F.transpose());
        CHECK(es.eigenvalues()(0) == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(es.eigenvalues()(1) == doctest::Approx(3.0).epsilon(1e-13));
    }
    SUBCASE("vanishing e^{Ht}B recovers the infinite right-hand side")
    {
        std::mt19937_64 rng(61);
        const Matrix A = random_stable(rng, 10);
        const Matrix B = random_matrix(rng, 10, 2);
        const KrylovWorkspace ws = workspace_from_basis(A, rational_basis(A, B, {1.0, 2.0}), B);
        const Matrix F = modified_rhs(ws, Matrix::Zero(ws.dim(), 2));
        CHECK(rel_diff(F * F.transpose(), ws.B_proj * ws.B_proj.transpose()) <= 1e-13);
    }
    SUBCASE("rank at most 2m on random workspaces")
    {
        std::mt19937_64 rng(62);
        for (int trial = 0; trial < 100; ++trial)
        {
            const Index m = 1 + trial % 3;
            const Matrix A = random_stable(rng, 15);
            const Matrix B = random_matrix(rng, 15, m);
            const KrylovWorkspace ws = workspace_from_basis(A, rational_basis(A, B, {1.0, 3.0}), B);
            const Matrix Bte = expm_action_approx(ws, 0.7).coeff;
            const Matrix Bts = expm_action_approx(ws, 0.2).coeff;
            CHECK(modified_rhs(ws, Bte).cols() <= 2 * m);
            const Matrix F = modified_rhs(ws, Bte, Bts);
            CHECK(F.cols() <= 2 * m);
            // same absolute spectrum as the signed right-hand side
            const Matrix S = Bts * Bts.transpose() - Bte * Bte.transpose();
            Eigen::SelfAdjointEigenSolver<Matrix> es(S);
            Eigen::SelfAdjointEigenSolver<Matrix> ef(F * F.transpose());
            Vector a = es.eigenvalues().cwiseAbs();
            std::sort(a.data(), a.data() + a.size());
            CHECK((a - ef.eigenvalues()).norm() <= 1e-12 * a.maxCoeff());
        }
    }
}

TEST_CASE("residual norm")
{
    std::mt19937_64 rng(71);
    const Index n = 40;
    const Matrix A = random_stable(rng, n);
    const Matrix B = random_matrix(rng, n, 2);
    SUBCASE("full space, exact Y")
    {
        const Matrix Q = random_orthogonal(rng, n);
        const KrylovWorkspace ws = workspace_from_basis(A, Q, B);
        const Matrix F = ws.B_proj * ws.B_proj.transpose();
        const Matrix Y = kron_lyap(ws.H, F);
        CHECK(residual_norm(ws, Y, F) <= 1e-12);
    }
    SUBCASE("Y = 0")
    {
        const KrylovWorkspace ws = workspace_from_basis(A, rational_basis(A, B, {1.0, 2.0}), B);
        const Matrix F = ws.B_proj * ws.B_proj.transpose();
        CHECK(residual_norm(ws, Matrix::Zero(ws.dim(), ws.dim()), F) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("explicit dense residual, n = 80")
    {
        const Index n2 = 80;
        const Matrix A2 = random_stable(rng, n2);
        const Matrix B2 = random_matrix(rng, n2, 2);
        const Matrix Q = rational_basis(A2, B2, {0.5, 1.0, 2.0, 4.0});
        const KrylovWorkspace ws = workspace_from_basis(A2, Q, B2);
        const Matrix Ht = expm_action_approx(ws, 1.0).coeff;
        const Matrix F = ws.B_proj * ws.B_proj.transpose() - Ht * Ht.transpose();
        // near the projected solution so the residual is O(1e-3)
        Matrix E = random_matrix(rng, ws.dim(), ws.dim());
        const Matrix Y = kron_lyap(ws.H, F) + 1e-3 * spectral_norm(F) * (E + E.transpose());
        const Matrix X = Q * Y * Q.transpose();
        const Matrix Fn = Q * F * Q.transpose();
        const double ref = spectral_norm(A2 * X + X * A2.transpose() + Fn) / spectral_norm(F);
        CHECK(std::abs(residual_norm(ws, Y, F) - ref) <= 1e-10);
    }
}

TEST_CASE("infinite low-rank solve")
{
    SUBCASE("scalar")
    {
        const auto g = solve_infinite_lowrank(scalar_system());
        REQUIRE(g.Z.cols() == 1);
        CHECK(std::abs(g.Z(0, 0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        CHECK(g.mu <= 1e-8);
    }
    SUBCASE("dense agreement and residual contract")
    {
        std::mt19937_64 rng(81);
        for (Index m : {1, 3})
        {
            const Index n = 80;
            const auto sys = standard(random_stable(rng, n), random_matrix(rng, n, m), random_matrix(rng, 2, n));
            const auto g = solve_infinite_lowrank(sys);
            const Matrix P = gramian_infinite_dense(sys);
            CHECK(rel_diff(gram(g.Z), P) <= 1e-6);
            CHECK(g.mu <= 1e-8);
            CHECK(g.rank <= g.dim);
            // independently recomputed residual of AX + XA^T + BB^T
            const Matrix X = gram(g.Z);
            const Matrix W = sys.B * sys.B.transpose();
            const double mu = spectral_norm(sys.A * X + X * sys.A.transpose() + W) / spectral_norm(W);
            CHECK(std::abs(mu - g.mu) <= 1e-10);
            REQUIRE_FALSE(g.trace.empty());
            CHECK(g.trace.back().mu == doctest::Approx(g.mu));
        }
    }
}

TEST_CASE("time-limited low-rank solve")
{
    std::mt19937_64 rng(91);
    SUBCASE("n = 100 SISO at the half-decay time")
    {
        const Index n = 100;
        const auto sys = standard(random_stable(rng, n), random_matrix(rng, n, 1), random_matrix(rng, 1, n));
        const double te = half_decay(sys.A, sys.B);
        const auto g = solve_timelimited_lowrank(sys, {0.0, te});
        const Matrix P = gramian_timelimited_dense(sys, {0.0, te});
        CHECK(rel_diff(gram(g.Z), P) <= 1e-6);
        CHECK(g.mu <= 1e-8);
        CHECK(g.rank <= g.dim);
        CHECK(g.dim <= n);
        // mu against the residual recomputed from the returned factors
        const Matrix X = gram(g.Z);
        const Matrix F = g.B_ts * g.B_ts.transpose() - g.B_te * g.B_te.transpose();
        const double mu = spectral_norm(sys.A * X + X * sys.A.transpose() + F) / spectral_norm(F);
        CHECK(std::abs(mu - g.mu) <= 1e-10);
    }
    SUBCASE("nonzero t_s")
    {
        const Index n = 60;
        const auto sys = standard(random_stable(rng, n), random_matrix(rng, n, 2), random_matrix(rng, 2, n));
        const auto g = solve_timelimited_lowrank(sys, {0.5, 2.0});
        CHECK(rel_diff(gram(g.Z), gramian_timelimited_dense(sys, {0.5, 2.0})) <= 1e-6);
    }
    SUBCASE("large t_e recovers the infinite gramian")
    {
        const Index n = 50;
        const auto sys = standard(random_stable(rng, n, 0.5), random_matrix(rng, n, 1), random_matrix(rng, 1, n));
        const auto g = solve_timelimited_lowrank(sys, {0.0, 200.0});
        const Matrix X = gram(g.Z);
        const Matrix W = sys.B * sys.B.transpose();
        CHECK(spectral_norm(sys.A * X + X * sys.A.transpose() + W) <= 1e-7 * spectral_norm(W));
        CHECK(rel_diff(X, gramian_infinite_dense(sys)) <= 1e-6);
    }
    SUBCASE("duality")
    {
        const Index n = 40;
        const auto sys = standard(random_stable(rng, n), random_matrix(rng, n, 1), random_matrix(rng, 2, n));
        const auto dual = standard(sys.A.transpose(), sys.C.transpose(), sys.B.transpose());
        const auto q = solve_timelimited_lowrank(sys, {0.0, 1.0}, GramianKind::Observability);
        const auto p = solve_timelimited_lowrank(dual, {0.0, 1.0}, GramianKind::Reachability);
        CHECK(rel_diff(gram(q.Z), gram(p.Z)) <= 1e-12);
    }
    SUBCASE("trace rows")
    {
        const Index n = 40;
        const auto sys = standard(random_stable(rng, n), random_matrix(rng, n, 1), random_matrix(rng, 1, n));
        SolverConfig cfg;
        cfg.cadence = 3;
        const auto g = solve_timelimited_lowrank(sys, {0.0, 1.0}, GramianKind::Reachability, cfg);
        REQUIRE(g.trace.size() >= 2);
        CHECK(std::isinf(g.trace.front().shift.real()));
        for (std::size_t i = 1; i < g.trace.size(); ++i)
        {
            CHECK(g.trace[i].k > g.trace[i - 1].k);
            CHECK(g.trace[i].dim >= g.trace[i - 1].dim);
        }
        CHECK(g.trace.back().mu >= 0.0);
        CHECK(g.trace.back().mu <= cfg.tol_p);
    }
    SUBCASE("errors")
    {
        const Index n = 50;
        const auto sys = standard(random_stable(rng, n), random_matrix(rng, n, 1), random_matrix(rng, 1, n));
        SolverConfig cfg;
        cfg.max_dim = 3;
        CHECK(error_code_of([&] { solve_timelimited_lowrank(sys, {0.0, 1.0}, GramianKind::Reachability, cfg); }) ==
              ErrorCode::MaxDimExceeded);
        auto unstable = sys;
        unstable.A += 5.0 * Matrix::Identity(n, n);
        CHECK(error_code_of([&] { solve_timelimited_lowrank(unstable, {0.0, 1.0}); }) == ErrorCode::UnstableSystem);
    }
}

TEST_CASE("generalized low-rank solves")
{
    std::mt19937_64 rng(101);
    const Index n = 40;
    const Matrix M = random_spd(rng, n);
    const Matrix A = M * random_stable(rng, n, 0.3);
    model::GeneralizedSystem g;
    g.M = M.sparseView();
    g.A = A.sparseView();
    g.B = random_matrix(rng, n, 2);
    g.C = random_matrix(rng, 2, n);
    g.D = Matrix::Zero(2, 2);
    const TimeWindow w{0.0, 1.5};
    for (bool spd : {true, false})
    {
        CAPTURE(spd);
        g.spd_mass = spd;
        const model::System sys = g;
        const auto p = solve_timelimited_lowrank(sys, w);
        const Matrix Pref = gramian_timelimited_dense(sys, w);
        CHECK(rel_diff(gram(p.Z), Pref) <= 1e-6);
        const auto q = solve_timelimited_lowrank(sys, w, GramianKind::Observability);
        CHECK(rel_diff(gram(q.Z), gramian_timelimited_dense(sys, w, GramianKind::Observability)) <= 1e-6);

        // generalized residual A P M^T + M P A^T + rhs
        const Matrix Ms = M.inverse();
        EigenExponential expo(Ms * A);
        const Matrix Be = expo.at(w.t_e) * Ms * g.B;
        const Matrix Bs = Ms * g.B;
        const Matrix F = M * (Bs * Bs.transpose() - Be * Be.transpose()) * M.transpose();
        const Matrix X = gram(p.Z);
        CHECK(spectral_norm(A * X * M.transpose() + M * X * A.transpose() + F) <= 1e-6 * spectral_norm(F));
    }
}

TEST_CASE("modified low-rank solve")
{
    SUBCASE("definite right-hand side leaves the gramian unchanged")
    {
        std::mt19937_64 rng(111);
        const Index n = 6;
        const Matrix U = random_orthogonal(rng, n);
        Vector lam(n);
        lam << -0.5, -1.0, -1.5, -2.0, -3.0, -4.0;
        Matrix A = U * lam.asDiagonal() * U.transpose();
        A = 0.5 * (A + A.transpose());
        // B = I: I - e^{At}e^{A^Tt} is positive semidefinite for contractive e^{At}
        const auto sys = standard(A, Matrix::Identity(n, n), Matrix::Identity(n, n));
        const TimeWindow w{0.0, 0.8};
        const Matrix PT = gramian_timelimited_dense(sys, w);
        CHECK(rel_diff(gramian_modified_dense(sys, w), PT) <= 1e-12);
        CHECK(rel_diff(gram(solve_modified_lowrank(sys, w).Z), PT) <= 1e-8);
        const auto s = scalar_system();
        CHECK(gram(solve_modified_lowrank(s, w).Z)(0, 0) ==
              doctest::Approx(gramian_timelimited_dense(s, w)(0, 0)).epsilon(1e-8));
    }
    SUBCASE("dense agreement")
    {
        std::mt19937_64 rng(112);
        const Index n = 60;
        const auto sys = standard(random_stable(rng, n), random_matrix(rng, n, 2), random_matrix(rng, 2, n));
        const TimeWindow w{0.0, 1.2};
        const Matrix Pm = gramian_modified_dense(sys, w);
        CHECK(rel_diff(gram(solve_modified_lowrank(sys, w).Z), Pm) <= 1e-6);
        CHECK(min_eig(Pm) >= -1e-12 * spectral_norm(Pm));
    }
}

TEST_CASE("psd factor")
{
    std::mt19937_64 rng(121);
    const Matrix Z0 = random_matrix(rng, 10, 3);
    const Matrix S = Z0 * Z0.transpose();
    const Matrix Z = psd_factor(S);
    CHECK(Z.cols() == 3);
    CHECK(rel_diff(Z * Z.transpose(), S) <= 1e-13);
    CHECK(psd_factor(Matrix::Zero(4, 4)).cols() == 0);
}
