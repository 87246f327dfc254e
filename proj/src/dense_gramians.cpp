#include "tlbt/gramians.hpp"

#include <cmath>

#include "tlbt/linalg.hpp"

namespace tlbt::gramians
{

namespace
{

struct DenseData
{
    Matrix A; // M^{-1}A, or its transpose for observability
    Matrix B; // M^{-1}B, or C^T
    Matrix M; // identity for standard systems
};

DenseData dense_data(const model::System& sys, GramianKind kind)
{
    const model::DenseRealization r = model::to_dense_standard(sys);
    DenseData d;
    d.M = r.M;
    if (kind == GramianKind::Reachability)
    {
        d.A = r.system.A;
        d.B = r.system.B;
    }
    else
    {
        d.A = r.system.A.transpose();
        d.B = r.system.C.transpose();
    }
    return d;
}

// Observability Gramians of (M^{-1}A, C) are M^T Q M for the generalized Q.
Matrix to_original(const DenseData& d, GramianKind kind, const Matrix& X)
{
    if (kind == GramianKind::Reachability || d.M.isIdentity(0.0))
        return X;
    const Matrix left = linalg::lu_solve(Matrix(d.M.transpose()), X);
    const Matrix Q = linalg::lu_solve(Matrix(d.M.transpose()), Matrix(left.transpose())).transpose();
    return 0.5 * (Q + Q.transpose());
}

Matrix symmetrize(const Matrix& X) { return 0.5 * (X + X.transpose()); }

// e^{A t_s} W e^{A^T t_s} - e^{A t_e} W e^{A^T t_e}
Matrix window_difference(const Matrix& A, const Matrix& W, const TimeWindow& w)
{
    const Matrix Ee = linalg::expm(A * w.t_e);
    Matrix out = -(Ee * W * Ee.transpose());
    if (w.t_s == 0.0)
        out += W;
    else
    {
        const Matrix Es = linalg::expm(A * w.t_s);
        out += Es * W * Es.transpose();
    }
    return symmetrize(out);
}

void check_stability(const Matrix& A, const char* what)
{
    if (A.rows() == 0)
        return;
    const double abscissa = model::spectral_abscissa(A);
    if (abscissa >= 0.0)
        warn(std::string(what) + ": system is not asymptotically stable (spectral abscissa " +
             std::to_string(abscissa) + ")");
}

Matrix abs_eig(const Matrix& W)
{
    if (W.size() == 0)
        return W;
    const linalg::SymEig e = linalg::sym_eig(W);
    return symmetrize(e.vectors * e.values.cwiseAbs().asDiagonal() * e.vectors.transpose());
}

} // namespace

void TimeWindow::validate() const
{
    if (!(t_s >= 0.0) || !(t_e > t_s) || !std::isfinite(t_e))
        throw Error(ErrorCode::InvalidArgument, "TimeWindow: need 0 <= t_s < t_e < inf");
}

Matrix gramian_infinite_dense(const model::System& sys, GramianKind kind)
{
    const DenseData d = dense_data(sys, kind);
    check_stability(d.A, "gramian_infinite_dense");
    return to_original(d, kind, linalg::lyap_dense(d.A, d.B * d.B.transpose()));
}

Matrix gramian_timelimited_dense(const model::System& sys, const TimeWindow& w, GramianKind kind,
                                 DenseRoute route)
{
    w.validate();
    const DenseData d = dense_data(sys, kind);
    const Index n = d.A.rows();
    if (n == 0)
        return Matrix(0, 0);
    const double abscissa = model::spectral_abscissa(d.A);
    if (route == DenseRoute::Auto)
        route = abscissa < 0.0 ? DenseRoute::Difference : DenseRoute::Lyapunov;
    if (abscissa >= 0.0)
        warn("gramian_timelimited_dense: system is not asymptotically stable; time-limited Gramian "
             "still defined");

    const Matrix BBt = d.B * d.B.transpose();
    Matrix P;
    if (route == DenseRoute::Difference)
        P = window_difference(d.A, linalg::lyap_dense(d.A, BBt), w);
    else
        P = linalg::lyap_dense(d.A, window_difference(d.A, BBt, w));
    return to_original(d, kind, symmetrize(P));
}

Matrix gramian_modified_dense(const model::System& sys, const TimeWindow& w, GramianKind kind)
{
    w.validate();
    // |.| is not invariant under congruence; use the coordinates of the
    // Krylov route, F^T x with M = F F^T, whenever M is flagged SPD.
    if (const auto* g = std::get_if<model::GeneralizedSystem>(&sys); g && g->spd_mass)
    {
        const model::CholeskyTransformed ct = model::cholesky_transform(*g);
        const Matrix Pt = gramian_modified_dense(model::System(ct.system), w, kind);
        const Matrix Zt = ct.to_original(Pt);
        return ct.to_original(Matrix(Zt.transpose()));
    }
    const DenseData d = dense_data(sys, kind);
    check_stability(d.A, "gramian_modified_dense");
    const Matrix W = abs_eig(window_difference(d.A, d.B * d.B.transpose(), w));
    return to_original(d, kind, linalg::lyap_dense(d.A, W));
}

DiagonalizedSystem diagonalize(const model::StandardSystem& sys)
{
    model::validate(sys);
    if (sys.m() != 1)
        throw Error(ErrorCode::InvalidArgument, "diagonalize: single-input systems only");
    const Index n = sys.n();
    DiagonalizedSystem d;
    const linalg::EigDecomposition eig = linalg::gen_eig(sys.A, true);
    d.lambda = eig.values;
    d.X = eig.vectors;
    if (n == 0)
        return d;

    Eigen::JacobiSVD<CMatrix> sv(d.X);
    const double smin = sv.singularValues()(n - 1);
    d.condition = smin > 0.0 ? sv.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
    if (!(d.condition <= 1e8))
        throw Error(ErrorCode::NearDefective,
                    "diagonalize: eigenvector matrix too ill-conditioned (kappa > 1e8)");

    d.w = d.X.partialPivLu().solve(sys.B.cast<Complex>()).col(0);
    const double wnorm = d.w.norm();
    for (Index i = 0; i < n; ++i)
        if (std::abs(d.w(i)) <= 1e-14 * wnorm)
            throw Error(ErrorCode::NotControllable,
                        "diagonalize: input does not excite eigenmode " + std::to_string(i));
    d.XB = d.X * d.w.asDiagonal();
    return d;
}

Matrix gramian_timelimited_cauchy(const DiagonalizedSystem& d, double t_e, double t_s)
{
    const Index n = d.lambda.size();
    if (!(t_s >= 0.0) || !(t_e >= t_s))
        throw Error(ErrorCode::InvalidArgument, "gramian_timelimited_cauchy: need 0 <= t_s <= t_e");
    if (n == 0 || t_e == t_s)
        return Matrix::Zero(n, n);

    // Cauchy matrix C_ij = -1/(lambda_i + conj(lambda_j)) and its window weights
    CMatrix core(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
        {
            const Complex sum = d.lambda(i) + std::conj(d.lambda(j));
            if (std::abs(sum) == 0.0)
                throw Error(ErrorCode::SpectrumConflict, "gramian_timelimited_cauchy: lambda_i + conj(lambda_j) = 0");
            const Complex c = -1.0 / sum;
            core(i, j) = c * (std::exp(sum * t_s) - std::exp(sum * t_e));
        }
    const CMatrix P = d.XB * core * d.XB.adjoint();
    const double re = P.real().norm();
    const double im = P.imag().norm();
    if (im > 1e-10 * re)
        warn("gramian_timelimited_cauchy: discarded imaginary part of relative size " + std::to_string(im / re));
    return symmetrize(P.real());
}

Matrix psd_factor(const Matrix& S, double rel_tol)
{
    const Index n = S.rows();
    if (n == 0)
        return Matrix(0, 0);
    const linalg::SymEig e = linalg::sym_eig(symmetrize(S));
    const double top = e.values(0);
    if (!(top > 0.0))
        return Matrix(n, 0);
    Index keep = 0;
    while (keep < n && e.values(keep) > rel_tol * top)
        ++keep;
    return e.vectors.leftCols(keep) * e.values.head(keep).cwiseSqrt().asDiagonal();
}

} // namespace tlbt::gramians
