#include "tlbt/linalg.hpp"

#include <limits>
#include <vector>

namespace tlbt::linalg
{

namespace
{

struct Block
{
    Index start;
    Index size;
};

std::vector<Block> schur_blocks(const Matrix& T)
{
    std::vector<Block> blocks;
    const Index n = T.rows();
    Index i = 0;
    while (i < n)
    {
        const Index size = (i + 1 < n && T(i + 1, i) != 0.0) ? 2 : 1;
        blocks.push_back({i, size});
        i += size;
    }
    return blocks;
}

// Solves Tii * Y + Y * Tjj^T = rhs for a (<=2)x(<=2) block pair.
Matrix solve_small_sylvester(const Matrix& Tii, const Matrix& Tjj, const Matrix& rhs,
                             double conflict_tol)
{
    const Index p = Tii.rows();
    const Index q = Tjj.rows();
    if (p == 1 && q == 1)
    {
        const double denom = Tii(0, 0) + Tjj(0, 0);
        if (std::abs(denom) <= conflict_tol)
            throw Error(ErrorCode::SpectrumConflict, "lyap_dense: eigenvalues sum to zero");
        return rhs / denom;
    }

    Matrix K = Matrix::Zero(p * q, p * q);
    for (Index c = 0; c < q; ++c)
    {
        K.block(c * p, c * p, p, p) += Tii;
        for (Index d = 0; d < q; ++d)
            K.block(c * p, d * p, p, p).diagonal().array() += Tjj(c, d);
    }
    Eigen::JacobiSVD<Matrix> check(K);
    if (check.singularValues()(p * q - 1) <= conflict_tol)
        throw Error(ErrorCode::SpectrumConflict, "lyap_dense: eigenvalues sum to zero");

    const Vector rhs_vec = Eigen::Map<const Vector>(rhs.data(), p * q);
    const Vector y = Eigen::FullPivLU<Matrix>(K).solve(rhs_vec);
    return Eigen::Map<const Matrix>(y.data(), p, q);
}

} // namespace

Matrix lyap_dense(const Matrix& A, const Matrix& W)
{
    const Index n = A.rows();
    if (A.cols() != n || W.rows() != n || W.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "lyap_dense: dimension mismatch");
    require_finite(A, "lyap_dense A");
    require_finite(W, "lyap_dense W");
    if (n == 0)
        return W;
    if ((W - W.transpose()).norm() > 1e-12 * W.norm())
        throw Error(ErrorCode::InvalidArgument, "lyap_dense: right-hand side is not symmetric");

    Eigen::RealSchur<Matrix> schur(A);
    if (schur.info() != Eigen::Success)
        throw Error(ErrorCode::NoConvergence, "lyap_dense: real Schur form failed");
    const Matrix& T = schur.matrixT();
    const Matrix& U = schur.matrixU();

    const Matrix C = -(U.transpose() * W * U);
    const double conflict_tol =
        1e2 * std::numeric_limits<double>::epsilon() * std::max(T.norm(), std::numeric_limits<double>::min());

    const auto blocks = schur_blocks(T);
    Matrix X = Matrix::Zero(n, n);

    // T X + X T^T = C, sweep column blocks right to left.
    for (auto jb = blocks.rbegin(); jb != blocks.rend(); ++jb)
    {
        const Index j0 = jb->start;
        const Index q = jb->size;
        const Index after = n - (j0 + q);

        Matrix R = C.middleCols(j0, q);
        if (after > 0)
            R -= X.rightCols(after) * T.block(j0, j0 + q, q, after).transpose();

        const Matrix Tjj = T.block(j0, j0, q, q);
        for (auto ib = blocks.rbegin(); ib != blocks.rend(); ++ib)
        {
            const Index i0 = ib->start;
            const Index p = ib->size;
            const Index below = n - (i0 + p);
            Matrix rhs = R.middleRows(i0, p);
            if (below > 0)
                rhs -= T.block(i0, i0 + p, p, below) * X.block(i0 + p, j0, below, q);
            X.block(i0, j0, p, q) =
                solve_small_sylvester(T.block(i0, i0, p, p), Tjj, rhs, conflict_tol);
        }
    }

    Matrix result = U * X * U.transpose();
    return 0.5 * (result + result.transpose());
}

} // namespace tlbt::linalg
