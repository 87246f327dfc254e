#include "tlbt/linalg.hpp"

#include <algorithm>
#include <limits>

namespace tlbt::linalg
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <typename Mat>
Mat lu_solve_impl(const Mat& A, const Mat& rhs)
{
    if (A.rows() != A.cols())
        throw Error(ErrorCode::InvalidArgument, "lu_solve: matrix is not square");
    if (rhs.rows() != A.rows())
        throw Error(ErrorCode::InvalidArgument, "lu_solve: right-hand side has wrong row count");
    if (A.rows() == 0)
        return rhs;

    Eigen::PartialPivLU<Mat> lu(A);
    const double scale = A.cwiseAbs().rowwise().sum().maxCoeff();
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot > kEps * scale))
        throw Error(ErrorCode::SingularMatrix, "lu_solve: pivot below eps*||A||");
    return lu.solve(rhs);
}

} // namespace

Matrix lu_solve(const Matrix& A, const Matrix& rhs) { return lu_solve_impl(A, rhs); }

CMatrix lu_solve(const CMatrix& A, const CMatrix& rhs) { return lu_solve_impl(A, rhs); }

Matrix orthonormal_extend(const Matrix& Q, const Matrix& V, double drop_tol)
{
    if (Q.cols() > 0 && V.rows() != Q.rows())
        throw Error(ErrorCode::InvalidArgument, "orthonormal_extend: row mismatch");

    const Index n = V.rows();
    Matrix out(n, Q.cols() + V.cols());
    out.leftCols(Q.cols()) = Q;
    Index filled = Q.cols();

    for (Index j = 0; j < V.cols(); ++j)
    {
        Vector w = V.col(j);
        const double original = w.norm();
        if (original == 0.0)
            continue;
        for (int pass = 0; pass < 2; ++pass)
        {
            if (filled == 0)
                break;
            const auto basis = out.leftCols(filled);
            w -= basis * (basis.transpose() * w);
        }
        const double remaining = w.norm();
        if (remaining <= drop_tol * original)
            continue;
        out.col(filled++) = w / remaining;
    }
    out.conservativeResize(n, filled);
    return out;
}

Svd svd(const Matrix& A)
{
    Svd result;
    if (A.size() == 0)
    {
        const Index k = std::min(A.rows(), A.cols());
        result.U = Matrix::Zero(A.rows(), k);
        result.V = Matrix::Zero(A.cols(), k);
        result.sigma = Vector::Zero(k);
        return result;
    }
    Eigen::JacobiSVD<Matrix> solver(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::NoConvergence, "svd did not converge");
    result.U = solver.matrixU();
    result.sigma = solver.singularValues();
    result.V = solver.matrixV();
    return result;
}

SymEig sym_eig(const Matrix& S)
{
    if (S.rows() != S.cols())
        throw Error(ErrorCode::InvalidArgument, "sym_eig: matrix is not square");
    SymEig result;
    if (S.rows() == 0)
        return result;

    const double scale = S.norm();
    if ((S - S.transpose()).norm() > 1e-12 * scale)
        throw Error(ErrorCode::InvalidArgument, "sym_eig: matrix is not symmetric");

    const Matrix sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::NoConvergence, "sym_eig did not converge");

    // Eigen returns ascending order.
    result.values = solver.eigenvalues().reverse();
    result.vectors = solver.eigenvectors().rowwise().reverse();
    return result;
}

EigDecomposition gen_eig(const Matrix& A, bool with_vectors)
{
    if (A.rows() != A.cols())
        throw Error(ErrorCode::InvalidArgument, "gen_eig: matrix is not square");
    EigDecomposition result;
    if (A.rows() == 0)
        return result;

    Eigen::EigenSolver<Matrix> solver(A, with_vectors);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::NoConvergence, "gen_eig did not converge");
    result.values = solver.eigenvalues();
    if (with_vectors)
        result.vectors = solver.eigenvectors();
    return result;
}

double norm2(const Matrix& A)
{
    if (A.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix> solver(A);
    return solver.singularValues()(0);
}

double sym_norm2(const Matrix& S)
{
    if (S.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace tlbt::linalg
