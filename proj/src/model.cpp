#include "tlbt/model.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "tlbt/linalg.hpp"

namespace tlbt::model
{

namespace
{

using RealLU = Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>>;
using ComplexLU = Eigen::SparseLU<CSparse, Eigen::COLAMDOrdering<int>>;

bool is_identity(const Sparse& M)
{
    if (M.rows() != M.cols())
        return false;
    Index nnz_off = 0;
    for (Index k = 0; k < M.outerSize(); ++k)
        for (Sparse::InnerIterator it(M, k); it; ++it)
        {
            if (it.row() == it.col())
            {
                if (it.value() != 1.0)
                    return false;
            }
            else if (it.value() != 0.0)
                ++nnz_off;
        }
    if (nnz_off != 0)
        return false;
    // every diagonal entry must be present
    Index diag = 0;
    for (Index k = 0; k < M.outerSize(); ++k)
        for (Sparse::InnerIterator it(M, k); it; ++it)
            diag += (it.row() == it.col() && it.value() == 1.0);
    return diag == M.rows();
}

double sparse_norm(const Sparse& S) { return S.norm(); }

// Shared by the generalized and the descriptor pencils: factor K, solve,
// and check the residual so near-singular shifts do not pass silently.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
checked_sparse_solve(const Eigen::SparseMatrix<Scalar>& K,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& rhs,
                     ErrorCode failure, const char* what)
{
    Eigen::SparseLU<Eigen::SparseMatrix<Scalar>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success)
        throw Error(failure, std::string(what) + ": factorization failed");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> X = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !X.allFinite())
        throw Error(failure, std::string(what) + ": solve failed");
    const double residual = (K * X - rhs).norm();
    const double scale = K.norm() * X.norm() + rhs.norm();
    if (residual > 1e-8 * scale)
        throw Error(failure, std::string(what) + ": pencil is numerically singular");
    return X;
}

template <typename Scalar>
Eigen::SparseMatrix<Scalar> stack_blocks(const Eigen::SparseMatrix<Scalar>& K11,
                                         const Eigen::SparseMatrix<Scalar>& K12,
                                         const Eigen::SparseMatrix<Scalar>& K21,
                                         const Eigen::SparseMatrix<Scalar>& K22)
{
    const Index n1 = K11.rows();
    const Index n2 = K22.rows();
    std::vector<Eigen::Triplet<Scalar>> triplets;
    triplets.reserve(K11.nonZeros() + K12.nonZeros() + K21.nonZeros() + K22.nonZeros());
    auto add = [&](const Eigen::SparseMatrix<Scalar>& B, Index r0, Index c0) {
        for (Index k = 0; k < B.outerSize(); ++k)
            for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(B, k); it; ++it)
                triplets.emplace_back(it.row() + r0, it.col() + c0, it.value());
    };
    add(K11, 0, 0);
    add(K12, 0, n1);
    add(K21, n1, 0);
    add(K22, n1, n1);
    Eigen::SparseMatrix<Scalar> K(n1 + n2, n1 + n2);
    K.setFromTriplets(triplets.begin(), triplets.end());
    return K;
}

} // namespace

// ---------------------------------------------------------------------------
// EliminatedSystem

struct EliminatedSystem::Data
{
    DescriptorIndex1 blocks;
    mutable RealLU a4; // transpose() is non-const in Eigen
    bool has_algebraic = false;
};

EliminatedSystem::EliminatedSystem(DescriptorIndex1 blocks)
{
    validate(blocks);
    auto data = std::make_shared<Data>();
    data->blocks = std::move(blocks);
    const DescriptorIndex1& d = data->blocks;
    data->has_algebraic = d.A4.rows() > 0;

    B_hat_ = d.B1;
    C_hat_ = d.C1;
    D_ = Matrix::Zero(d.C1.rows(), d.B1.cols());

    if (data->has_algebraic)
    {
        Sparse A4 = d.A4;
        A4.makeCompressed();
        data->a4.compute(A4);
        if (data->a4.info() != Eigen::Success)
            throw Error(ErrorCode::SingularBlock, "eliminate_descriptor: A4 factorization failed");
        const Vector probe = Vector::Ones(A4.rows());
        const Vector x = data->a4.solve(probe);
        if (!x.allFinite() || (A4 * x - probe).norm() > 1e-8 * (A4.norm() * x.norm() + probe.norm()))
            throw Error(ErrorCode::SingularBlock, "eliminate_descriptor: A4 is numerically singular");

        const Matrix A4inv_B2 = data->a4.solve(d.B2);
        B_hat_ -= d.A2 * A4inv_B2;
        const Matrix A4invT_C2T = data->a4.transpose().solve(Matrix(d.C2.transpose()));
        C_hat_ -= (d.A3.transpose() * A4invT_C2T).transpose();
        D_ = -d.C2 * A4inv_B2;
    }
    data_ = std::move(data);
}

Index EliminatedSystem::n() const { return data_->blocks.n_f(); }
const Sparse& EliminatedSystem::M() const { return data_->blocks.M1; }
const DescriptorIndex1& EliminatedSystem::blocks() const { return data_->blocks; }

Matrix EliminatedSystem::apply_A(const Matrix& X) const
{
    const DescriptorIndex1& d = data_->blocks;
    Matrix Y = d.A1 * X;
    if (data_->has_algebraic)
    {
        const Matrix Z = data_->a4.solve(Matrix(d.A3 * X));
        Y -= d.A2 * Z;
    }
    return Y;
}

Matrix EliminatedSystem::apply_At(const Matrix& X) const
{
    const DescriptorIndex1& d = data_->blocks;
    Matrix Y = d.A1.transpose() * X;
    if (data_->has_algebraic)
    {
        const Matrix Z = data_->a4.transpose().solve(Matrix(d.A2.transpose() * X));
        Y -= d.A3.transpose() * Z;
    }
    return Y;
}

CMatrix EliminatedSystem::shifted_solve(Complex s, const CMatrix& W, bool transposed) const
{
    const DescriptorIndex1& d = data_->blocks;
    const Index nf = d.n_f();
    const Index na = d.A4.rows();
    if (W.rows() != nf)
        throw Error(ErrorCode::InvalidArgument, "shifted_solve: right-hand side has wrong row count");

    const bool real_shift = s.imag() == 0.0;
    auto build = [&](auto scalar_tag) {
        using Scalar = decltype(scalar_tag);
        using SpM = Eigen::SparseMatrix<Scalar>;
        SpM K11 = d.A1.cast<Scalar>();
        SpM M1 = d.M1.cast<Scalar>();
        Scalar shift;
        if constexpr (std::is_same_v<Scalar, double>)
            shift = s.real();
        else
            shift = s;
        K11 = K11 - shift * M1;
        SpM A2 = d.A2.cast<Scalar>(), A3 = d.A3.cast<Scalar>(), A4 = d.A4.cast<Scalar>();
        if (transposed)
            return stack_blocks<Scalar>(K11.transpose(), A3.transpose(), A2.transpose(), A4.transpose());
        return stack_blocks<Scalar>(K11, A2, A3, A4);
    };

    if (real_shift && W.imag().isZero(0.0))
    {
        const Sparse K = build(double{});
        Matrix rhs = Matrix::Zero(nf + na, W.cols());
        rhs.topRows(nf) = W.real();
        const Matrix V = checked_sparse_solve<double>(K, rhs, ErrorCode::SingularShift, "shifted_solve");
        return V.topRows(nf).cast<Complex>();
    }
    const CSparse K = build(Complex{});
    CMatrix rhs = CMatrix::Zero(nf + na, W.cols());
    rhs.topRows(nf) = W;
    const CMatrix V = checked_sparse_solve<Complex>(K, rhs, ErrorCode::SingularShift, "shifted_solve");
    return V.topRows(nf);
}

GeneralizedSystem EliminatedSystem::to_dense() const
{
    const DescriptorIndex1& d = data_->blocks;
    if (d.n_f() > dense_threshold())
        throw Error(ErrorCode::InvalidArgument,
                    "EliminatedSystem::to_dense: n_f exceeds the dense threshold");
    Matrix A_hat = Matrix(d.A1);
    if (data_->has_algebraic)
        A_hat -= d.A2 * Matrix(data_->a4.solve(Matrix(d.A3)));
    GeneralizedSystem g;
    g.M = d.M1;
    g.A = A_hat.sparseView(0.0);
    g.B = B_hat_;
    g.C = C_hat_;
    g.D = D_;
    return g;
}

EliminatedSystem eliminate_descriptor(const DescriptorIndex1& d) { return EliminatedSystem(d); }

// ---------------------------------------------------------------------------
// System helpers

Index n_states(const System& sys)
{
    return std::visit([](const auto& s) { return s.n(); }, sys);
}

Index n_inputs(const System& sys)
{
    return std::visit([](const auto& s) { return s.m(); }, sys);
}

Index n_outputs(const System& sys)
{
    return std::visit([](const auto& s) { return s.p(); }, sys);
}

const Matrix& input_matrix(const System& sys)
{
    return std::visit(
        [](const auto& s) -> const Matrix& {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, EliminatedSystem>)
                return s.B();
            else
                return s.B;
        },
        sys);
}

const Matrix& output_matrix(const System& sys)
{
    return std::visit(
        [](const auto& s) -> const Matrix& {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, EliminatedSystem>)
                return s.C();
            else
                return s.C;
        },
        sys);
}

const Matrix& feedthrough(const System& sys)
{
    return std::visit(
        [](const auto& s) -> const Matrix& {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, EliminatedSystem>)
                return s.D();
            else
                return s.D;
        },
        sys);
}

bool has_identity_mass(const System& sys)
{
    if (std::holds_alternative<StandardSystem>(sys))
        return true;
    if (const auto* g = std::get_if<GeneralizedSystem>(&sys))
        return is_identity(g->M);
    return is_identity(std::get<EliminatedSystem>(sys).M());
}

void validate(const StandardSystem& sys)
{
    const Index n = sys.A.rows();
    if (sys.A.cols() != n || sys.B.rows() != n || sys.C.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "StandardSystem: inconsistent dimensions");
    if (sys.D.rows() != sys.C.rows() || sys.D.cols() != sys.B.cols())
        throw Error(ErrorCode::InvalidArgument, "StandardSystem: D must be p x m");
    require_finite(sys.A, "A");
    require_finite(sys.B, "B");
    require_finite(sys.C, "C");
    require_finite(sys.D, "D");
}

void validate(const GeneralizedSystem& sys)
{
    const Index n = sys.A.rows();
    if (sys.A.cols() != n || sys.M.rows() != n || sys.M.cols() != n || sys.B.rows() != n ||
        sys.C.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "GeneralizedSystem: inconsistent dimensions");
    if (sys.D.rows() != sys.C.rows() || sys.D.cols() != sys.B.cols())
        throw Error(ErrorCode::InvalidArgument, "GeneralizedSystem: D must be p x m");
    require_finite(sys.B, "B");
    require_finite(sys.C, "C");
}

void validate(const DescriptorIndex1& d)
{
    const Index nf = d.A1.rows();
    const Index na = d.A4.rows();
    const bool ok = d.A1.cols() == nf && d.M1.rows() == nf && d.M1.cols() == nf &&
                    d.A2.rows() == nf && d.A2.cols() == na && d.A3.rows() == na &&
                    d.A3.cols() == nf && d.A4.cols() == na && d.B1.rows() == nf &&
                    d.B2.rows() == na && d.B1.cols() == d.B2.cols() && d.C1.cols() == nf &&
                    d.C2.cols() == na && d.C1.rows() == d.C2.rows();
    if (!ok)
        throw Error(ErrorCode::InvalidArgument, "DescriptorIndex1: inconsistent block dimensions");
}

// ---------------------------------------------------------------------------
// Pencil

struct Pencil::Factors
{
    bool identity_mass = true;
    bool symmetric = false;
    std::shared_ptr<RealLU> mass_lu;
    bool has_chol = false;
    Sparse chol_L;                                            // lower factor of P M P^T
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic> chol_P; // P
};

Pencil::Pencil(System sys) : sys_(std::move(sys))
{
    auto f = std::make_shared<Factors>();
    if (const auto* s = std::get_if<StandardSystem>(&sys_))
    {
        validate(*s);
        f->symmetric = (s->A - s->A.transpose()).norm() <= 1e-14 * s->A.norm();
    }
    else
    {
        const Sparse& M = std::holds_alternative<GeneralizedSystem>(sys_)
                              ? std::get<GeneralizedSystem>(sys_).M
                              : std::get<EliminatedSystem>(sys_).M();
        f->identity_mass = is_identity(M);
        if (!f->identity_mass)
        {
            Sparse Mc = M;
            Mc.makeCompressed();
            f->mass_lu = std::make_shared<RealLU>();
            f->mass_lu->compute(Mc);
            if (f->mass_lu->info() != Eigen::Success)
                throw Error(ErrorCode::SingularMatrix, "Pencil: mass matrix is singular");
        }
        if (const auto* g = std::get_if<GeneralizedSystem>(&sys_))
        {
            validate(*g);
            const Sparse At = g->A.transpose();
            const Sparse Mt = g->M.transpose();
            f->symmetric = sparse_norm(g->A - At) <= 1e-14 * sparse_norm(g->A) &&
                           sparse_norm(g->M - Mt) <= 1e-14 * sparse_norm(g->M);
            if (g->spd_mass && !f->identity_mass)
            {
                Eigen::SimplicialLLT<Sparse, Eigen::Lower, Eigen::AMDOrdering<int>> llt(g->M);
                if (llt.info() != Eigen::Success)
                    throw Error(ErrorCode::NotSPD, "Pencil: Cholesky of M failed");
                f->chol_L = llt.matrixL();
                f->chol_P = llt.permutationP();
                f->has_chol = true;
            }
        }
    }
    factors_ = std::move(f);
}

Index Pencil::n() const { return n_states(sys_); }
bool Pencil::identity_mass() const { return factors_->identity_mass; }
bool Pencil::cholesky_available() const { return factors_->identity_mass || factors_->has_chol; }
bool Pencil::symmetric() const { return factors_->symmetric; }

Matrix Pencil::apply_A(const Matrix& X, bool transposed) const
{
    return std::visit(
        [&](const auto& s) -> Matrix {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EliminatedSystem>)
                return transposed ? s.apply_At(X) : s.apply_A(X);
            else if constexpr (std::is_same_v<T, StandardSystem>)
                return transposed ? Matrix(s.A.transpose() * X) : Matrix(s.A * X);
            else
                return transposed ? Matrix(s.A.transpose() * X) : Matrix(s.A * X);
        },
        sys_);
}

Matrix Pencil::apply_M(const Matrix& X, bool transposed) const
{
    if (factors_->identity_mass)
        return X;
    const Sparse& M = std::holds_alternative<GeneralizedSystem>(sys_)
                          ? std::get<GeneralizedSystem>(sys_).M
                          : std::get<EliminatedSystem>(sys_).M();
    return transposed ? Matrix(M.transpose() * X) : Matrix(M * X);
}

Matrix Pencil::solve_M(const Matrix& X, bool transposed) const
{
    if (factors_->identity_mass)
        return X;
    return transposed ? Matrix(factors_->mass_lu->transpose().solve(X))
                      : Matrix(factors_->mass_lu->solve(X));
}

Matrix Pencil::apply_chol_inv(const Matrix& X) const
{
    if (factors_->identity_mass)
        return X;
    if (!factors_->has_chol)
        throw Error(ErrorCode::NotSPD, "Pencil: no Cholesky factor available");
    Matrix Y = factors_->chol_P * X;
    factors_->chol_L.triangularView<Eigen::Lower>().solveInPlace(Y);
    return Y;
}

Matrix Pencil::apply_chol_inv_t(const Matrix& X) const
{
    if (factors_->identity_mass)
        return X;
    if (!factors_->has_chol)
        throw Error(ErrorCode::NotSPD, "Pencil: no Cholesky factor available");
    Matrix Y = X;
    factors_->chol_L.transpose().triangularView<Eigen::Upper>().solveInPlace(Y);
    return factors_->chol_P.transpose() * Y;
}

Matrix Pencil::apply_chol(const Matrix& X) const
{
    if (factors_->identity_mass)
        return X;
    if (!factors_->has_chol)
        throw Error(ErrorCode::NotSPD, "Pencil: no Cholesky factor available");
    const Matrix Y = factors_->chol_L * X;
    return factors_->chol_P.transpose() * Y;
}

Matrix Pencil::apply_chol_t(const Matrix& X) const
{
    if (factors_->identity_mass)
        return X;
    if (!factors_->has_chol)
        throw Error(ErrorCode::NotSPD, "Pencil: no Cholesky factor available");
    const Matrix Y = factors_->chol_P * X;
    return factors_->chol_L.transpose() * Y;
}

CMatrix Pencil::shifted_solve(Complex s, const CMatrix& W, bool transposed) const
{
    if (W.rows() != n())
        throw Error(ErrorCode::InvalidArgument, "shifted_solve: right-hand side has wrong row count");

    if (const auto* e = std::get_if<EliminatedSystem>(&sys_))
        return e->shifted_solve(s, W, transposed);

    const bool real_shift = s.imag() == 0.0 && W.imag().isZero(0.0);

    if (const auto* st = std::get_if<StandardSystem>(&sys_))
    {
        const Index n = st->n();
        try
        {
            if (real_shift)
            {
                Matrix K = transposed ? Matrix(st->A.transpose()) : st->A;
                K.diagonal().array() -= s.real();
                return linalg::lu_solve(K, Matrix(W.real())).cast<Complex>();
            }
            CMatrix K = transposed ? CMatrix(st->A.transpose().cast<Complex>()) : CMatrix(st->A.cast<Complex>());
            K.diagonal().array() -= s;
            (void)n;
            return linalg::lu_solve(K, W);
        }
        catch (const Error& err)
        {
            if (err.code() == ErrorCode::SingularMatrix)
                throw Error(ErrorCode::SingularShift, "shifted_solve: shift collides with the spectrum");
            throw;
        }
    }

    const auto& g = std::get<GeneralizedSystem>(sys_);
    const Sparse A = transposed ? Sparse(g.A.transpose()) : g.A;
    const Sparse M = transposed ? Sparse(g.M.transpose()) : g.M;
    if (g.n() < kSparseSolveCutoff)
    {
        try
        {
            if (real_shift)
                return linalg::lu_solve(Matrix(A) - s.real() * Matrix(M), Matrix(W.real())).cast<Complex>();
            const CMatrix K = Matrix(A).cast<Complex>() - s * Matrix(M).cast<Complex>();
            return linalg::lu_solve(K, W);
        }
        catch (const Error& err)
        {
            if (err.code() == ErrorCode::SingularMatrix)
                throw Error(ErrorCode::SingularShift, "shifted_solve: shift collides with the spectrum");
            throw;
        }
    }
    if (real_shift)
    {
        Sparse K = A - s.real() * M;
        K.makeCompressed();
        return checked_sparse_solve<double>(K, Matrix(W.real()), ErrorCode::SingularShift, "shifted_solve")
            .cast<Complex>();
    }
    CSparse K = A.cast<Complex>() - s * M.cast<Complex>();
    K.makeCompressed();
    return checked_sparse_solve<Complex>(K, W, ErrorCode::SingularShift, "shifted_solve");
}

CMatrix shifted_solve(const System& sys, Complex s, const CMatrix& W)
{
    return Pencil(sys).shifted_solve(s, W);
}

// ---------------------------------------------------------------------------
// Transformations

Matrix CholeskyTransformed::to_original(const Matrix& Z) const
{
    return L.transpose().triangularView<Eigen::Upper>().solve(Z);
}

CholeskyTransformed cholesky_transform(const GeneralizedSystem& g)
{
    validate(g);
    const Matrix M = Matrix(g.M);
    if ((M - M.transpose()).norm() > 1e-14 * M.norm())
        throw Error(ErrorCode::NotSPD, "cholesky_transform: M is not symmetric");
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::NotSPD, "cholesky_transform: M is not positive definite");

    CholeskyTransformed out;
    out.L = llt.matrixL();
    const auto L = out.L.triangularView<Eigen::Lower>();
    const Matrix LinvA = L.solve(Matrix(g.A));
    out.system.A = L.solve(Matrix(LinvA.transpose())).transpose();
    out.system.B = L.solve(g.B);
    out.system.C = L.solve(Matrix(g.C.transpose())).transpose();
    out.system.D = g.D;
    return out;
}

StandardSystem similarity_transform(const StandardSystem& sys, const Matrix& T)
{
    validate(sys);
    if (T.rows() != sys.n() || T.cols() != sys.n())
        throw Error(ErrorCode::InvalidArgument, "similarity_transform: T has wrong size");
    StandardSystem out;
    try
    {
        out.A = linalg::lu_solve(T, Matrix(sys.A * T));
        out.B = linalg::lu_solve(T, sys.B);
    }
    catch (const Error& e)
    {
        if (e.code() == ErrorCode::SingularMatrix)
            throw Error(ErrorCode::SingularTransform, "similarity_transform: T is singular");
        throw;
    }
    out.C = sys.C * T;
    out.D = sys.D;
    return out;
}

double spectral_abscissa(const Matrix& A)
{
    const auto eig = linalg::gen_eig(A);
    if (eig.values.size() == 0)
        return -std::numeric_limits<double>::infinity();
    return eig.values.real().maxCoeff();
}

double spectral_abscissa(const System& sys)
{
    return spectral_abscissa(to_dense_standard(sys).system.A);
}

StandardSystem alpha_shift(const StandardSystem& sys, double alpha)
{
    StandardSystem out = sys;
    out.A.diagonal().array() -= alpha;
    return out;
}

GeneralizedSystem alpha_shift(const GeneralizedSystem& sys, double alpha)
{
    GeneralizedSystem out = sys;
    if (alpha != 0.0)
        out.A = sys.A - alpha * sys.M;
    return out;
}

DescriptorIndex1 alpha_shift(const DescriptorIndex1& sys, double alpha)
{
    DescriptorIndex1 out = sys;
    if (alpha != 0.0)
        out.A1 = sys.A1 - alpha * sys.M1;
    return out;
}

DenseRealization to_dense_standard(const System& sys)
{
    const Index n = n_states(sys);
    DenseRealization out;
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        out.system = *s;
        out.M = Matrix::Identity(n, n);
        return out;
    }
    if (n > dense_threshold())
        throw Error(ErrorCode::InvalidArgument, "to_dense_standard: system exceeds the dense threshold");

    const GeneralizedSystem g = std::holds_alternative<GeneralizedSystem>(sys)
                                    ? std::get<GeneralizedSystem>(sys)
                                    : std::get<EliminatedSystem>(sys).to_dense();
    out.M = Matrix(g.M);
    out.system.A = linalg::lu_solve(out.M, Matrix(g.A));
    out.system.B = linalg::lu_solve(out.M, g.B);
    out.system.C = g.C;
    out.system.D = g.D;
    return out;
}

} // namespace tlbt::model
