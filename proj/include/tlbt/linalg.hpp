#ifndef TLBT_LINALG_HPP
#define TLBT_LINALG_HPP

#include "tlbt/common.hpp"

namespace tlbt::linalg
{

/// Eigenvalues and (optionally) eigenvectors of a general real matrix.
struct EigDecomposition
{
    CVector values;
    CMatrix vectors; // empty unless requested
};

/// Symmetric eigendecomposition, eigenvalues sorted non-increasing.
struct SymEig
{
    Vector values;
    Matrix vectors;
};

/// Thin SVD, A = U diag(sigma) V^T with sigma non-increasing.
struct Svd
{
    Matrix U;
    Vector sigma;
    Matrix V;
};

// Solves A X = RHS by partial-pivoting LU. Throws SingularMatrix when a
// pivot falls below eps * ||A||.
Matrix lu_solve(const Matrix& A, const Matrix& rhs);
CMatrix lu_solve(const CMatrix& A, const CMatrix& rhs);

// Appends to Q the directions of V orthogonal to range(Q); columns that are
// numerically in the span (relative norm below drop_tol after two passes of
// Gram-Schmidt) are dropped.
Matrix orthonormal_extend(const Matrix& Q, const Matrix& V, double drop_tol = 1e-12);

Svd svd(const Matrix& A);

// Requires ||S - S^T|| <= 1e-12 ||S||; the symmetric part is used.
SymEig sym_eig(const Matrix& S);

EigDecomposition gen_eig(const Matrix& A, bool with_vectors = false);

// Scaling and squaring with diagonal Pade approximants (degrees 3..13).
Matrix expm(const Matrix& A);

// Bartels-Stewart solve of A X + X A^T = -W through the real Schur form of A.
Matrix lyap_dense(const Matrix& A, const Matrix& W);

double norm2(const Matrix& A);
double sym_norm2(const Matrix& S); // max |lambda| of a symmetric matrix

} // namespace tlbt::linalg

#endif
