#ifndef TLBT_MODEL_HPP
#define TLBT_MODEL_HPP

#include <memory>
#include <variant>

#include "tlbt/common.hpp"

namespace tlbt::model
{

/// x' = A x + B u, y = C x + D u.
struct StandardSystem
{
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix D; // p x m, zero when absent

    Index n() const { return A.rows(); }
    Index m() const { return B.cols(); }
    Index p() const { return C.rows(); }
};

/// M x' = A x + B u, y = C x + D u with M nonsingular.
struct GeneralizedSystem
{
    Sparse M;
    Sparse A;
    Matrix B;
    Matrix C;
    Matrix D;
    bool spd_mass = false; // M symmetric positive definite, Cholesky route allowed

    Index n() const { return A.rows(); }
    Index m() const { return B.cols(); }
    Index p() const { return C.rows(); }
};

/// Semi-explicit index-1 descriptor system
///   [M1 0; 0 0] x' = [A1 A2; A3 A4] x + [B1; B2] u,  y = [C1 C2] x.
struct DescriptorIndex1
{
    Sparse M1, A1, A2, A3, A4;
    Matrix B1, B2, C1, C2;

    Index n_f() const { return A1.rows(); }
    Index n() const { return A1.rows() + A4.rows(); }
};

/// Descriptor system with the algebraic states eliminated:
///   M1 x' = Ahat x + Bhat u,  y = Chat x + D u.
/// Ahat = A1 - A2 A4^{-1} A3 is never formed; only its action and shifted
/// solves through the sparse augmented pencil are exposed.
class EliminatedSystem
{
public:
    explicit EliminatedSystem(DescriptorIndex1 blocks);

    Index n() const;
    Index m() const { return B_hat_.cols(); }
    Index p() const { return C_hat_.rows(); }

    const Sparse& M() const;
    const Matrix& B() const { return B_hat_; }
    const Matrix& C() const { return C_hat_; }
    const Matrix& D() const { return D_; }
    const DescriptorIndex1& blocks() const;

    Matrix apply_A(const Matrix& X) const;
    Matrix apply_At(const Matrix& X) const;

    // (Ahat - s M1)^{-1} W, or the transposed pencil, via the augmented system.
    CMatrix shifted_solve(Complex s, const CMatrix& W, bool transposed = false) const;

    // Dense realization of Ahat; refused above the dense threshold.
    GeneralizedSystem to_dense() const;

private:
    struct Data;
    std::shared_ptr<const Data> data_;
    Matrix B_hat_, C_hat_, D_;
};

using System = std::variant<StandardSystem, GeneralizedSystem, EliminatedSystem>;

Index n_states(const System& sys);
Index n_inputs(const System& sys);
Index n_outputs(const System& sys);
const Matrix& input_matrix(const System& sys);
const Matrix& output_matrix(const System& sys);
const Matrix& feedthrough(const System& sys);
bool has_identity_mass(const System& sys);

void validate(const StandardSystem& sys);
void validate(const GeneralizedSystem& sys);
void validate(const DescriptorIndex1& sys);

/// Factorized view of a system: applications of A and M, solves with M and
/// with shifted pencils. Owns the mass-matrix factorization; immutable once
/// built and safe to share between threads.
class Pencil
{
public:
    explicit Pencil(System sys);

    const System& system() const { return sys_; }
    Index n() const;
    bool identity_mass() const;
    bool cholesky_available() const;
    bool symmetric() const; // A = A^T and M = M^T

    Matrix apply_A(const Matrix& X, bool transposed = false) const;
    Matrix apply_M(const Matrix& X, bool transposed = false) const;
    Matrix solve_M(const Matrix& X, bool transposed = false) const;

    // M = F F^T for symmetric positive definite M (F = P^T L).
    Matrix apply_chol_inv(const Matrix& X) const;   // F^{-1} X
    Matrix apply_chol_inv_t(const Matrix& X) const; // F^{-T} X
    Matrix apply_chol(const Matrix& X) const;       // F X
    Matrix apply_chol_t(const Matrix& X) const;     // F^T X

    // (A - s M)^{-1} W, or (A^T - s M^T)^{-1} W. Throws SingularShift.
    CMatrix shifted_solve(Complex s, const CMatrix& W, bool transposed = false) const;

private:
    struct Factors;
    System sys_;
    std::shared_ptr<const Factors> factors_;
};

/// Removes the algebraic states; throws SingularBlock if A4 is singular.
EliminatedSystem eliminate_descriptor(const DescriptorIndex1& d);

CMatrix shifted_solve(const System& sys, Complex s, const CMatrix& W);

struct CholeskyTransformed
{
    StandardSystem system; // (L^{-1} A L^{-T}, L^{-1} B, C L^{-T}, D)
    Matrix L;              // M = L L^T

    // Factor of the generalized Gramian from a factor in transformed coordinates.
    Matrix to_original(const Matrix& Z) const;
};

CholeskyTransformed cholesky_transform(const GeneralizedSystem& g);

StandardSystem similarity_transform(const StandardSystem& sys, const Matrix& T);

double spectral_abscissa(const Matrix& A);
double spectral_abscissa(const System& sys);

/// A - alpha M (or A - alpha I); for descriptor blocks only A1 moves.
StandardSystem alpha_shift(const StandardSystem& sys, double alpha);
GeneralizedSystem alpha_shift(const GeneralizedSystem& sys, double alpha);
DescriptorIndex1 alpha_shift(const DescriptorIndex1& sys, double alpha);

/// Standard realization (M^{-1} A, M^{-1} B, C, D) for dense oracle paths.
struct DenseRealization
{
    StandardSystem system;
    Matrix M; // identity for standard systems
};

DenseRealization to_dense_standard(const System& sys);

} // namespace tlbt::model

#endif
