#ifndef TLBT_GRAMIANS_HPP
#define TLBT_GRAMIANS_HPP

#include <vector>

#include "tlbt/model.hpp"

namespace tlbt::gramians
{

/// Time window [t_s, t_e] with 0 <= t_s < t_e < inf.
struct TimeWindow
{
    double t_s = 0.0;
    double t_e = 1.0;

    void validate() const; // throws InvalidArgument
};

enum class GramianKind
{
    Reachability, // A P M^T + M P A^T = -B B^T (time-limited RHS analogously)
    Observability // A^T Q M + M^T Q A = -C^T C
};

enum class RhsType
{
    Infinite,
    TimeLimited,
    Modified
};

enum class ShiftRule
{
    // argmax prod|s - s_j|^m / prod|s - z_j| over the mirrored Ritz hull
    Residual,
    // argmax prod|s - z_j| / prod|s - s_j|^m, candidates near old poles excluded
    Literal
};

struct SolverConfig
{
    double tol_f = 1e-8;
    double tol_p = 1e-8;
    int cadence = 5;
    Index max_dim = 0; // 0 selects min(n, 1000)
    double trunc_tol = 1e-12;
    ShiftRule shift_rule = ShiftRule::Residual;

    void validate() const;
};

struct TraceRow
{
    Index k = 0;
    Complex shift{0.0, 0.0}; // inf for the starting block
    Index dim = 0;
    double expm_change = -1.0; // negative when not evaluated at this step
    double mu = -1.0;          // negative when not evaluated at this step
};

struct LowRankGramian
{
    Matrix Z; // n x l, in original coordinates
    double mu = 0.0;
    Index dim = 0;
    Index rank = 0;
    double seconds = 0.0;
    std::vector<TraceRow> trace;
    std::vector<Complex> shifts;
    // Converged approximations of e^{At_e}B and e^{At_s}B, in the coordinates
    // of Z; empty for the infinite Gramian.
    Matrix B_te, B_ts;
};

/// Rational Krylov state. Q, AQ live in the coordinates of the operator the
/// solver iterates on (M^{-1}A, F^{-1}AF^{-T}, or A itself).
struct KrylovWorkspace
{
    Matrix Q;      // n x d orthonormal
    Matrix AQ;     // operator applied to Q
    Matrix H;      // Q^T A Q
    Matrix B_proj; // Q^T B = [beta; 0]
    Matrix beta;   // leading block, B = q_1 beta
    std::vector<Complex> shifts; // first entry inf
    CVector ritz;
    Index k = 0;
    Index block_size = 0;
    bool symmetric = false;

    Index dim() const { return Q.cols(); }
};

/// Workspace for an explicit basis; dense helper used by tests and diagnostics.
KrylovWorkspace workspace_from_basis(const Matrix& A, const Matrix& Q, const Matrix& B);

// --- dense oracles ---------------------------------------------------------

enum class DenseRoute
{
    Auto,       // difference formula; Lyapunov form when A is not stable
    Difference, // e^{A t_s} P e^{A^T t_s} - e^{A t_e} P e^{A^T t_e}
    Lyapunov    // A P + P A^T = -(e^{A t_s}BB^Te^{A^T t_s} - e^{A t_e}BB^Te^{A^T t_e})
};

Matrix gramian_infinite_dense(const model::System& sys, GramianKind kind = GramianKind::Reachability);
Matrix gramian_timelimited_dense(const model::System& sys, const TimeWindow& w,
                                 GramianKind kind = GramianKind::Reachability,
                                 DenseRoute route = DenseRoute::Auto);
// Right-hand side replaced by its absolute-eigenvalue surrogate.
Matrix gramian_modified_dense(const model::System& sys, const TimeWindow& w,
                              GramianKind kind = GramianKind::Reachability);

/// Single-input system in eigencoordinates: A = X diag(lambda) X^{-1}, w = X^{-1} B.
struct DiagonalizedSystem
{
    CVector lambda;
    CMatrix X;
    CVector w;
    CMatrix XB; // X diag(w)
    double condition = 1.0; // kappa_2(X)
};

// Throws InvalidArgument for m != 1, NotControllable if some w_i vanishes,
// NearDefective if kappa(X) > 1e8.
DiagonalizedSystem diagonalize(const model::StandardSystem& sys);

Matrix gramian_timelimited_cauchy(const DiagonalizedSystem& d, double t_e, double t_s = 0.0);

// --- rational Krylov engine ------------------------------------------------

/// Next pole from Ritz values and used shifts (each counted `multiplicity`
/// times). Complex results stand for a conjugate pair.
Complex adaptive_shift(const CVector& ritz, const std::vector<Complex>& shifts, Index multiplicity,
                       bool symmetric, ShiftRule rule = ShiftRule::Residual);
Complex adaptive_shift(const KrylovWorkspace& ws, ShiftRule rule = ShiftRule::Residual);

struct ExpmAction
{
    Matrix coeff;  // e^{H t} B_proj
    Matrix lifted; // Q coeff
};

ExpmAction expm_action_approx(const KrylovWorkspace& ws, double t);

/// Factor of |B_ts B_ts^T - B_te B_te^T| in coefficient space (absolute values
/// of the eigenvalues). Pass an empty B_ts to use B_proj (t_s = 0).
Matrix modified_rhs(const KrylovWorkspace& ws, const Matrix& Bhat_te, const Matrix& Bhat_ts = Matrix());

/// Spectral norm of A QYQ^T + QYQ^T A^T + Q F Q^T, scaled by ||F||.
double residual_norm(const KrylovWorkspace& ws, const Matrix& Y, const Matrix& F);

LowRankGramian solve_lowrank(const model::System& sys, RhsType rhs, const TimeWindow& w,
                             GramianKind kind, const SolverConfig& cfg = {});
LowRankGramian solve_timelimited_lowrank(const model::System& sys, const TimeWindow& w,
                                         GramianKind kind = GramianKind::Reachability,
                                         const SolverConfig& cfg = {});
LowRankGramian solve_infinite_lowrank(const model::System& sys,
                                      GramianKind kind = GramianKind::Reachability,
                                      const SolverConfig& cfg = {});
LowRankGramian solve_modified_lowrank(const model::System& sys, const TimeWindow& w,
                                      GramianKind kind = GramianKind::Reachability,
                                      const SolverConfig& cfg = {});

/// Symmetric PSD matrix to a factor Z with Z Z^T ~ S (eigenvalues below
/// rel_tol * lambda_1 dropped).
Matrix psd_factor(const Matrix& S, double rel_tol = 1e-14);

} // namespace tlbt::gramians

#endif
