#ifndef TLBT_REDUCTION_HPP
#define TLBT_REDUCTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "tlbt/gramians.hpp"

namespace tlbt::reduction
{

enum class Mode
{
    BT,
    TLBT,
    MTLBT
};

std::string to_string(Mode m);
Mode parse_mode(const std::string& s); // "bt", "tlbt", "mtlbt"; InvalidArgument otherwise

enum class Method
{
    Auto,    // low-rank Krylov factors
    LowRank,
    Dense    // dense Gramians factored by eigendecomposition (n <= dense threshold)
};

Method parse_method(const std::string& s); // "auto", "lowrank", "dense"

/// Reachability and observability factors for one mode, with solver reports.
struct GramianFactors
{
    Mode mode = Mode::BT;
    std::optional<gramians::TimeWindow> window;
    gramians::LowRankGramian p, q; // dense method: Z only, dim = n
    double seconds = 0.0;          // both solves, wall clock
};

/// Both solves run concurrently.
GramianFactors gramian_factors(const model::System& sys, Mode mode,
                               const std::optional<gramians::TimeWindow>& window,
                               const gramians::SolverConfig& cfg = {}, Method method = Method::Auto);

struct ReducedModel
{
    Matrix A, B, C, D;
    Matrix T; // right projector, n x r
    Matrix S; // left projector, n x r
    Vector sigma;   // retained singular values of Z_Q^T M Z_P
    Vector hsv;     // all computed values
    bool stable = false;
    Mode mode = Mode::BT;
    std::optional<gramians::TimeWindow> window; // empty means [0, inf)
    double mu_p = 0.0, mu_q = 0.0;
    Index dim_p = 0, dim_q = 0, rank_p = 0, rank_q = 0;
    double seconds_gramians = 0.0;
    double seconds_reduce = 0.0;

    Index order() const { return A.rows(); }
    double t_mor() const { return seconds_gramians + seconds_reduce; }
    model::StandardSystem system() const { return {A, B, C, D}; }
};

enum class HsvSource
{
    Infinite,
    TimeLimited,
    Modified
};

struct HsvReport
{
    Vector values;
    HsvSource source = HsvSource::Infinite;
    std::optional<gramians::TimeWindow> window;
};

/// Fixed order r, or (when tol > 0) the smallest r with 2 * tail sum <= tol.
struct OrderSpec
{
    Index r = 0;
    double tol = 0.0;
};

/// Square-root balancing on Gramian factors in original coordinates.
/// Throws RankDeficient when r exceeds the numerical rank of Z_Q^T M Z_P.
ReducedModel square_root_reduce(const model::System& sys, const Matrix& Zp, const Matrix& Zq, Index r);

/// Square-root reduction on precomputed factors; records mode, mu and timings.
ReducedModel reduce(const model::System& sys, const GramianFactors& f, const OrderSpec& order);

/// Computes both Gramian factors for the mode and reduces.
ReducedModel reduce(const model::System& sys, Mode mode, const std::optional<gramians::TimeWindow>& window,
                    const OrderSpec& order, const gramians::SolverConfig& cfg = {},
                    Method method = Method::Auto);

/// Singular values of Z_Q^T M Z_P, non-increasing.
HsvReport hankel_sv(const model::System& sys, const Matrix& Zp, const Matrix& Zq,
                    HsvSource source = HsvSource::Infinite);
Vector hankel_sv(const Matrix& Zp, const Matrix& Zq, const Matrix& M);

double hinf_error_bound(const Vector& hsv, Index r);
Index order_for_tolerance(const Vector& hsv, double tol);

/// H(s) = C (sM - A)^{-1} B + D; transfer_eval uses s = i omega.
CMatrix transfer_at(const model::System& sys, Complex s);
CMatrix transfer_eval(const model::System& sys, double omega);
CMatrix transfer_eval(const ReducedModel& rom, double omega);

/// #{i : lambda_i > eps * lambda_1}.
Index numerical_rank(const Matrix& S, double eps);
Index numerical_rank(const gramians::LowRankGramian& g, double eps);

/// Re(lambda) < -1e-12 ||A|| for every eigenvalue.
bool is_stable(const Matrix& A);

} // namespace tlbt::reduction

#endif
