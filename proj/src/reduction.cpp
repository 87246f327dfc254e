#include "tlbt/reduction.hpp"

#include <chrono>
#include <cmath>
#include <future>

#include "tlbt/linalg.hpp"

namespace tlbt::reduction
{

namespace
{

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

gramians::LowRankGramian factor_for(const model::System& sys, Mode mode,
                                    const std::optional<gramians::TimeWindow>& w, gramians::GramianKind kind,
                                    const gramians::SolverConfig& cfg, Method method)
{
    if (method == Method::Dense)
    {
        const auto t0 = Clock::now();
        Matrix G;
        switch (mode)
        {
        case Mode::BT: G = gramians::gramian_infinite_dense(sys, kind); break;
        case Mode::TLBT: G = gramians::gramian_timelimited_dense(sys, *w, kind); break;
        case Mode::MTLBT: G = gramians::gramian_modified_dense(sys, *w, kind); break;
        }
        gramians::LowRankGramian out;
        out.Z = gramians::psd_factor(G, 0.0);
        out.dim = G.rows();
        out.rank = out.Z.cols();
        out.seconds = elapsed(t0);
        return out;
    }
    switch (mode)
    {
    case Mode::BT: return gramians::solve_infinite_lowrank(sys, kind, cfg);
    case Mode::TLBT: return gramians::solve_timelimited_lowrank(sys, *w, kind, cfg);
    case Mode::MTLBT: return gramians::solve_modified_lowrank(sys, *w, kind, cfg);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown mode");
}

} // namespace

std::string to_string(Mode m)
{
    switch (m)
    {
    case Mode::BT: return "bt";
    case Mode::TLBT: return "tlbt";
    case Mode::MTLBT: return "mtlbt";
    }
    return "?";
}

Method parse_method(const std::string& s)
{
    if (s == "auto")
        return Method::Auto;
    if (s == "lowrank")
        return Method::LowRank;
    if (s == "dense")
        return Method::Dense;
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + s + "' (expected auto, lowrank or dense)");
}

Mode parse_mode(const std::string& s)
{
    if (s == "bt")
        return Mode::BT;
    if (s == "tlbt")
        return Mode::TLBT;
    if (s == "mtlbt")
        return Mode::MTLBT;
    throw Error(ErrorCode::InvalidArgument, "unknown mode '" + s + "' (expected bt, tlbt or mtlbt)");
}

bool is_stable(const Matrix& A)
{
    if (A.rows() == 0)
        return true;
    const CVector ev = linalg::gen_eig(A).values;
    const double threshold = -1e-12 * linalg::norm2(A);
    for (Index i = 0; i < ev.size(); ++i)
        if (!(ev(i).real() < threshold))
            return false;
    return true;
}

Vector hankel_sv(const Matrix& Zp, const Matrix& Zq, const Matrix& M)
{
    if (Zp.rows() != Zq.rows() || (M.size() != 0 && (M.rows() != Zp.rows() || M.cols() != Zp.rows())))
        throw Error(ErrorCode::InvalidArgument, "hankel_sv: factors are not conformable");
    const Matrix K = M.size() == 0 ? Matrix(Zq.transpose() * Zp) : Matrix(Zq.transpose() * M * Zp);
    if (K.size() == 0)
        return Vector::Zero(std::min(K.rows(), K.cols()));
    return linalg::svd(K).sigma;
}

HsvReport hankel_sv(const model::System& sys, const Matrix& Zp, const Matrix& Zq, HsvSource source)
{
    if (Zp.rows() != model::n_states(sys) || Zq.rows() != model::n_states(sys))
        throw Error(ErrorCode::InvalidArgument, "hankel_sv: factor row count differs from the state dimension");
    const model::Pencil pencil(sys);
    HsvReport r;
    r.source = source;
    const Matrix K = Zq.transpose() * pencil.apply_M(Zp);
    r.values = K.size() == 0 ? Vector::Zero(std::min(K.rows(), K.cols())) : linalg::svd(K).sigma;
    return r;
}

double hinf_error_bound(const Vector& hsv, Index r)
{
    if (r < 0)
        throw Error(ErrorCode::InvalidArgument, "hinf_error_bound: r must be non-negative");
    if (r >= hsv.size())
        return 0.0;
    return 2.0 * hsv.tail(hsv.size() - r).sum();
}

Index order_for_tolerance(const Vector& hsv, double tol)
{
    for (Index r = 0; r <= hsv.size(); ++r)
        if (hinf_error_bound(hsv, r) <= tol)
            return r;
    return hsv.size();
}

ReducedModel square_root_reduce(const model::System& sys, const Matrix& Zp, const Matrix& Zq, Index r)
{
    const auto t0 = Clock::now();
    const Index n = model::n_states(sys);
    if (Zp.rows() != n || Zq.rows() != n)
        throw Error(ErrorCode::InvalidArgument, "square_root_reduce: factor row count differs from n");
    if (r < 0)
        throw Error(ErrorCode::InvalidArgument, "square_root_reduce: negative order");

    const model::Pencil pencil(sys);
    const Matrix K = Zq.transpose() * pencil.apply_M(Zp);
    const linalg::Svd sv = K.size() ? linalg::svd(K) : linalg::Svd{Matrix(K.rows(), 0), Vector(), Matrix(K.cols(), 0)};
    const Index q = sv.sigma.size();
    if (r > q)
        throw Error(ErrorCode::RankDeficient, "square_root_reduce: order " + std::to_string(r) +
                                                  " exceeds the factor rank " + std::to_string(q));
    if (r > 0 && !(sv.sigma(r - 1) > 1e-14 * sv.sigma(0)))
        throw Error(ErrorCode::RankDeficient,
                    "square_root_reduce: sigma_r is numerically zero for r = " + std::to_string(r));
    if (r > 0 && r < q && std::abs(sv.sigma(r - 1) - sv.sigma(r)) <= 1e-12 * sv.sigma(0))
        warn("square_root_reduce: sigma_r equals sigma_{r+1}; keeping the first r in SVD order");

    ReducedModel out;
    out.hsv = sv.sigma;
    out.sigma = sv.sigma.head(r);
    const Vector scale = out.sigma.cwiseSqrt().cwiseInverse();
    out.T = Zp * (sv.V.leftCols(r) * scale.asDiagonal());
    out.S = Zq * (sv.U.leftCols(r) * scale.asDiagonal());
    out.A = out.S.transpose() * pencil.apply_A(out.T);
    out.B = out.S.transpose() * model::input_matrix(sys);
    out.C = model::output_matrix(sys) * out.T;
    out.D = model::feedthrough(sys);
    out.stable = is_stable(out.A);
    out.seconds_reduce = elapsed(t0);
    return out;
}

GramianFactors gramian_factors(const model::System& sys, Mode mode,
                               const std::optional<gramians::TimeWindow>& window,
                               const gramians::SolverConfig& cfg, Method method)
{
    if (mode != Mode::BT)
    {
        if (!window)
            throw Error(ErrorCode::InvalidArgument, "reduce: time-limited modes need a time window");
        window->validate();
    }
    cfg.validate();

    GramianFactors f;
    f.mode = mode;
    if (mode != Mode::BT)
        f.window = window;
    const auto t0 = Clock::now();
    // Reachability and observability solves share nothing mutable.
    auto obs = std::async(std::launch::async, [&] {
        return factor_for(sys, mode, window, gramians::GramianKind::Observability, cfg, method);
    });
    try
    {
        f.p = factor_for(sys, mode, window, gramians::GramianKind::Reachability, cfg, method);
    }
    catch (...)
    {
        obs.wait();
        throw;
    }
    f.q = obs.get();
    f.seconds = elapsed(t0);
    return f;
}

ReducedModel reduce(const model::System& sys, const GramianFactors& f, const OrderSpec& order)
{
    if (order.r < 0 || order.tol < 0.0)
        throw Error(ErrorCode::InvalidArgument, "reduce: order and tolerance must be non-negative");
    Index r = order.r;
    if (order.tol > 0.0)
        r = order_for_tolerance(hankel_sv(sys, f.p.Z, f.q.Z).values, order.tol);

    ReducedModel rom = square_root_reduce(sys, f.p.Z, f.q.Z, r);
    rom.mode = f.mode;
    rom.window = f.window;
    rom.mu_p = f.p.mu;
    rom.mu_q = f.q.mu;
    rom.dim_p = f.p.dim;
    rom.dim_q = f.q.dim;
    rom.rank_p = f.p.rank;
    rom.rank_q = f.q.rank;
    rom.seconds_gramians = f.seconds;
    return rom;
}

ReducedModel reduce(const model::System& sys, Mode mode, const std::optional<gramians::TimeWindow>& window,
                    const OrderSpec& order, const gramians::SolverConfig& cfg, Method method)
{
    if (order.r < 0 || order.tol < 0.0)
        throw Error(ErrorCode::InvalidArgument, "reduce: order and tolerance must be non-negative");
    return reduce(sys, gramian_factors(sys, mode, window, cfg, method), order);
}

CMatrix transfer_at(const model::System& sys, Complex s)
{
    const Matrix& D = model::feedthrough(sys);
    if (model::n_states(sys) == 0)
        return D.cast<Complex>();
    const model::Pencil pencil(sys);
    // (A - sM)^{-1} B = -(sM - A)^{-1} B
    const CMatrix X = pencil.shifted_solve(s, model::input_matrix(sys).cast<Complex>());
    return D.cast<Complex>() - model::output_matrix(sys).cast<Complex>() * X;
}

CMatrix transfer_eval(const model::System& sys, double omega) { return transfer_at(sys, Complex(0.0, omega)); }

CMatrix transfer_eval(const ReducedModel& rom, double omega)
{
    return transfer_eval(model::System(rom.system()), omega);
}

Index numerical_rank(const Matrix& S, double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw Error(ErrorCode::InvalidArgument, "numerical_rank: eps must lie in (0, 1)");
    if (S.size() == 0)
        return 0;
    const Vector ev = linalg::sym_eig(0.5 * (S + S.transpose())).values;
    if (!(ev(0) > 0.0))
        return 0;
    return (ev.array() > eps * ev(0)).count();
}

Index numerical_rank(const gramians::LowRankGramian& g, double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw Error(ErrorCode::InvalidArgument, "numerical_rank: eps must lie in (0, 1)");
    if (g.Z.size() == 0)
        return 0;
    const Vector sv = linalg::svd(g.Z).sigma;
    const Vector ev = sv.cwiseAbs2();
    if (!(ev(0) > 0.0))
        return 0;
    return (ev.array() > eps * ev(0)).count();
}

} // namespace tlbt::reduction
