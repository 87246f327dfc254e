#include "tlbt/gramians.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "tlbt/linalg.hpp"

namespace tlbt::gramians
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kCandidates = 2000;

// The operator the Krylov iteration runs on, in coordinates where the mass
// matrix has been absorbed.
struct Operator
{
    Index n = 0;
    bool symmetric = false;
    std::function<Matrix(const Matrix&)> apply;
    std::function<CMatrix(Complex, const CMatrix&)> solve; // (Op - sI)^{-1} W
    Matrix start;
    std::function<Matrix(const Matrix&)> map_back;
};

CMatrix apply_split(const std::function<Matrix(const Matrix&)>& f, const CMatrix& W)
{
    const Matrix re = f(W.real());
    if (W.imag().isZero(0.0))
        return re.cast<Complex>();
    CMatrix out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = f(W.imag());
    return out;
}

Operator make_operator(const std::shared_ptr<const model::Pencil>& p, GramianKind kind)
{
    const bool obs = kind == GramianKind::Observability;
    const model::System& sys = p->system();
    Operator op;
    op.n = p->n();
    const Matrix rhs = obs ? Matrix(model::output_matrix(sys).transpose()) : model::input_matrix(sys);

    if (p->cholesky_available())
    {
        // F^{-1} A F^{-T} (or with A^T); identity mass makes F = I
        op.symmetric = p->symmetric();
        op.apply = [p, obs](const Matrix& X) {
            return p->apply_chol_inv(p->apply_A(p->apply_chol_inv_t(X), obs));
        };
        op.solve = [p, obs](Complex s, const CMatrix& W) {
            const CMatrix FW = apply_split([&](const Matrix& X) { return p->apply_chol(X); }, W);
            const CMatrix V = p->shifted_solve(s, FW, obs);
            return apply_split([&](const Matrix& X) { return p->apply_chol_t(X); }, V);
        };
        op.start = p->apply_chol_inv(rhs);
        op.map_back = [p](const Matrix& Z) { return p->apply_chol_inv_t(Z); };
        return op;
    }

    op.symmetric = false;
    if (!obs)
    {
        // M^{-1} A
        op.apply = [p](const Matrix& X) { return p->solve_M(p->apply_A(X)); };
        op.solve = [p](Complex s, const CMatrix& W) {
            const CMatrix MW = apply_split([&](const Matrix& X) { return p->apply_M(X); }, W);
            return p->shifted_solve(s, MW);
        };
        op.start = p->solve_M(rhs);
        op.map_back = [](const Matrix& Z) { return Z; };
    }
    else
    {
        // A^T M^{-T}; the generalized factor is M^{-T} Z
        op.apply = [p](const Matrix& X) { return p->apply_A(p->solve_M(X, true), true); };
        op.solve = [p](Complex s, const CMatrix& W) {
            const CMatrix V = p->shifted_solve(s, W, true);
            return apply_split([&](const Matrix& X) { return p->apply_M(X, true); }, V);
        };
        op.start = rhs;
        op.map_back = [p](const Matrix& Z) { return p->solve_M(Z, true); };
    }
    return op;
}

double log_abs(Complex z) { return std::log(std::max(std::abs(z), std::numeric_limits<double>::min())); }

// Boundary samples of the convex hull of pts (upper half only; pts are
// conjugate-symmetric so the lower half adds nothing).
std::vector<Complex> hull_boundary(std::vector<Complex> pts)
{
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto cross = [](Complex o, Complex a, Complex b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<Complex> hull;
    if (pts.size() < 3)
        hull = pts;
    else
    {
        // Andrew's monotone chain
        std::vector<Complex> h(2 * pts.size());
        size_t k = 0;
        for (const Complex& p : pts)
        {
            while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0)
                --k;
            h[k++] = p;
        }
        for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;)
        {
            while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0)
                --k;
            h[k++] = pts[i];
        }
        h.resize(k - 1);
        hull = h;
    }

    std::vector<Complex> out(hull.begin(), hull.end());
    if (hull.size() < 2)
        return out;
    const size_t edges = hull.size() == 2 ? 1 : hull.size();
    double perimeter = 0.0;
    for (size_t i = 0; i < edges; ++i)
        perimeter += std::abs(hull[(i + 1) % hull.size()] - hull[i]);
    if (perimeter == 0.0)
        return out;
    for (size_t i = 0; i < edges; ++i)
    {
        const Complex a = hull[i];
        const Complex b = hull[(i + 1) % hull.size()];
        const int count = static_cast<int>(std::ceil(kCandidates * std::abs(b - a) / perimeter));
        for (int j = 1; j < count; ++j)
            out.push_back(a + (b - a) * (static_cast<double>(j) / count));
    }
    return out;
}

std::vector<Complex> interval_samples(double lo, double hi)
{
    std::vector<Complex> out;
    out.reserve(kCandidates + 2);
    out.emplace_back(lo, 0.0);
    out.emplace_back(hi, 0.0);
    const bool logarithmic = lo > 0.0;
    for (int j = 1; j < kCandidates - 1; ++j)
    {
        const double f = static_cast<double>(j) / (kCandidates - 1);
        const double x = logarithmic ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
        out.emplace_back(x, 0.0);
    }
    return out;
}

Matrix zero_padded(const Matrix& top, Index rows)
{
    Matrix out = Matrix::Zero(rows, top.cols());
    out.topRows(std::min(rows, top.rows())) = top.topRows(std::min(rows, top.rows()));
    return out;
}

} // namespace

void SolverConfig::validate() const
{
    if (!(tol_f > 0.0 && tol_f < 1.0) || !(tol_p > 0.0 && tol_p < 1.0))
        throw Error(ErrorCode::InvalidArgument, "SolverConfig: tolerances must lie in (0, 1)");
    if (cadence < 1)
        throw Error(ErrorCode::InvalidArgument, "SolverConfig: check cadence must be at least 1");
    if (max_dim < 0)
        throw Error(ErrorCode::InvalidArgument, "SolverConfig: max_dim must be non-negative");
    if (!(trunc_tol >= 0.0 && trunc_tol < 1.0))
        throw Error(ErrorCode::InvalidArgument, "SolverConfig: trunc_tol must lie in [0, 1)");
}

KrylovWorkspace workspace_from_basis(const Matrix& A, const Matrix& Q, const Matrix& B)
{
    KrylovWorkspace ws;
    ws.Q = Q;
    ws.AQ = A * Q;
    ws.H = Q.transpose() * ws.AQ;
    ws.B_proj = Q.transpose() * B;
    ws.beta = ws.B_proj.topRows(std::min(B.cols(), Q.cols()));
    ws.shifts = {Complex(kInf, 0.0)};
    ws.ritz = Q.cols() > 0 ? linalg::gen_eig(ws.H).values : CVector();
    ws.k = 1;
    ws.block_size = B.cols();
    ws.symmetric = (A - A.transpose()).norm() <= 1e-14 * A.norm();
    return ws;
}

Complex adaptive_shift(const CVector& ritz, const std::vector<Complex>& shifts, Index multiplicity,
                       bool symmetric, ShiftRule rule)
{
    if (ritz.size() == 0)
        throw Error(ErrorCode::InvalidArgument, "adaptive_shift: no Ritz values");
    const double m = static_cast<double>(std::max<Index>(multiplicity, 1));

    // Mirror into the closed right half-plane.
    std::vector<Complex> mirrored;
    mirrored.reserve(ritz.size());
    double scale = 0.0;
    for (Index i = 0; i < ritz.size(); ++i)
    {
        const Complex z = ritz(i);
        mirrored.emplace_back(std::abs(z.real()), symmetric ? 0.0 : std::abs(z.imag()));
        scale = std::max(scale, std::abs(z));
    }
    if (scale == 0.0)
        scale = 1.0;

    bool all_real = true;
    for (const Complex& p : mirrored)
        all_real = all_real && std::abs(p.imag()) <= 1e-12 * scale;

    std::vector<Complex> candidates;
    double lo = kInf, hi = 0.0, span = 0.0;
    for (const Complex& p : mirrored)
    {
        lo = std::min(lo, p.real());
        hi = std::max(hi, p.real());
    }
    for (const Complex& p : mirrored)
        span = std::max(span, std::abs(p - mirrored.front()));

    if (span <= 1e-12 * scale)
    {
        // All Ritz values coincide; probe a perturbed neighbourhood instead.
        const Complex p = mirrored.front();
        const Complex centre = std::abs(p) > 0.0 ? p : Complex(1.0, 0.0);
        for (const Complex& c : interval_samples(0.5, 2.0))
            candidates.push_back(centre * c.real());
    }
    else if (symmetric || all_real)
    {
        if (lo <= 0.0)
            lo = 1e-12 * scale;
        candidates = interval_samples(lo, hi);
    }
    else
    {
        std::vector<Complex> pts = mirrored;
        for (const Complex& p : mirrored)
            pts.push_back(std::conj(p));
        for (const Complex& c : hull_boundary(pts))
            if (c.imag() >= 0.0)
                candidates.push_back(c);
    }

    std::vector<Complex> finite;
    for (const Complex& s : shifts)
        if (std::isfinite(s.real()) && std::isfinite(s.imag()))
            finite.push_back(s);

    double best = -kInf;
    Complex best_s = candidates.front();
    bool found = false;
    for (const Complex& c : candidates)
    {
        bool clash = false;
        double poles = 0.0;
        for (const Complex& s : finite)
        {
            const double dist = std::abs(c - s);
            if (dist <= 1e-8 * std::max(std::abs(c), std::abs(s)))
            {
                clash = true;
                break;
            }
            poles += m * std::log(dist);
        }
        if (clash)
            continue;
        double zeros = 0.0;
        for (Index i = 0; i < ritz.size(); ++i)
            zeros += log_abs(c - ritz(i));
        const double value = rule == ShiftRule::Residual ? poles - zeros : zeros - poles;
        if (value > best)
        {
            best = value;
            best_s = c;
            found = true;
        }
    }
    if (!found)
        best_s = candidates.front() * (1.0 + 1e-6);
    if (std::abs(best_s.imag()) <= 1e-12 * std::abs(best_s))
        best_s = Complex(best_s.real(), 0.0);
    return best_s;
}

Complex adaptive_shift(const KrylovWorkspace& ws, ShiftRule rule)
{
    const CVector ritz = ws.ritz.size() == ws.dim() ? ws.ritz : linalg::gen_eig(ws.H).values;
    return adaptive_shift(ritz, ws.shifts, ws.block_size, ws.symmetric, rule);
}

ExpmAction expm_action_approx(const KrylovWorkspace& ws, double t)
{
    if (!(t >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "expm_action_approx: t must be non-negative");
    ExpmAction out;
    if (t == 0.0)
        out.coeff = ws.B_proj;
    else
        out.coeff = linalg::expm(ws.H * t) * ws.B_proj;
    out.lifted = ws.Q * out.coeff;
    return out;
}

Matrix modified_rhs(const KrylovWorkspace& ws, const Matrix& Bhat_te, const Matrix& Bhat_ts)
{
    const Matrix& pos = Bhat_ts.size() == 0 ? ws.B_proj : Bhat_ts;
    const Index d = pos.rows();
    if (Bhat_te.rows() != d)
        throw Error(ErrorCode::InvalidArgument, "modified_rhs: coefficient blocks differ in size");
    Matrix G(d, pos.cols() + Bhat_te.cols());
    G << pos, Bhat_te;
    if (G.norm() == 0.0 || d == 0)
        return Matrix(d, 0);

    // Thin QR keeps the eigenproblem at most 2m x 2m.
    const Index r = std::min(d, G.cols());
    Eigen::HouseholderQR<Matrix> qr(G);
    const Matrix Qg = qr.householderQ() * Matrix::Identity(d, r);
    const Matrix Rg = Qg.transpose() * G;
    Vector signs(G.cols());
    signs.head(pos.cols()).setOnes();
    signs.tail(Bhat_te.cols()).setConstant(-1.0);
    Matrix core = Rg * signs.asDiagonal() * Rg.transpose();
    core = 0.5 * (core + core.transpose());
    const linalg::SymEig e = linalg::sym_eig(core);
    const double top = e.values.cwiseAbs().maxCoeff();
    std::vector<Index> keep;
    for (Index i = 0; i < e.values.size(); ++i)
        if (std::abs(e.values(i)) > 1e-14 * top)
            keep.push_back(i);
    Matrix out(d, static_cast<Index>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j)
        out.col(static_cast<Index>(j)) = Qg * e.vectors.col(keep[j]) * std::sqrt(std::abs(e.values(keep[j])));
    return out;
}

double residual_norm(const KrylovWorkspace& ws, const Matrix& Y, const Matrix& F)
{
    const Index d = ws.dim();
    if (Y.rows() != d || Y.cols() != d || F.rows() != d || F.cols() != d)
        throw Error(ErrorCode::InvalidArgument, "residual_norm: Y and F must match the basis size");
    const Matrix inner = ws.H * Y + Y * ws.H.transpose() + F;
    const double denom = linalg::sym_norm2(0.5 * (F + F.transpose()));

    // A Q - Q H = V Rv with V orthogonal to Q
    Matrix R = ws.AQ - ws.Q * ws.H;
    R -= ws.Q * (ws.Q.transpose() * R);
    double numer;
    if (R.norm() == 0.0 || ws.Q.rows() == d)
        numer = linalg::sym_norm2(0.5 * (inner + inner.transpose()));
    else
    {
        Eigen::HouseholderQR<Matrix> qr(R);
        const Matrix Rv = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
        Matrix core = Matrix::Zero(2 * d, 2 * d);
        core.topLeftCorner(d, d) = inner;
        core.topRightCorner(d, d) = Y * Rv.transpose();
        core.bottomLeftCorner(d, d) = Rv * Y;
        numer = linalg::sym_norm2(0.5 * (core + core.transpose()));
    }
    if (denom == 0.0)
        return numer == 0.0 ? 0.0 : kInf;
    return numer / denom;
}

namespace
{

class KrylovSolver
{
public:
    KrylovSolver(Operator op, RhsType rhs, const TimeWindow& w, const SolverConfig& cfg)
        : op_(std::move(op)), rhs_(rhs), window_(w), cfg_(cfg)
    {
    }

    LowRankGramian run();

private:
    struct Check
    {
        bool converged = false;
        double mu = kInf;
        Matrix Y;
        Matrix te, ts; // lifted expm actions used for F
    };

    void start();
    bool expand(); // false when the basis cannot grow
    Check check(bool forced);
    LowRankGramian finish(const Check& c);

    Operator op_;
    RhsType rhs_;
    TimeWindow window_;
    SolverConfig cfg_;
    Index max_dim_ = 0;
    KrylovWorkspace ws_;
    Matrix last_block_;
    Matrix prev_te_, prev_ts_;
    bool have_prev_ = false;
    double start_norm_ = 0.0;
    std::vector<TraceRow> trace_;
    std::chrono::steady_clock::time_point t0_;
};

void KrylovSolver::start()
{
    const Matrix& B0 = op_.start;
    start_norm_ = B0.norm();
    Eigen::ColPivHouseholderQR<Matrix> qr(B0);
    qr.setThreshold(1e-12);
    const Index rank = qr.rank();
    const Index n = op_.n;
    const Matrix Qfull = qr.householderQ() * Matrix::Identity(n, rank);
    ws_.Q = linalg::orthonormal_extend(Matrix(n, 0), Qfull);
    ws_.beta = ws_.Q.transpose() * B0;
    ws_.B_proj = ws_.beta;
    ws_.AQ = op_.apply(ws_.Q);
    ws_.H = ws_.Q.transpose() * ws_.AQ;
    ws_.shifts = {Complex(kInf, 0.0)};
    ws_.k = 1;
    ws_.block_size = ws_.Q.cols();
    ws_.symmetric = op_.symmetric;
    ws_.ritz = linalg::gen_eig(ws_.H).values;
    last_block_ = ws_.Q;
    trace_.push_back({1, Complex(kInf, 0.0), ws_.dim(), -1.0, -1.0});
}

bool KrylovSolver::expand()
{
    if (ws_.dim() >= max_dim_ || last_block_.cols() == 0)
        return false;

    Complex s = adaptive_shift(ws_.ritz, ws_.shifts, ws_.block_size, ws_.symmetric, cfg_.shift_rule);
    CMatrix G;
    try
    {
        G = op_.solve(s, last_block_.cast<Complex>());
    }
    catch (const Error& e)
    {
        if (e.code() != ErrorCode::SingularShift)
            throw;
        s += 1e-6 * std::max(std::abs(s), 1.0);
        G = op_.solve(s, last_block_.cast<Complex>());
    }
    const bool complex_shift = s.imag() != 0.0;
    Matrix V = G.real();
    if (complex_shift)
    {
        Matrix both(V.rows(), 2 * V.cols());
        both << G.real(), G.imag();
        V = both;
    }

    const Index old_dim = ws_.dim();
    Matrix Q = linalg::orthonormal_extend(ws_.Q, V);
    if (Q.cols() > max_dim_)
        Q.conservativeResize(Eigen::NoChange, max_dim_);
    const Index added = Q.cols() - old_dim;

    ws_.shifts.push_back(s);
    if (complex_shift)
        ws_.shifts.push_back(std::conj(s));
    ws_.k += complex_shift ? 2 : 1;
    if (added == 0)
    {
        last_block_.resize(op_.n, 0);
        return false;
    }

    const Matrix Vnew = Q.rightCols(added);
    const Matrix AV = op_.apply(Vnew);
    const Matrix Qold = ws_.Q;
    Matrix H(old_dim + added, old_dim + added);
    H.topLeftCorner(old_dim, old_dim) = ws_.H;
    H.topRightCorner(old_dim, added) = Qold.transpose() * AV;
    H.bottomLeftCorner(added, old_dim) = Vnew.transpose() * ws_.AQ;
    H.bottomRightCorner(added, added) = Vnew.transpose() * AV;

    Matrix AQ(op_.n, old_dim + added);
    AQ << ws_.AQ, AV;
    ws_.Q = std::move(Q);
    ws_.AQ = std::move(AQ);
    ws_.H = std::move(H);
    ws_.B_proj = zero_padded(ws_.beta, ws_.dim());
    ws_.ritz = linalg::gen_eig(ws_.H).values;
    last_block_ = Vnew.rightCols(std::min(added, ws_.block_size));
    trace_.push_back({ws_.k, s, ws_.dim(), -1.0, -1.0});
    return true;
}

KrylovSolver::Check KrylovSolver::check(bool forced)
{
    Check c;
    const Index d = ws_.dim();
    Matrix F;
    if (rhs_ == RhsType::Infinite)
        F = ws_.B_proj * ws_.B_proj.transpose();
    else
    {
        ExpmAction te, ts;
        try
        {
            te = expm_action_approx(ws_, window_.t_e);
            ts = expm_action_approx(ws_, window_.t_s);
        }
        catch (const Error& e)
        {
            if (e.code() != ErrorCode::Overflow || forced)
                throw;
            have_prev_ = false;
            return c;
        }
        double change = kInf;
        if (have_prev_)
        {
            const double floor = cfg_.tol_f * start_norm_;
            change = (te.lifted - prev_te_).norm() / std::max(te.lifted.norm(), floor);
            if (window_.t_s > 0.0)
                change = std::max(change, (ts.lifted - prev_ts_).norm() / std::max(ts.lifted.norm(), floor));
        }
        prev_te_ = te.lifted;
        prev_ts_ = ts.lifted;
        have_prev_ = true;
        trace_.back().expm_change = std::isfinite(change) ? change : -1.0;
        // An invariant subspace makes the projected action exact.
        if (!(change < cfg_.tol_f) && !forced)
            return c;
        c.te = te.lifted;
        c.ts = ts.lifted;
        if (rhs_ == RhsType::TimeLimited)
            F = ts.coeff * ts.coeff.transpose() - te.coeff * te.coeff.transpose();
        else
        {
            const Matrix Bm = modified_rhs(ws_, te.coeff, ts.coeff);
            F = Bm * Bm.transpose();
        }
    }
    F = 0.5 * (F + F.transpose());
    try
    {
        c.Y = linalg::lyap_dense(ws_.H, F);
    }
    catch (const Error& e)
    {
        if (e.code() != ErrorCode::SpectrumConflict || forced)
            throw;
        return c;
    }
    c.mu = residual_norm(ws_, c.Y, F);
    trace_.back().mu = c.mu;
    c.converged = c.mu <= cfg_.tol_p;
    (void)d;
    return c;
}

LowRankGramian KrylovSolver::finish(const Check& c)
{
    LowRankGramian out;
    out.mu = c.mu;
    out.dim = ws_.dim();
    out.shifts = ws_.shifts;
    out.trace = trace_;

    const linalg::SymEig e = linalg::sym_eig(0.5 * (c.Y + c.Y.transpose()));
    const double top = e.values.size() ? e.values(0) : 0.0;
    Index keep = 0;
    if (top > 0.0)
        while (keep < e.values.size() && e.values(keep) > cfg_.trunc_tol * top && e.values(keep) > 0.0)
            ++keep;
    const Matrix Zstd = ws_.Q * (e.vectors.leftCols(keep) * e.values.head(keep).cwiseSqrt().asDiagonal());
    out.Z = op_.map_back(Zstd);
    out.rank = keep;
    if (c.te.size())
    {
        out.B_te = op_.map_back(c.te);
        out.B_ts = op_.map_back(c.ts);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    return out;
}

LowRankGramian KrylovSolver::run()
{
    t0_ = std::chrono::steady_clock::now();
    const Index n = op_.n;
    max_dim_ = cfg_.max_dim > 0 ? std::min(cfg_.max_dim, n) : std::min<Index>(n, 1000);

    if (op_.start.norm() == 0.0 || n == 0)
    {
        LowRankGramian out;
        out.Z = Matrix(n, 0);
        return out;
    }
    start();

    int since_check = 0;
    bool can_grow = true;
    while (true)
    {
        const bool due = since_check >= cfg_.cadence || !can_grow;
        if (due)
        {
            since_check = 0;
            const Check c = check(!can_grow);
            if (c.converged)
                return finish(c);
            if (!can_grow)
            {
                const bool exhausted = ws_.dim() >= n || last_block_.cols() == 0;
                if (!exhausted)
                    throw Error(ErrorCode::MaxDimExceeded,
                                "rational Krylov: subspace limit " + std::to_string(max_dim_) +
                                    " reached with residual " + std::to_string(c.mu));
                if (c.mu > cfg_.tol_p)
                    warn("rational Krylov: invariant subspace reached with residual " + std::to_string(c.mu));
                return finish(c);
            }
        }
        const Index before = static_cast<Index>(ws_.shifts.size());
        can_grow = expand();
        since_check += static_cast<int>(ws_.shifts.size() - before);
        if (!can_grow)
            since_check = cfg_.cadence;
    }
}

} // namespace

LowRankGramian solve_lowrank(const model::System& sys, RhsType rhs, const TimeWindow& w, GramianKind kind,
                             const SolverConfig& cfg)
{
    cfg.validate();
    if (rhs != RhsType::Infinite)
        w.validate();

    const Index n = model::n_states(sys);
    if (n > 0 && n <= dense_threshold())
    {
        const double abscissa = model::spectral_abscissa(sys);
        if (abscissa >= 0.0)
        {
            warn("low-rank Gramian: system is not asymptotically stable (spectral abscissa " +
                 std::to_string(abscissa) + "); use the dense path");
            throw Error(ErrorCode::UnstableSystem, "low-rank Gramian solve refused for an unstable system");
        }
    }

    auto pencil = std::make_shared<const model::Pencil>(sys);
    KrylovSolver solver(make_operator(pencil, kind), rhs, w, cfg);
    return solver.run();
}

LowRankGramian solve_timelimited_lowrank(const model::System& sys, const TimeWindow& w, GramianKind kind,
                                         const SolverConfig& cfg)
{
    return solve_lowrank(sys, RhsType::TimeLimited, w, kind, cfg);
}

LowRankGramian solve_infinite_lowrank(const model::System& sys, GramianKind kind, const SolverConfig& cfg)
{
    return solve_lowrank(sys, RhsType::Infinite, TimeWindow{}, kind, cfg);
}

LowRankGramian solve_modified_lowrank(const model::System& sys, const TimeWindow& w, GramianKind kind,
                                      const SolverConfig& cfg)
{
    return solve_lowrank(sys, RhsType::Modified, w, kind, cfg);
}

} // namespace tlbt::gramians
