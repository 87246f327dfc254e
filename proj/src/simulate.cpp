#include "tlbt/simulate.hpp"

#include <cmath>
#include <limits>

#include "tlbt/linalg.hpp"

#include <Eigen/SparseLU>

namespace tlbt::simulate
{

namespace
{

using SparseLU = Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>>;

// Factorized step matrix and explicit half-step for one system.
struct Stepper
{
    std::function<Vector(const Vector&)> solve;     // (M - h/2 A)^{-1} r
    std::function<Vector(const Vector&)> explicit_; // (M + h/2 A) x
};

void check_pivots(const Eigen::PartialPivLU<Matrix>& lu, double norm)
{
    const Vector diag = lu.matrixLU().diagonal().cwiseAbs();
    if (diag.size() > 0 && !(diag.minCoeff() > std::numeric_limits<double>::epsilon() * norm))
        throw Error(ErrorCode::SingularStep, "implicit_midpoint: step matrix is singular");
}

std::shared_ptr<SparseLU> sparse_factor(const Sparse& K)
{
    auto lu = std::make_shared<SparseLU>();
    Sparse Kc = K;
    Kc.makeCompressed();
    lu->compute(Kc);
    if (lu->info() != Eigen::Success)
        throw Error(ErrorCode::SingularStep, "implicit_midpoint: step matrix is singular");
    return lu;
}

Stepper make_stepper(const model::System& sys, double h)
{
    Stepper st;
    if (const auto* s = std::get_if<model::StandardSystem>(&sys))
    {
        const Index n = s->n();
        const Matrix K = Matrix::Identity(n, n) - 0.5 * h * s->A;
        auto lu = std::make_shared<Eigen::PartialPivLU<Matrix>>(K);
        check_pivots(*lu, K.lpNorm<Eigen::Infinity>());
        const Matrix E = Matrix::Identity(n, n) + 0.5 * h * s->A;
        st.solve = [lu](const Vector& r) { return Vector(lu->solve(r)); };
        st.explicit_ = [E](const Vector& x) { return Vector(E * x); };
        return st;
    }
    if (const auto* g = std::get_if<model::GeneralizedSystem>(&sys))
    {
        const Sparse K = g->M - 0.5 * h * g->A;
        const Sparse E = g->M + 0.5 * h * g->A;
        if (g->n() < kSparseSolveCutoff)
        {
            const Matrix Kd = Matrix(K);
            auto lu = std::make_shared<Eigen::PartialPivLU<Matrix>>(Kd);
            check_pivots(*lu, Kd.lpNorm<Eigen::Infinity>());
            st.solve = [lu](const Vector& r) { return Vector(lu->solve(r)); };
        }
        else
        {
            auto lu = sparse_factor(K);
            st.solve = [lu](const Vector& r) { return Vector(lu->solve(r)); };
        }
        st.explicit_ = [E](const Vector& x) { return Vector(E * x); };
        return st;
    }

    // Eliminated descriptor: [M1 - h/2 A1, -h/2 A2; A3, A4] [x; z] = [r; 0]
    const auto& e = std::get<model::EliminatedSystem>(sys);
    const model::DescriptorIndex1& d = e.blocks();
    const Index nf = d.n_f();
    const Index na = d.A4.rows();
    std::vector<Eigen::Triplet<double>> trip;
    auto add = [&](const Sparse& S, double scale, Index r0, Index c0) {
        for (Index k = 0; k < S.outerSize(); ++k)
            for (Sparse::InnerIterator it(S, k); it; ++it)
                trip.emplace_back(it.row() + r0, it.col() + c0, scale * it.value());
    };
    add(d.M1, 1.0, 0, 0);
    add(d.A1, -0.5 * h, 0, 0);
    add(d.A2, -0.5 * h, 0, nf);
    add(d.A3, 1.0, nf, 0);
    add(d.A4, 1.0, nf, nf);
    Sparse K(nf + na, nf + na);
    K.setFromTriplets(trip.begin(), trip.end());
    auto lu = sparse_factor(K);
    st.solve = [lu, nf, na](const Vector& r) {
        Vector rhs = Vector::Zero(nf + na);
        rhs.head(nf) = r;
        return Vector(lu->solve(rhs).head(nf));
    };
    const Sparse M1 = d.M1;
    st.explicit_ = [e, M1, h](const Vector& x) { return Vector(M1 * x + 0.5 * h * e.apply_A(x)); };
    return st;
}

Index step_count(double dt, double t_f)
{
    const double ratio = t_f / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
        return static_cast<Index>(nearest);
    return static_cast<Index>(std::floor(ratio));
}

} // namespace

InputSignal InputSignal::impulse(Vector v)
{
    InputSignal s;
    s.kind = Kind::Impulse;
    s.v = std::move(v);
    return s;
}

InputSignal InputSignal::constant(Vector c)
{
    InputSignal s;
    s.kind = Kind::Constant;
    s.v = std::move(c);
    return s;
}

InputSignal InputSignal::custom(std::function<Vector(double)> f)
{
    InputSignal s;
    s.kind = Kind::Custom;
    s.f = std::move(f);
    return s;
}

Vector InputSignal::at(double t, Index m) const
{
    switch (kind)
    {
    case Kind::Impulse: return Vector::Zero(m);
    case Kind::Constant:
        if (v.size() != m)
            throw Error(ErrorCode::InvalidArgument, "InputSignal: constant input has wrong length");
        return v;
    case Kind::Custom:
    {
        Vector u = f(t);
        if (u.size() != m)
            throw Error(ErrorCode::InvalidArgument, "InputSignal: custom input has wrong length");
        return u;
    }
    }
    return Vector::Zero(m);
}

Vector Trajectory::output_norms() const { return outputs.rowwise().norm(); }

Trajectory implicit_midpoint(const model::System& sys, const InputSignal& u, const Vector& x0, double dt,
                             double t_f, bool keep_states)
{
    if (!(dt > 0.0) || !(t_f >= 0.0) || !std::isfinite(t_f))
        throw Error(ErrorCode::InvalidArgument, "implicit_midpoint: need dt > 0 and finite t_f >= 0");
    const Index n = model::n_states(sys);
    const Index m = model::n_inputs(sys);
    const Index p = model::n_outputs(sys);
    if (x0.size() != n)
        throw Error(ErrorCode::InvalidArgument, "implicit_midpoint: x0 has wrong length");

    const Matrix& B = model::input_matrix(sys);
    const Matrix& C = model::output_matrix(sys);
    const Matrix& D = model::feedthrough(sys);
    const Index K = step_count(dt, t_f);

    Trajectory out;
    out.dt = dt;
    out.times.resize(K + 1);
    out.outputs.resize(K + 1, p);
    if (keep_states)
        out.states.resize(K + 1, n);

    const Stepper st = n > 0 ? make_stepper(sys, dt) : Stepper{};
    const bool has_input = u.kind != InputSignal::Kind::Impulse;
    Vector x = x0;
    for (Index k = 0; k <= K; ++k)
    {
        const double t = static_cast<double>(k) * dt;
        out.times(k) = t;
        Vector y = C * x;
        if (has_input && D.size() > 0)
            y += D * u.at(t, m);
        out.outputs.row(k) = y.transpose();
        if (keep_states)
            out.states.row(k) = x.transpose();
        if (k == K || n == 0)
            continue;
        Vector rhs = st.explicit_(x);
        if (has_input)
            rhs += dt * (B * u.at(t + 0.5 * dt, m));
        x = st.solve(rhs);
        if (!x.allFinite())
            throw Error(ErrorCode::SingularStep, "implicit_midpoint: non-finite state");
    }
    return out;
}

Trajectory impulse_response(const model::System& sys, const Vector& v, double dt, double t_f)
{
    const Index m = model::n_inputs(sys);
    if (v.size() != m)
        throw Error(ErrorCode::InvalidArgument, "impulse_response: v has wrong length");
    const model::Pencil pencil(sys);
    const Vector x0 = pencil.solve_M(model::input_matrix(sys) * v);
    return implicit_midpoint(sys, InputSignal::impulse(v), x0, dt, t_f);
}

Trajectory impulse_response(const model::System& sys, double dt, double t_f)
{
    return impulse_response(sys, Vector::Ones(model::n_inputs(sys)), dt, t_f);
}

Trajectory input_response(const model::System& sys, const InputSignal& u, double dt, double t_f)
{
    return implicit_midpoint(sys, u, Vector::Zero(model::n_states(sys)), dt, t_f);
}

ErrorSeries relative_error_series(const Trajectory& y, const Trajectory& yr, std::optional<double> t_lo,
                                  std::optional<double> t_hi)
{
    if (y.times.size() != yr.times.size() || y.outputs.cols() != yr.outputs.cols() ||
        (y.times - yr.times).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, y.times.cwiseAbs().maxCoeff()))
        throw Error(ErrorCode::GridMismatch, "relative_error_series: trajectories use different grids");
    ErrorSeries out;
    const Index K = y.times.size();
    out.E.resize(K);
    out.E_T = 0.0;
    for (Index k = 0; k < K; ++k)
    {
        const double ny = y.outputs.row(k).norm();
        const double nd = (y.outputs.row(k) - yr.outputs.row(k)).norm();
        double e;
        if (ny <= 1e-300)
            e = nd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        else
            e = nd / ny;
        out.E(k) = e;
        const double t = y.times(k);
        const bool inside = (!t_lo || t >= *t_lo - 1e-12 * std::abs(*t_lo)) &&
                            (!t_hi || t <= *t_hi + 1e-12 * std::abs(*t_hi));
        if (inside)
            out.E_T = std::max(out.E_T, e);
    }
    return out;
}

double half_decay_time(const model::System& sys, double dt, double t_max)
{
    if (!(dt > 0.0) || !(t_max > 0.0))
        throw Error(ErrorCode::InvalidArgument, "half_decay_time: need dt > 0 and t_max > 0");
    const model::DenseRealization d = model::to_dense_standard(sys);
    const Matrix E = linalg::expm(dt * d.system.A);
    Matrix X = d.system.B;
    const double target = 0.5 * X.norm();
    const Index K = step_count(dt, t_max);
    for (Index k = 1; k <= K; ++k)
    {
        X = E * X;
        if (X.norm() <= target)
            return static_cast<double>(k) * dt;
    }
    throw Error(ErrorCode::NoConvergence, "half_decay_time: no half decay before t_max");
}

double mac(const Vector& x, const Vector& y)
{
    if (x.size() != y.size())
        throw Error(ErrorCode::InvalidArgument, "mac: vectors differ in length");
    const double nx = x.squaredNorm();
    const double ny = y.squaredNorm();
    if (nx == 0.0 || ny == 0.0)
        throw Error(ErrorCode::ZeroVector, "mac: zero vector");
    const double dot = y.dot(x);
    return std::min(1.0, dot * dot / (nx * ny));
}

Matrix mac_matrix(const Matrix& X, const Matrix& Y)
{
    Matrix out(X.cols(), Y.cols());
    for (Index i = 0; i < X.cols(); ++i)
        for (Index j = 0; j < Y.cols(); ++j)
            out(i, j) = mac(X.col(i), Y.col(j));
    return out;
}

} // namespace tlbt::simulate
