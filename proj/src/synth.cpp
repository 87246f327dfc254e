#include "tlbt/synth.hpp"

#include <cmath>
#include <random>

namespace tlbt::synth
{

namespace
{

Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols)
{
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = dist(rng);
    return m;
}

// Haar-distributed orthogonal matrix; signs fixed so the result is unique.
Matrix orthogonal(std::mt19937_64& rng, Index n)
{
    Eigen::HouseholderQR<Matrix> qr(gaussian(rng, n, n));
    Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
        if (R(j, j) < 0.0)
            Q.col(j) = -Q.col(j);
    return Q;
}

model::System weakly_damped(Index n, Index m, Index p, std::mt19937_64& rng, const Options& opt)
{
    const Index pairs = n / 2;
    Matrix A = Matrix::Zero(n, n);
    for (Index j = 0; j < pairs; ++j)
    {
        const double f = pairs > 1 ? static_cast<double>(j) / (pairs - 1) : 0.0;
        const double beta = opt.beta_min + (opt.beta_max - opt.beta_min) * f;
        const double alpha = opt.zeta * beta;
        A(2 * j, 2 * j) = -alpha;
        A(2 * j + 1, 2 * j + 1) = -alpha;
        A(2 * j, 2 * j + 1) = beta;
        A(2 * j + 1, 2 * j) = -beta;
    }
    if (n % 2 == 1)
        A(n - 1, n - 1) = -opt.zeta * opt.beta_max;
    const Matrix U = orthogonal(rng, n);
    model::StandardSystem s;
    s.A = U * A * U.transpose();
    s.B = gaussian(rng, n, m);
    s.C = gaussian(rng, p, n);
    s.D = Matrix::Zero(p, m);
    return s;
}

model::System heat_like(Index n, Index m, Index p, std::mt19937_64& rng)
{
    const double h = 1.0 / static_cast<double>(n + 1);
    std::vector<Eigen::Triplet<double>> mt, kt;
    for (Index i = 0; i < n; ++i)
    {
        mt.emplace_back(i, i, 4.0 * h / 6.0);
        kt.emplace_back(i, i, -2.0 / h);
        if (i + 1 < n)
        {
            mt.emplace_back(i, i + 1, h / 6.0);
            mt.emplace_back(i + 1, i, h / 6.0);
            kt.emplace_back(i, i + 1, 1.0 / h);
            kt.emplace_back(i + 1, i, 1.0 / h);
        }
    }
    model::GeneralizedSystem g;
    g.M.resize(n, n);
    g.M.setFromTriplets(mt.begin(), mt.end());
    g.A.resize(n, n);
    g.A.setFromTriplets(kt.begin(), kt.end());
    g.B = h * gaussian(rng, n, m);
    g.C = gaussian(rng, p, n) / static_cast<double>(n);
    g.D = Matrix::Zero(p, m);
    g.spd_mass = true;
    return g;
}

model::System random_stable(Index n, Index m, Index p, std::mt19937_64& rng, const Options& opt)
{
    const Matrix G = gaussian(rng, n, n) / std::sqrt(static_cast<double>(n));
    model::StandardSystem s;
    s.A = G - (model::spectral_abscissa(G) + opt.margin) * Matrix::Identity(n, n);
    s.B = gaussian(rng, n, m);
    s.C = gaussian(rng, p, n);
    s.D = Matrix::Zero(p, m);
    return s;
}

} // namespace

Kind parse_kind(const std::string& s)
{
    if (s == "weakly_damped")
        return Kind::WeaklyDamped;
    if (s == "heat_like")
        return Kind::HeatLike;
    if (s == "random_stable")
        return Kind::RandomStable;
    if (s == "scalar")
        return Kind::Scalar;
    throw Error(ErrorCode::InvalidArgument, "unknown synthetic kind '" + s + "'");
}

std::string to_string(Kind k)
{
    switch (k)
    {
    case Kind::WeaklyDamped: return "weakly_damped";
    case Kind::HeatLike: return "heat_like";
    case Kind::RandomStable: return "random_stable";
    case Kind::Scalar: return "scalar";
    }
    return "?";
}

model::System make_synthetic(Kind kind, Index n, Index m, Index p, std::uint64_t seed, const Options& opt)
{
    if (m < 1 || p < 1)
        throw Error(ErrorCode::InvalidArgument, "make_synthetic: need m, p >= 1");
    if (kind == Kind::Scalar)
    {
        model::StandardSystem s;
        s.A = Matrix::Constant(1, 1, -1.0);
        s.B = Matrix::Ones(1, m);
        s.C = Matrix::Ones(p, 1);
        s.D = Matrix::Zero(p, m);
        return s;
    }
    if (n < 2)
        throw Error(ErrorCode::InvalidArgument, "make_synthetic: need n >= 2");
    std::mt19937_64 rng(seed);
    switch (kind)
    {
    case Kind::WeaklyDamped: return weakly_damped(n, m, p, rng, opt);
    case Kind::HeatLike: return heat_like(n, m, p, rng);
    case Kind::RandomStable: return random_stable(n, m, p, rng, opt);
    case Kind::Scalar: break;
    }
    throw Error(ErrorCode::InvalidArgument, "make_synthetic: unknown kind");
}

} // namespace tlbt::synth
