#include "tlbt/linalg.hpp"

#include <array>
#include <cmath>

namespace tlbt::linalg
{

namespace
{

// Backward-error bounds on ||A||_1 for each Pade degree (Higham 2005).
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};
constexpr std::array<int, 5> kDegree = {3, 5, 7, 9, 13};

const double* pade_coefficients(int degree)
{
    static constexpr double b3[] = {120., 60., 12., 1.};
    static constexpr double b5[] = {30240., 15120., 3360., 420., 30., 1.};
    static constexpr double b7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    static constexpr double b9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                    2162160.,     110880.,     3960.,       90.,        1.};
    static constexpr double b13[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                     1187353796428800.,  129060195264000.,   10559470521600.,
                                     670442572800.,      33522128640.,       1323241920.,
                                     40840800.,          960960.,            16380.,
                                     182.,               1.};
    switch (degree)
    {
    case 3: return b3;
    case 5: return b5;
    case 7: return b7;
    case 9: return b9;
    default: return b13;
    }
}

Matrix pade(const Matrix& A, int degree)
{
    const Index n = A.rows();
    const double* b = pade_coefficients(degree);
    const Matrix I = Matrix::Identity(n, n);
    const Matrix A2 = A * A;
    Matrix U, V;

    if (degree < 13)
    {
        Matrix power = I; // A^(2j)
        Matrix odd = b[1] * I;
        V = b[0] * I;
        for (int j = 1; 2 * j <= degree; ++j)
        {
            power = power * A2;
            V += b[2 * j] * power;
            odd += b[2 * j + 1] * power;
        }
        U = A * odd;
    }
    else
    {
        const Matrix A4 = A2 * A2;
        const Matrix A6 = A4 * A2;
        U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 +
                 b[1] * I);
        V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 +
            b[0] * I;
    }
    return Eigen::PartialPivLU<Matrix>(V - U).solve(V + U);
}

} // namespace

Matrix expm(const Matrix& A)
{
    if (A.rows() != A.cols())
        throw Error(ErrorCode::InvalidArgument, "expm: matrix is not square");
    require_finite(A, "expm argument");
    const Index n = A.rows();
    if (n == 0)
        return A;

    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    Matrix result;
    for (std::size_t i = 0; i + 1 < kTheta.size(); ++i)
    {
        if (norm1 <= kTheta[i])
        {
            result = pade(A, kDegree[i]);
            if (!result.allFinite())
                throw Error(ErrorCode::Overflow, "expm result is not representable");
            return result;
        }
    }

    int squarings = 0;
    if (norm1 > kTheta.back())
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta.back())));
    const Matrix scaled = A / std::ldexp(1.0, squarings);
    result = pade(scaled, 13);
    for (int s = 0; s < squarings; ++s)
        result = result * result;

    if (!result.allFinite())
        throw Error(ErrorCode::Overflow, "expm result is not representable");
    return result;
}

} // namespace tlbt::linalg
