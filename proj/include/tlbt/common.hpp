#ifndef TLBT_COMMON_HPP
#define TLBT_COMMON_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace tlbt
{

using Index    = Eigen::Index;
using Complex  = std::complex<double>;
using Matrix   = Eigen::MatrixXd;
using CMatrix  = Eigen::MatrixXcd;
using Vector   = Eigen::VectorXd;
using CVector  = Eigen::VectorXcd;
using Sparse   = Eigen::SparseMatrix<double>;
using CSparse  = Eigen::SparseMatrix<Complex>;

enum class ErrorCode
{
    InvalidArgument,
    SingularMatrix,
    NoConvergence,
    Overflow,
    SpectrumConflict,
    SingularBlock,
    SingularShift,
    NotSPD,
    SingularTransform,
    NearDefective,
    NotControllable,
    MaxDimExceeded,
    RankDeficient,
    GridMismatch,
    ZeroVector,
    SingularStep,
    UnstableSystem,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Non-fatal diagnostics (instability notices, HSV ties). Defaults to stderr.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

// Cutoff for dense oracle paths; TLBT_DENSE_THRESHOLD overrides the default 1000.
Index dense_threshold();

// Below this size shifted solves use dense LU instead of sparse LU.
inline constexpr Index kSparseSolveCutoff = 500;

void require_finite(const Matrix& m, std::string_view name);

} // namespace tlbt

#endif
