#include "tlbt/common.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace tlbt
{

std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::SpectrumConflict: return "SpectrumConflict";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::NearDefective: return "NearDefective";
    case ErrorCode::NotControllable: return "NotControllable";
    case ErrorCode::MaxDimExceeded: return "MaxDimExceeded";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::SingularStep: return "SingularStep";
    case ErrorCode::UnstableSystem: return "UnstableSystem";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace
{
std::mutex g_warning_mutex;
WarningHandler g_warning_handler;
} // namespace

void set_warning_handler(WarningHandler handler)
{
    std::lock_guard<std::mutex> lock(g_warning_mutex);
    g_warning_handler = std::move(handler);
}

void warn(std::string_view message)
{
    std::lock_guard<std::mutex> lock(g_warning_mutex);
    if (g_warning_handler)
        g_warning_handler(message);
    else
        std::cerr << "warning: " << message << '\n';
}

Index dense_threshold()
{
    if (const char* env = std::getenv("TLBT_DENSE_THRESHOLD"))
    {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && value > 0)
            return static_cast<Index>(value);
    }
    return 1000;
}

void require_finite(const Matrix& m, std::string_view name)
{
    if (!m.allFinite())
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " contains NaN or Inf");
}

} // namespace tlbt
