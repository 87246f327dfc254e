#ifndef TLBT_SIMULATE_HPP
#define TLBT_SIMULATE_HPP

#include <functional>
#include <optional>

#include "tlbt/model.hpp"

namespace tlbt::simulate
{

/// Input u(t). Impulses are applied through the initial state, never sampled.
struct InputSignal
{
    enum class Kind
    {
        Impulse,
        Constant,
        Custom
    };

    Kind kind = Kind::Constant;
    Vector v; // impulse direction or constant value
    std::function<Vector(double)> f;

    static InputSignal impulse(Vector v);
    static InputSignal constant(Vector c);
    static InputSignal custom(std::function<Vector(double)> f);

    Vector at(double t, Index m) const; // zero for impulses
};

/// Uniform grid t_k = k dt, k = 0..K; outputs stored one row per time.
struct Trajectory
{
    Vector times;
    Matrix outputs; // K+1 x p
    Matrix states;  // K+1 x n, empty unless requested
    double dt = 0.0;

    Vector output_norms() const; // ||y(t_k)||_2
};

/// (M - dt/2 A) x_{k+1} = (M + dt/2 A) x_k + dt B u(t_k + dt/2),  y_k = C x_k + D u(t_k).
/// Descriptor systems step on the augmented sparse pencil. Throws SingularStep.
Trajectory implicit_midpoint(const model::System& sys, const InputSignal& u, const Vector& x0, double dt,
                             double t_f, bool keep_states = false);

/// Uncontrolled response from M x0 = B v; v defaults to the all-ones vector.
Trajectory impulse_response(const model::System& sys, const Vector& v, double dt, double t_f);
Trajectory impulse_response(const model::System& sys, double dt, double t_f);

/// Input response from x0 = 0.
Trajectory input_response(const model::System& sys, const InputSignal& u, double dt, double t_f);

struct ErrorSeries
{
    Vector E;          // per grid point; +inf where y = 0 but y_r != 0
    double E_T = 0.0;  // max over the window
};

/// E(t) = ||y - y_r||_2 / ||y||_2 and its maximum over [t_lo, t_hi] (whole grid by default).
ErrorSeries relative_error_series(const Trajectory& y, const Trajectory& yr,
                                  std::optional<double> t_lo = std::nullopt,
                                  std::optional<double> t_hi = std::nullopt);

/// Smallest grid time t = k dt with ||e^{At} M^{-1} B||_F <= 1/2 ||M^{-1} B||_F.
/// Dense; throws NoConvergence when the decay is not reached by t_max.
double half_decay_time(const model::System& sys, double dt, double t_max);

/// |y^T x|^2 / (||x||^2 ||y||^2); throws ZeroVector.
double mac(const Vector& x, const Vector& y);
Matrix mac_matrix(const Matrix& X, const Matrix& Y);

} // namespace tlbt::simulate

#endif
