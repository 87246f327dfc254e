#ifndef TLBT_SYNTH_HPP
#define TLBT_SYNTH_HPP

#include <cstdint>
#include <string>

#include "tlbt/model.hpp"

namespace tlbt::synth
{

enum class Kind
{
    WeaklyDamped, // pairs -alpha_j +- i beta_j, alpha_j = zeta beta_j, beta in [1, 10]
    HeatLike,     // 1D finite elements: SPD mass, symmetric negative definite stiffness
    RandomStable, // dense Gaussian matrix shifted to spectral abscissa -margin
    Scalar        // x' = -x + u, y = x
};

Kind parse_kind(const std::string& s); // weakly_damped, heat_like, random_stable, scalar
std::string to_string(Kind k);

struct Options
{
    double zeta = 0.05;     // weakly damped: damping ratio, so alpha_min = zeta * beta_min
    double beta_min = 1.0;
    double beta_max = 10.0;
    double margin = 0.1;    // random stable: distance of the spectrum from the imaginary axis
};

/// Deterministic for a given seed. n >= 2 except for Scalar (n = 1).
model::System make_synthetic(Kind kind, Index n, Index m, Index p, std::uint64_t seed,
                             const Options& opt = {});

} // namespace tlbt::synth

#endif
