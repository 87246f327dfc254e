#ifndef TLBT_TOOLS_CLI_HPP
#define TLBT_TOOLS_CLI_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tlbt/gramians.hpp"
#include "tlbt/reduction.hpp"
#include "tlbt/simulate.hpp"
#include "tlbt/synth.hpp"

namespace tlbt::cli
{

namespace fs = std::filesystem;

/// Bad flags, missing files, inconsistent parameters: exit code 2.
struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

enum class InputKind
{
    Impulse,
    Step,
    File,
    VertstandUstar // preset only
};

struct RunConfig
{
    // system source: a sidecar, or a builtin generator
    std::optional<fs::path> system_path;
    std::string synth_kind = "weakly_damped";
    Index n = 200, m = 2, p = 2;
    std::uint64_t seed = 1;
    std::optional<double> alpha;
    std::string preset;

    std::vector<std::string> modes{"tlbt"};
    double t_s = 0.0;
    std::optional<double> t_e;
    std::vector<Index> orders;
    double tol = 0.0; // H-infinity bound tolerance for order selection
    gramians::SolverConfig solver;
    std::string method = "auto";

    std::optional<double> dt;  // default 0.01
    std::optional<double> t_f; // default 2 t_e
    std::optional<InputKind> input;
    double step_scale = 1.0;
    std::optional<fs::path> input_file;
    std::optional<fs::path> rom_dir;
    std::string gramian_kind = "both";

    fs::path out = "tlbt_out";
};

/// Fills window/step defaults from a named preset (bips, vertstand, rail).
void apply_preset(RunConfig& cfg);

int cmd_gramian(const RunConfig& cfg);
int cmd_reduce(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_compare(const RunConfig& cfg);
int cmd_hsv(const RunConfig& cfg);
int cmd_synth(const RunConfig& cfg);

} // namespace tlbt::cli

#endif
