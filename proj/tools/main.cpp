#include <iostream>

#include "CLI11.hpp"

#include "cli.hpp"

using namespace tlbt;
using namespace tlbt::cli;

namespace
{

const std::map<std::string, InputKind> kInputs{
    {"impulse", InputKind::Impulse}, {"step", InputKind::Step}, {"file", InputKind::File}};

struct Flags
{
    RunConfig cfg;
    std::string system, input;
    std::optional<double> alpha, te, dt, tf;
    std::optional<std::string> input_file, rom;
};

void add_system_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--system", f.system, "JSON sidecar describing the system");
    sub->add_option("--synth", f.cfg.synth_kind, "builtin generator: weakly_damped, heat_like, random_stable, scalar");
    sub->add_option("--n", f.cfg.n, "state dimension for --synth");
    sub->add_option("--m", f.cfg.m, "inputs for --synth");
    sub->add_option("--p", f.cfg.p, "outputs for --synth");
    sub->add_option("--seed", f.cfg.seed, "generator seed");
    sub->add_option("--alpha", f.alpha, "shift A by -alpha M");
    sub->add_option("--preset", f.cfg.preset, "bips, vertstand or rail");
    sub->add_option("--out", f.cfg.out, "output directory");
}

void add_window_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--ts", f.cfg.t_s, "window start");
    sub->add_option("--te", f.te, "window end (default: impulse half-decay time)");
}

void add_solver_flags(CLI::App* sub, Flags& f)
{
    auto& s = f.cfg.solver;
    sub->add_option("--mode", f.cfg.modes, "bt, tlbt, mtlbt (repeat or comma-separate)")->delimiter(',');
    sub->add_option("--tol-f", s.tol_f, "matrix-exponential stopping tolerance");
    sub->add_option("--tol-p", s.tol_p, "Lyapunov residual tolerance");
    sub->add_option("--cadence", s.cadence, "steps between stopping checks");
    sub->add_option("--max-dim", s.max_dim, "largest Krylov basis (0: min(n, 1000))");
    sub->add_option("--method", f.cfg.method, "auto, lowrank or dense");
}

void add_sim_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--dt", f.dt, "time step (default 0.01)");
    sub->add_option("--tf", f.tf, "final time (default 2 t_e)");
    sub->add_option("--input", f.input, "impulse, step or file");
    sub->add_option("--input-file", f.input_file, "CSV with columns t,u1..um");
    sub->add_option("--step-scale", f.cfg.step_scale, "amplitude of the step input");
}

void add_order_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--order", f.cfg.orders, "reduced order(s)")->delimiter(',');
    sub->add_option("--tol", f.cfg.tol, "pick the smallest r with error bound <= tol");
}

RunConfig finish(Flags& f)
{
    RunConfig c = f.cfg;
    if (!f.system.empty())
        c.system_path = f.system;
    c.alpha = f.alpha;
    c.t_e = f.te;
    c.dt = f.dt;
    c.t_f = f.tf;
    if (!f.input.empty())
    {
        const auto it = kInputs.find(f.input);
        if (it == kInputs.end())
            throw ConfigError("--input must be impulse, step or file");
        c.input = it->second;
    }
    if (f.input_file)
        c.input_file = *f.input_file;
    if (f.rom)
        c.rom_dir = *f.rom;
    apply_preset(c);
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time-limited balanced truncation"};
    app.require_subcommand(1);
    Flags f;

    auto* gramian = app.add_subcommand("gramian", "low-rank Gramian factors and convergence traces");
    add_system_flags(gramian, f);
    add_window_flags(gramian, f);
    add_solver_flags(gramian, f);
    gramian->add_option("--kind", f.cfg.gramian_kind, "reach, obs or both");

    auto* reduce = app.add_subcommand("reduce", "reduced-order models");
    add_system_flags(reduce, f);
    add_window_flags(reduce, f);
    add_solver_flags(reduce, f);
    add_order_flags(reduce, f);

    auto* simulate = app.add_subcommand("simulate", "output trajectories by implicit midpoint");
    add_system_flags(simulate, f);
    add_window_flags(simulate, f);
    add_sim_flags(simulate, f);
    simulate->add_option("--rom", f.rom, "reduced-model directory to compare against");

    auto* compare = app.add_subcommand("compare", "relative output error against the full model");
    add_system_flags(compare, f);
    add_window_flags(compare, f);
    add_solver_flags(compare, f);
    add_order_flags(compare, f);
    add_sim_flags(compare, f);

    auto* hsv = app.add_subcommand("hsv", "Hankel singular values");
    add_system_flags(hsv, f);
    add_window_flags(hsv, f);
    add_solver_flags(hsv, f);

    auto* synth = app.add_subcommand("synth", "write a synthetic system to disk");
    add_system_flags(synth, f);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        const RunConfig cfg = finish(f);
        if (*gramian)
            return cmd_gramian(cfg);
        if (*reduce)
            return cmd_reduce(cfg);
        if (*simulate)
            return cmd_simulate(cfg);
        if (*compare)
            return cmd_compare(cfg);
        if (*hsv)
            return cmd_hsv(cfg);
        if (*synth)
            return cmd_synth(cfg);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        const bool config = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::Io;
        return config ? 2 : 3;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
