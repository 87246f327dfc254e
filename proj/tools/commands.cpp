#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "report.hpp"
#include "tlbt/io.hpp"

namespace tlbt::cli
{

namespace
{

using gramians::GramianKind;
using gramians::TimeWindow;
using reduction::Mode;

constexpr double kDefaultDt = 0.01;

struct Loaded
{
    model::System sys;
    Json meta;
};

model::System shift_system(const model::System& s, double a)
{
    return std::visit(
        [a](const auto& x) -> model::System {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, model::EliminatedSystem>)
                return model::EliminatedSystem(model::alpha_shift(x.blocks(), a));
            else
                return model::alpha_shift(x, a);
        },
        s);
}

Loaded load(const RunConfig& cfg)
{
    Loaded out;
    if (cfg.system_path)
    {
        if (!fs::exists(*cfg.system_path))
            throw ConfigError("system file not found: " + cfg.system_path->string());
        io::LoadedSystem ls = io::load_system(*cfg.system_path);
        double alpha = ls.alpha_shift;
        out.sys = std::move(ls.system);
        if (cfg.alpha && *cfg.alpha != 0.0)
        {
            if (ls.alpha_shift != 0.0 && ls.alpha_shift != *cfg.alpha)
                throw ConfigError("--alpha conflicts with alpha_shift in the sidecar");
            if (ls.alpha_shift == 0.0)
            {
                out.sys = shift_system(out.sys, *cfg.alpha);
                alpha = *cfg.alpha;
            }
        }
        out.meta["source"] = "file";
        out.meta["path"] = cfg.system_path->string();
        out.meta["name"] = ls.name;
        out.meta["type"] = ls.type;
        out.meta["alpha_shift"] = alpha;
    }
    else
    {
        const synth::Kind kind = synth::parse_kind(cfg.synth_kind);
        out.sys = synth::make_synthetic(kind, cfg.n, cfg.m, cfg.p, cfg.seed);
        if (cfg.alpha && *cfg.alpha != 0.0)
            out.sys = shift_system(out.sys, *cfg.alpha);
        out.meta["source"] = "synth";
        out.meta["kind"] = synth::to_string(kind);
        out.meta["seed"] = cfg.seed;
        out.meta["alpha_shift"] = cfg.alpha.value_or(0.0);
    }
    out.meta["n"] = model::n_states(out.sys);
    out.meta["m"] = model::n_inputs(out.sys);
    out.meta["p"] = model::n_outputs(out.sys);
    return out;
}

std::vector<Mode> modes_of(const RunConfig& cfg)
{
    if (cfg.modes.empty())
        throw ConfigError("empty mode list");
    std::vector<Mode> out;
    for (const auto& m : cfg.modes)
        out.push_back(reduction::parse_mode(m));
    return out;
}

bool any_time_limited(const std::vector<Mode>& modes)
{
    for (Mode m : modes)
        if (m != Mode::BT)
            return true;
    return false;
}

struct Timing
{
    double dt = kDefaultDt;
    double t_f = 0.0;
    TimeWindow window;
    std::string t_e_source = "flag";
};

// t_e defaults to the impulse half-decay time; t_f to 2 t_e.
Timing resolve_timing(const RunConfig& cfg, const model::System& sys, bool need_window)
{
    Timing t;
    t.dt = cfg.dt.value_or(kDefaultDt);
    if (!(t.dt > 0.0))
        throw ConfigError("--dt must be positive");
    double te;
    if (cfg.t_e)
        te = *cfg.t_e;
    else if (need_window)
    {
        if (model::n_states(sys) > dense_threshold())
            throw ConfigError("--te is required above the dense threshold");
        te = simulate::half_decay_time(sys, t.dt, 1e6 * t.dt);
        t.t_e_source = "half_decay";
    }
    else
    {
        te = cfg.t_f.value_or(1.0);
        t.t_e_source = "t_f";
    }
    t.window = TimeWindow{cfg.t_s, te};
    try
    {
        t.window.validate();
    }
    catch (const Error& e)
    {
        throw ConfigError(std::string("invalid time window: ") + e.what());
    }
    t.t_f = cfg.t_f.value_or(2.0 * te);
    if (!(t.t_f > 0.0))
        throw ConfigError("--tf must be positive");
    return t;
}

Json window_json(const std::optional<TimeWindow>& w)
{
    if (!w)
        return Json(nullptr);
    return Json{{"t_s", w->t_s}, {"t_e", w->t_e}};
}

std::optional<TimeWindow> window_for(Mode m, const Timing& t)
{
    if (m == Mode::BT)
        return std::nullopt;
    return t.window;
}

// --- inputs ----------------------------------------------------------------

std::string input_name(InputKind k)
{
    switch (k)
    {
    case InputKind::Impulse: return "impulse";
    case InputKind::Step: return "step";
    case InputKind::File: return "file";
    case InputKind::VertstandUstar: return "vertstand_ustar";
    }
    return "?";
}

// Columns t, u_1..u_m; linear interpolation, held constant outside the table.
std::function<Vector(double)> table_input(const fs::path& path, Index m)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("input file not found: " + path.string());
    std::vector<double> ts;
    std::vector<Vector> us;
    std::string line;
    bool header = true;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        if (header)
        {
            header = false;
            if (line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos)
                continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ','))
        {
            try
            {
                row.push_back(std::stod(cell));
            }
            catch (const std::exception&)
            {
                throw ConfigError("input file: bad number '" + cell + "'");
            }
        }
        if (static_cast<Index>(row.size()) != m + 1)
            throw ConfigError("input file: expected t plus " + std::to_string(m) + " columns");
        if (!ts.empty() && !(row[0] > ts.back()))
            throw ConfigError("input file: times must increase");
        ts.push_back(row[0]);
        us.push_back(Eigen::Map<Vector>(row.data() + 1, m));
    }
    if (ts.empty())
        throw ConfigError("input file has no rows");
    return [ts, us](double t) -> Vector {
        if (t <= ts.front())
            return us.front();
        if (t >= ts.back())
            return us.back();
        const auto it = std::upper_bound(ts.begin(), ts.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - ts.begin());
        const double a = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
        return Vector((1.0 - a) * us[i - 1] + a * us[i]);
    };
}

simulate::InputSignal make_input(const RunConfig& cfg, Index m)
{
    const InputKind kind = cfg.input.value_or(InputKind::Impulse);
    switch (kind)
    {
    case InputKind::Impulse: return simulate::InputSignal::impulse(Vector::Ones(m));
    case InputKind::Step: return simulate::InputSignal::constant(Vector::Constant(m, cfg.step_scale));
    case InputKind::File:
        if (!cfg.input_file)
            throw ConfigError("--input file needs --input-file");
        return simulate::InputSignal::custom(table_input(*cfg.input_file, m));
    case InputKind::VertstandUstar:
        if (m != 6)
            throw ConfigError("the vertstand input needs m = 6");
        return simulate::InputSignal::custom([](double t) {
            Vector u(6);
            const double s = std::sin(t * M_PI / 100.0);
            u << 5e4 * 0.198 * s * s, 4.0, 2.0, 1.0, 3.0, 1.0;
            return u;
        });
    }
    throw ConfigError("unknown input kind");
}

Json input_json(const RunConfig& cfg)
{
    const InputKind kind = cfg.input.value_or(InputKind::Impulse);
    Json j{{"kind", input_name(kind)}};
    if (kind == InputKind::Step)
        j["scale"] = cfg.step_scale;
    if (kind == InputKind::File && cfg.input_file)
        j["file"] = cfg.input_file->string();
    return j;
}

simulate::Trajectory run(const model::System& sys, const simulate::InputSignal& u, double dt, double tf)
{
    if (u.kind == simulate::InputSignal::Kind::Impulse)
        return simulate::impulse_response(sys, u.v, dt, tf);
    return simulate::input_response(sys, u, dt, tf);
}

void save_trajectory(const fs::path& path, const simulate::Trajectory& y)
{
    std::vector<std::string> header{"t"};
    for (Index j = 0; j < y.outputs.cols(); ++j)
        header.push_back("y" + std::to_string(j + 1));
    header.push_back("norm");
    CsvWriter csv(header);
    const Vector norms = y.output_norms();
    for (Index k = 0; k < y.times.size(); ++k)
    {
        std::vector<std::string> row{num(y.times(k))};
        for (Index j = 0; j < y.outputs.cols(); ++j)
            row.push_back(num(y.outputs(k, j)));
        row.push_back(num(norms(k)));
        csv.row(row);
    }
    csv.save(path);
}

void save_errors(const fs::path& path, const simulate::Trajectory& y, const simulate::ErrorSeries& e)
{
    CsvWriter csv({"t", "E"});
    for (Index k = 0; k < y.times.size(); ++k)
        csv.row({num(y.times(k)), num(e.E(k))});
    csv.save(path);
}

// --- reduced models ---------------------------------------------------------

std::string rom_name(Mode m, Index r) { return reduction::to_string(m) + "_r" + std::to_string(r); }

Json rom_json(const reduction::ReducedModel& rom)
{
    Json j;
    j["mode"] = reduction::to_string(rom.mode);
    j["window"] = window_json(rom.window);
    j["r"] = rom.order();
    j["stable"] = rom.stable ? 1 : 0;
    j["sigma"] = vector_json(rom.sigma);
    j["hsv"] = vector_json(rom.hsv);
    j["error_bound"] = reduction::hinf_error_bound(rom.hsv, rom.order());
    j["mu_p"] = rom.mu_p;
    j["mu_q"] = rom.mu_q;
    j["d_p"] = rom.dim_p;
    j["d_q"] = rom.dim_q;
    j["rank_p"] = rom.rank_p;
    j["rank_q"] = rom.rank_q;
    return j;
}

void save_rom(const fs::path& dir, const reduction::ReducedModel& rom, const Json& meta)
{
    fs::create_directories(dir);
    io::write_matrix_market(dir / "A.mtx", rom.A);
    io::write_matrix_market(dir / "B.mtx", rom.B);
    io::write_matrix_market(dir / "C.mtx", rom.C);
    io::write_matrix_market(dir / "D.mtx", rom.D);
    write_json(dir / "metadata.json", meta);
}

model::StandardSystem load_rom(const fs::path& dir)
{
    if (!fs::exists(dir / "A.mtx"))
        throw ConfigError("reduced model not found in " + dir.string());
    model::StandardSystem s;
    s.A = io::read_matrix_market_dense(dir / "A.mtx");
    s.B = io::read_matrix_market_dense(dir / "B.mtx");
    s.C = io::read_matrix_market_dense(dir / "C.mtx");
    s.D = io::read_matrix_market_dense(dir / "D.mtx");
    return s;
}

std::vector<reduction::OrderSpec> order_specs(const RunConfig& cfg)
{
    std::vector<reduction::OrderSpec> out;
    for (Index r : cfg.orders)
    {
        if (r < 0)
            throw ConfigError("--order must be non-negative");
        out.push_back({r, 0.0});
    }
    if (cfg.tol > 0.0)
        out.push_back({0, cfg.tol});
    if (out.empty())
        throw ConfigError("give --order or --tol");
    return out;
}

void trace_csv(const fs::path& path, const gramians::LowRankGramian& g)
{
    CsvWriter csv({"k", "shift_re", "shift_im", "dim", "expm_change", "mu"});
    for (const auto& t : g.trace)
        csv.row({num(t.k), num(t.shift.real()), num(t.shift.imag()), num(t.dim),
                 t.expm_change < 0.0 ? "" : num(t.expm_change), t.mu < 0.0 ? "" : num(t.mu)});
    csv.save(path);
}

void announce(const fs::path& p) { std::cout << "wrote " << p.string() << "\n"; }

} // namespace

void apply_preset(RunConfig& cfg)
{
    if (cfg.preset.empty())
        return;
    if (!cfg.system_path)
        throw ConfigError("preset '" + cfg.preset + "' needs --system with the external benchmark data");
    auto fill = [&](double te, double dt, double tf, Index r) {
        if (!cfg.t_e)
            cfg.t_e = te;
        if (!cfg.dt)
            cfg.dt = dt;
        if (!cfg.t_f)
            cfg.t_f = tf;
        if (cfg.orders.empty() && cfg.tol == 0.0)
            cfg.orders = {r};
    };
    if (cfg.preset == "bips")
    {
        if (!cfg.alpha)
            cfg.alpha = 0.08;
        fill(3.0, 0.04, 20.0, 100);
    }
    else if (cfg.preset == "vertstand")
    {
        fill(300.0, 0.6, 600.0, 20);
        if (!cfg.input)
            cfg.input = InputKind::VertstandUstar;
    }
    else if (cfg.preset == "rail")
        fill(10.0, 0.4, 400.0, 50);
    else
        throw ConfigError("unknown preset '" + cfg.preset + "' (expected bips, vertstand or rail)");
}

int cmd_gramian(const RunConfig& cfg)
{
    const Loaded L = load(cfg);
    const auto modes = modes_of(cfg);
    const Timing tm = resolve_timing(cfg, L.sys, any_time_limited(modes));
    const auto method = reduction::parse_method(cfg.method);
    if (cfg.gramian_kind != "both" && cfg.gramian_kind != "reach" && cfg.gramian_kind != "obs")
        throw ConfigError("--kind must be reach, obs or both");
    fs::create_directories(cfg.out);

    Json summary;
    summary["command"] = "gramian";
    summary["system"] = L.meta;
    summary["solver"] = {{"tol_f", cfg.solver.tol_f}, {"tol_p", cfg.solver.tol_p},
                         {"cadence", cfg.solver.cadence}, {"method", cfg.method}};
    summary["results"] = Json::array();
    Json timings{{"command", "gramian"}, {"results", Json::array()}};

    for (Mode mode : modes)
    {
        const auto w = window_for(mode, tm);
        std::vector<std::pair<GramianKind, gramians::LowRankGramian>> done;
        if (cfg.gramian_kind == "both")
        {
            const auto f = reduction::gramian_factors(L.sys, mode, w, cfg.solver, method);
            done.emplace_back(GramianKind::Reachability, f.p);
            done.emplace_back(GramianKind::Observability, f.q);
        }
        else
        {
            const GramianKind kind = cfg.gramian_kind == "reach" ? GramianKind::Reachability
                                                                 : GramianKind::Observability;
            gramians::LowRankGramian g;
            const auto t0 = std::chrono::steady_clock::now();
            if (method == reduction::Method::Dense)
            {
                Matrix G = mode == Mode::BT    ? gramians::gramian_infinite_dense(L.sys, kind)
                           : mode == Mode::TLBT ? gramians::gramian_timelimited_dense(L.sys, *w, kind)
                                                : gramians::gramian_modified_dense(L.sys, *w, kind);
                g.Z = gramians::psd_factor(G, 0.0);
                g.dim = G.rows();
                g.rank = g.Z.cols();
            }
            else if (mode == Mode::BT)
                g = gramians::solve_infinite_lowrank(L.sys, kind, cfg.solver);
            else if (mode == Mode::TLBT)
                g = gramians::solve_timelimited_lowrank(L.sys, *w, kind, cfg.solver);
            else
                g = gramians::solve_modified_lowrank(L.sys, *w, kind, cfg.solver);
            g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            done.emplace_back(kind, std::move(g));
        }
        for (const auto& [kind, g] : done)
        {
            const std::string tag = reduction::to_string(mode) + (kind == GramianKind::Reachability ? "_P" : "_Q");
            io::write_matrix_market(cfg.out / (tag + ".mtx"), g.Z);
            trace_csv(cfg.out / (tag + "_trace.csv"), g);
            summary["results"].push_back({{"mode", reduction::to_string(mode)},
                                          {"kind", kind == GramianKind::Reachability ? "reachability"
                                                                                      : "observability"},
                                          {"window", window_json(w)},
                                          {"d", g.dim},
                                          {"rank", g.rank},
                                          {"mu", g.mu},
                                          {"seconds", g.seconds},
                                          {"factor", tag + ".mtx"},
                                          {"trace", tag + "_trace.csv"}});
            timings["results"].push_back({{"mode", reduction::to_string(mode)}, {"factor", tag}, {"seconds", g.seconds}});
            std::cout << tag << ": d=" << g.dim << " rank=" << g.rank << " mu=" << num(g.mu) << "\n";
        }
    }
    summary["t_e_source"] = tm.t_e_source;
    write_json(cfg.out / "gramian.json", summary);
    write_json(cfg.out / "timings.json", timings);
    announce(cfg.out / "gramian.json");
    return 0;
}

int cmd_reduce(const RunConfig& cfg)
{
    const Loaded L = load(cfg);
    const auto modes = modes_of(cfg);
    const auto specs = order_specs(cfg);
    const Timing tm = resolve_timing(cfg, L.sys, any_time_limited(modes));
    const auto method = reduction::parse_method(cfg.method);
    fs::create_directories(cfg.out);

    Json summary{{"command", "reduce"}, {"system", L.meta}, {"t_e_source", tm.t_e_source}, {"models", Json::array()}};
    Json timings{{"command", "reduce"}, {"models", Json::array()}};
    for (Mode mode : modes)
    {
        const auto f = reduction::gramian_factors(L.sys, mode, window_for(mode, tm), cfg.solver, method);
        for (const auto& spec : specs)
        {
            const auto rom = reduction::reduce(L.sys, f, spec);
            const std::string name = rom_name(mode, rom.order());
            Json meta = rom_json(rom);
            meta["E_T"] = nullptr; // filled by compare
            save_rom(cfg.out / name, rom, meta);
            summary["models"].push_back({{"name", name},
                                         {"mode", reduction::to_string(mode)},
                                         {"r", rom.order()},
                                         {"stable", rom.stable ? 1 : 0},
                                         {"error_bound", meta["error_bound"]},
                                         {"E_T", nullptr},
                                         {"t_mor", rom.t_mor()}});
            timings["models"].push_back({{"name", name},
                                         {"t_mor", rom.t_mor()},
                                         {"seconds_gramians", rom.seconds_gramians},
                                         {"seconds_reduce", rom.seconds_reduce}});
            std::cout << name << ": stable=" << (rom.stable ? 1 : 0) << " t_mor=" << num(rom.t_mor()) << "\n";
        }
    }
    write_json(cfg.out / "reduce.json", summary);
    write_json(cfg.out / "timings.json", timings);
    announce(cfg.out / "reduce.json");
    return 0;
}

int cmd_simulate(const RunConfig& cfg)
{
    const Loaded L = load(cfg);
    const Timing tm = resolve_timing(cfg, L.sys, false);
    const auto u = make_input(cfg, model::n_inputs(L.sys));
    fs::create_directories(cfg.out);

    const simulate::Trajectory y = run(L.sys, u, tm.dt, tm.t_f);
    save_trajectory(cfg.out / "trajectory.csv", y);
    Json summary{{"command", "simulate"}, {"system", L.meta}, {"input", input_json(cfg)},
                 {"dt", tm.dt},           {"t_f", tm.t_f},    {"steps", y.times.size() - 1}};
    const Vector norms = y.output_norms();
    summary["max_output_norm"] = norms.maxCoeff();
    summary["final_output_norm"] = norms(norms.size() - 1);

    if (cfg.rom_dir)
    {
        const model::StandardSystem rom = load_rom(*cfg.rom_dir);
        if (rom.B.cols() != model::n_inputs(L.sys) || rom.C.rows() != model::n_outputs(L.sys))
            throw ConfigError("reduced model does not match the system's inputs and outputs");
        const simulate::Trajectory yr = run(rom, u, tm.dt, tm.t_f);
        save_trajectory(cfg.out / "trajectory_rom.csv", yr);
        const auto err = simulate::relative_error_series(y, yr, tm.window.t_s, tm.window.t_e);
        save_errors(cfg.out / "errors.csv", y, err);
        summary["rom"] = cfg.rom_dir->string();
        summary["r"] = rom.n();
        summary["window"] = window_json(tm.window);
        summary["E_T"] = err.E_T;
        std::cout << "E_T=" << num(err.E_T) << "\n";
    }
    write_json(cfg.out / "simulate.json", summary);
    announce(cfg.out / "simulate.json");
    return 0;
}

int cmd_compare(const RunConfig& cfg)
{
    const Loaded L = load(cfg);
    const auto modes = modes_of(cfg);
    const auto specs = order_specs(cfg);
    const Timing tm = resolve_timing(cfg, L.sys, true);
    const auto method = reduction::parse_method(cfg.method);
    const auto u = make_input(cfg, model::n_inputs(L.sys));
    fs::create_directories(cfg.out);

    const simulate::Trajectory y = run(L.sys, u, tm.dt, tm.t_f);
    save_trajectory(cfg.out / "y_full.csv", y);

    Json table{{"command", "compare"},
               {"system", L.meta},
               {"window", window_json(tm.window)},
               {"t_e_source", tm.t_e_source},
               {"input", input_json(cfg)},
               {"dt", tm.dt},
               {"t_f", tm.t_f},
               {"rows", Json::array()}};
    Json timings{{"command", "compare"}, {"rows", Json::array()}};
    CsvWriter summary({"mode", "r", "E_T", "stable"});

    for (Mode mode : modes)
    {
        const auto f = reduction::gramian_factors(L.sys, mode, window_for(mode, tm), cfg.solver, method);
        for (const auto& spec : specs)
        {
            const auto rom = reduction::reduce(L.sys, f, spec);
            const std::string name = rom_name(mode, rom.order());
            Json row = rom_json(rom);
            row.erase("sigma");
            row.erase("hsv");
            double ET = std::numeric_limits<double>::infinity();
            try
            {
                const simulate::Trajectory yr = run(rom.system(), u, tm.dt, tm.t_f);
                const auto err = simulate::relative_error_series(y, yr, tm.window.t_s, tm.window.t_e);
                ET = err.E_T;
                save_trajectory(cfg.out / ("y_" + name + ".csv"), yr);
                save_errors(cfg.out / ("E_" + name + ".csv"), y, err);
            }
            catch (const Error& e)
            {
                row["simulation_error"] = e.what();
            }
            row["E_T"] = ET;
            table["rows"].push_back(row);
            summary.row({reduction::to_string(mode), num(rom.order()), num(ET), rom.stable ? "1" : "0"});
            timings["rows"].push_back({{"mode", reduction::to_string(mode)},
                                       {"r", rom.order()},
                                       {"t_mor", rom.t_mor()},
                                       {"seconds_gramians", rom.seconds_gramians},
                                       {"seconds_reduce", rom.seconds_reduce}});
            std::cout << name << ": E_T=" << num(ET) << " stable=" << (rom.stable ? 1 : 0) << "\n";
        }
    }
    summary.save(cfg.out / "E_T_vs_r.csv");
    write_json(cfg.out / "compare.json", table);
    write_json(cfg.out / "timings.json", timings);
    announce(cfg.out / "compare.json");
    return 0;
}

int cmd_hsv(const RunConfig& cfg)
{
    const Loaded L = load(cfg);
    const auto modes = modes_of(cfg);
    const Timing tm = resolve_timing(cfg, L.sys, any_time_limited(modes));
    const auto method = reduction::parse_method(cfg.method);
    fs::create_directories(cfg.out);

    Json summary{{"command", "hsv"}, {"system", L.meta}, {"results", Json::array()}};
    for (Mode mode : modes)
    {
        const auto w = window_for(mode, tm);
        const auto f = reduction::gramian_factors(L.sys, mode, w, cfg.solver, method);
        const reduction::HsvSource src = mode == Mode::BT     ? reduction::HsvSource::Infinite
                                         : mode == Mode::TLBT ? reduction::HsvSource::TimeLimited
                                                              : reduction::HsvSource::Modified;
        const auto rep = reduction::hankel_sv(L.sys, f.p.Z, f.q.Z, src);
        CsvWriter csv({"i", "sigma", "bound"});
        for (Index i = 0; i < rep.values.size(); ++i)
            csv.row({num(i + 1), num(rep.values(i)), num(reduction::hinf_error_bound(rep.values, i + 1))});
        const std::string file = "hsv_" + reduction::to_string(mode) + ".csv";
        csv.save(cfg.out / file);
        summary["results"].push_back({{"mode", reduction::to_string(mode)},
                                      {"source", mode == Mode::BT     ? "infinite"
                                                 : mode == Mode::TLBT ? "time-limited"
                                                                      : "modified"},
                                      {"window", window_json(w)},
                                      {"values", vector_json(rep.values)},
                                      {"file", file}});
        std::cout << reduction::to_string(mode) << ": " << rep.values.size() << " values, sigma_1="
                  << (rep.values.size() ? num(rep.values(0)) : std::string("none")) << "\n";
    }
    write_json(cfg.out / "hsv.json", summary);
    announce(cfg.out / "hsv.json");
    return 0;
}

int cmd_synth(const RunConfig& cfg)
{
    const synth::Kind kind = synth::parse_kind(cfg.synth_kind);
    const model::System sys = synth::make_synthetic(kind, cfg.n, cfg.m, cfg.p, cfg.seed);
    const std::string name = synth::to_string(kind) + "_n" + std::to_string(model::n_states(sys)) + "_s" +
                             std::to_string(cfg.seed);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, model::EliminatedSystem>)
                throw ConfigError("descriptor systems are not generated");
            else
                io::save_system(cfg.out, name, s);
        },
        sys);
    announce(cfg.out / "system.json");
    return 0;
}

} // namespace tlbt::cli
