#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tlbt/gramians.hpp"
#include "tlbt/model.hpp"
#include "tlbt/reduction.hpp"
#include "tlbt/simulate.hpp"
#include "tlbt/synth.hpp"

namespace py = pybind11;
using namespace tlbt;

namespace
{

using MatrixRef = Eigen::Ref<const Matrix>;

model::System make_system(const Matrix& A, const Matrix& B, const Matrix& C, const std::optional<Matrix>& D,
                          const std::optional<Matrix>& M)
{
    const Matrix Dm = D ? *D : Matrix::Zero(C.rows(), B.cols());
    if (!M)
    {
        model::StandardSystem s{A, B, C, Dm};
        model::validate(s);
        return s;
    }
    model::GeneralizedSystem g;
    g.A = A.sparseView();
    g.M = M->sparseView();
    g.B = B;
    g.C = C;
    g.D = Dm;
    g.spd_mass = M->isApprox(M->transpose()) && Eigen::LLT<Matrix>(*M).info() == Eigen::Success;
    model::validate(g);
    return g;
}

std::optional<gramians::TimeWindow> window(reduction::Mode mode, double t_s, std::optional<double> t_e)
{
    if (mode == reduction::Mode::BT)
        return std::nullopt;
    if (!t_e)
        throw Error(ErrorCode::InvalidArgument, "t_e is required for time-limited modes");
    return gramians::TimeWindow{t_s, *t_e};
}

gramians::SolverConfig solver(double tol_f, double tol_p, int cadence, Index max_dim)
{
    gramians::SolverConfig cfg;
    cfg.tol_f = tol_f;
    cfg.tol_p = tol_p;
    cfg.cadence = cadence;
    cfg.max_dim = max_dim;
    return cfg;
}

py::dict gramian_dict(const gramians::LowRankGramian& g)
{
    py::dict d;
    d["Z"] = g.Z;
    d["mu"] = g.mu;
    d["dim"] = g.dim;
    d["rank"] = g.rank;
    d["seconds"] = g.seconds;
    py::list shifts;
    for (const auto& s : g.shifts)
        shifts.append(s);
    d["shifts"] = shifts;
    return d;
}

py::dict system_dict(const model::System& sys)
{
    py::dict d;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, model::StandardSystem>)
            {
                d["A"] = s.A;
                d["B"] = s.B;
                d["C"] = s.C;
                d["D"] = s.D;
            }
            else if constexpr (std::is_same_v<T, model::GeneralizedSystem>)
            {
                d["A"] = Matrix(s.A);
                d["M"] = Matrix(s.M);
                d["B"] = s.B;
                d["C"] = s.C;
                d["D"] = s.D;
            }
        },
        sys);
    return d;
}

} // namespace

PYBIND11_MODULE(_tlbt, m)
{
    m.doc() = "Time-limited balanced truncation";

    static py::exception<Error> error(m, "TlbtError");
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const Error& e)
        {
            py::set_error(error, e.what());
        }
    });

    m.def(
        "synthetic",
        [](const std::string& kind, Index n, Index mi, Index p, std::uint64_t seed) {
            return system_dict(synth::make_synthetic(synth::parse_kind(kind), n, mi, p, seed));
        },
        py::arg("kind"), py::arg("n"), py::arg("m") = 1, py::arg("p") = 1, py::arg("seed") = 1);

    m.def(
        "gramian",
        [](const Matrix& A, const Matrix& B, const Matrix& C, const std::string& mode, const std::string& kind,
           double t_s, std::optional<double> t_e, std::optional<Matrix> M, double tol_f, double tol_p, int cadence,
           Index max_dim) {
            const auto sys = make_system(A, B, C, std::nullopt, M);
            const auto md = reduction::parse_mode(mode);
            const auto w = window(md, t_s, t_e);
            const auto k = kind == "obs" ? gramians::GramianKind::Observability
                           : kind == "reach"
                               ? gramians::GramianKind::Reachability
                               : throw Error(ErrorCode::InvalidArgument, "kind must be 'reach' or 'obs'");
            const auto cfg = solver(tol_f, tol_p, cadence, max_dim);
            py::gil_scoped_release release;
            gramians::LowRankGramian g;
            if (md == reduction::Mode::BT)
                g = gramians::solve_infinite_lowrank(sys, k, cfg);
            else if (md == reduction::Mode::TLBT)
                g = gramians::solve_timelimited_lowrank(sys, *w, k, cfg);
            else
                g = gramians::solve_modified_lowrank(sys, *w, k, cfg);
            py::gil_scoped_acquire acquire;
            return gramian_dict(g);
        },
        py::arg("A"), py::arg("B"), py::arg("C"), py::arg("mode") = "tlbt", py::arg("kind") = "reach",
        py::arg("t_s") = 0.0, py::arg("t_e") = py::none(), py::arg("M") = py::none(), py::arg("tol_f") = 1e-8,
        py::arg("tol_p") = 1e-8, py::arg("cadence") = 5, py::arg("max_dim") = 0);

    m.def(
        "gramian_dense",
        [](const Matrix& A, const Matrix& B, const Matrix& C, const std::string& mode, const std::string& kind,
           double t_s, std::optional<double> t_e, std::optional<Matrix> M) {
            const auto sys = make_system(A, B, C, std::nullopt, M);
            const auto md = reduction::parse_mode(mode);
            const auto w = window(md, t_s, t_e);
            const auto k = kind == "obs" ? gramians::GramianKind::Observability : gramians::GramianKind::Reachability;
            if (md == reduction::Mode::BT)
                return gramians::gramian_infinite_dense(sys, k);
            if (md == reduction::Mode::TLBT)
                return gramians::gramian_timelimited_dense(sys, *w, k);
            return gramians::gramian_modified_dense(sys, *w, k);
        },
        py::arg("A"), py::arg("B"), py::arg("C"), py::arg("mode") = "tlbt", py::arg("kind") = "reach",
        py::arg("t_s") = 0.0, py::arg("t_e") = py::none(), py::arg("M") = py::none());

    m.def(
        "reduce",
        [](const Matrix& A, const Matrix& B, const Matrix& C, std::optional<Matrix> D, std::optional<Matrix> M,
           const std::string& mode, double t_s, std::optional<double> t_e, Index r, double tol,
           const std::string& method) {
            const auto sys = make_system(A, B, C, D, M);
            const auto md = reduction::parse_mode(mode);
            const auto w = window(md, t_s, t_e);
            const auto meth = reduction::parse_method(method);
            reduction::ReducedModel rom;
            {
                py::gil_scoped_release release;
                rom = reduction::reduce(sys, md, w, {r, tol}, {}, meth);
            }
            py::dict d;
            d["A"] = rom.A;
            d["B"] = rom.B;
            d["C"] = rom.C;
            d["D"] = rom.D;
            d["T"] = rom.T;
            d["S"] = rom.S;
            d["sigma"] = rom.sigma;
            d["hsv"] = rom.hsv;
            d["stable"] = rom.stable;
            d["mu_p"] = rom.mu_p;
            d["mu_q"] = rom.mu_q;
            d["error_bound"] = reduction::hinf_error_bound(rom.hsv, rom.order());
            d["t_mor"] = rom.t_mor();
            return d;
        },
        py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D") = py::none(), py::arg("M") = py::none(),
        py::arg("mode") = "tlbt", py::arg("t_s") = 0.0, py::arg("t_e") = py::none(), py::arg("r") = 0,
        py::arg("tol") = 0.0, py::arg("method") = "auto");

    m.def(
        "impulse_response",
        [](const Matrix& A, const Matrix& B, const Matrix& C, std::optional<Matrix> D, std::optional<Matrix> M,
           std::optional<Vector> v, double dt, double t_f) {
            const auto sys = make_system(A, B, C, D, M);
            const Vector dir = v ? *v : Vector::Ones(B.cols());
            const auto y = simulate::impulse_response(sys, dir, dt, t_f);
            return py::make_tuple(y.times, y.outputs);
        },
        py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D") = py::none(), py::arg("M") = py::none(),
        py::arg("v") = py::none(), py::arg("dt") = 0.01, py::arg("t_f") = 1.0);

    m.def(
        "step_response",
        [](const Matrix& A, const Matrix& B, const Matrix& C, std::optional<Matrix> D, std::optional<Matrix> M,
           double scale, double dt, double t_f) {
            const auto sys = make_system(A, B, C, D, M);
            const auto y = simulate::input_response(
                sys, simulate::InputSignal::constant(Vector::Constant(B.cols(), scale)), dt, t_f);
            return py::make_tuple(y.times, y.outputs);
        },
        py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D") = py::none(), py::arg("M") = py::none(),
        py::arg("scale") = 1.0, py::arg("dt") = 0.01, py::arg("t_f") = 1.0);

    m.def(
        "relative_error",
        [](const Vector& t, const Matrix& y, const Matrix& yr, std::optional<double> lo, std::optional<double> hi) {
            simulate::Trajectory a, b;
            a.times = b.times = t;
            a.outputs = y;
            b.outputs = yr;
            const auto e = simulate::relative_error_series(a, b, lo, hi);
            return py::make_tuple(e.E, e.E_T);
        },
        py::arg("t"), py::arg("y"), py::arg("yr"), py::arg("t_lo") = py::none(), py::arg("t_hi") = py::none());

    m.def(
        "hankel_sv",
        [](const Matrix& Zp, const Matrix& Zq, std::optional<Matrix> M) {
            return reduction::hankel_sv(Zp, Zq, M ? *M : Matrix());
        },
        py::arg("Zp"), py::arg("Zq"), py::arg("M") = py::none());

    m.def(
        "half_decay_time",
        [](const Matrix& A, const Matrix& B, const Matrix& C, std::optional<Matrix> M, double dt, double t_max) {
            return simulate::half_decay_time(make_system(A, B, C, std::nullopt, M), dt, t_max);
        },
        py::arg("A"), py::arg("B"), py::arg("C"), py::arg("M") = py::none(), py::arg("dt") = 0.01,
        py::arg("t_max") = 1e4);
}
