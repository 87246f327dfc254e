#include "tlbt/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tlbt::io
{

namespace
{

using json = nlohmann::json;

struct Header
{
    bool coordinate = true;
    std::string field;    // real, integer, pattern
    std::string symmetry; // general, symmetric, skew-symmetric
};

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(const fs::path& path, const std::string& what)
{
    throw Error(ErrorCode::Io, path.string() + ": " + what);
}

Header parse_header(const fs::path& path, const std::string& line)
{
    std::istringstream in(line);
    std::string banner, object, format, field, symmetry;
    in >> banner >> object >> format >> field >> symmetry;
    if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
        fail(path, "missing %%MatrixMarket matrix banner");
    Header h;
    format = lower(format);
    if (format == "coordinate")
        h.coordinate = true;
    else if (format == "array")
        h.coordinate = false;
    else
        fail(path, "unsupported format '" + format + "'");
    h.field = lower(field);
    if (h.field != "real" && h.field != "integer" && h.field != "pattern")
        fail(path, "unsupported field '" + h.field + "'");
    if (h.field == "pattern" && !h.coordinate)
        fail(path, "pattern field requires coordinate format");
    h.symmetry = lower(symmetry);
    if (h.symmetry != "general" && h.symmetry != "symmetric" && h.symmetry != "skew-symmetric")
        fail(path, "unsupported symmetry '" + h.symmetry + "'");
    return h;
}

double parse_value(const fs::path& path, const std::string& token)
{
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        fail(path, "bad numeric value '" + token + "'");
    return v;
}

// Reads everything into triplets; array files become dense triplets.
void read_triplets(const fs::path& path, Index& rows, Index& cols,
                   std::vector<Eigen::Triplet<double>>& triplets)
{
    std::ifstream in(path);
    if (!in)
        fail(path, "cannot open file");
    std::string line;
    if (!std::getline(in, line))
        fail(path, "empty file");
    const Header h = parse_header(path, line);

    do
    {
        if (!std::getline(in, line))
            fail(path, "missing size line");
    } while (line.empty() || line[0] == '%' ||
             line.find_first_not_of(" \t\r") == std::string::npos);

    std::istringstream size_line(line);
    long long r = -1, c = -1, nnz = -1;
    size_line >> r >> c;
    if (h.coordinate)
        size_line >> nnz;
    if (!size_line || r < 0 || c < 0 || (h.coordinate && nnz < 0))
        fail(path, "bad size line");
    rows = static_cast<Index>(r);
    cols = static_cast<Index>(c);
    if (h.symmetry != "general" && rows != cols)
        fail(path, "symmetric storage requires a square matrix");

    const bool sym = h.symmetry == "symmetric";
    const bool skew = h.symmetry == "skew-symmetric";
    auto push = [&](Index i, Index j, double v) {
        triplets.emplace_back(i, j, v);
        if (i != j && sym)
            triplets.emplace_back(j, i, v);
        else if (i != j && skew)
            triplets.emplace_back(j, i, -v);
    };

    std::string tok;
    auto next_token = [&](std::string& out) -> bool {
        while (in >> out)
        {
            if (out[0] == '%')
            {
                std::getline(in, line);
                continue;
            }
            return true;
        }
        return false;
    };

    if (h.coordinate)
    {
        triplets.reserve(static_cast<size_t>(sym || skew ? 2 * nnz : nnz));
        for (long long k = 0; k < nnz; ++k)
        {
            std::string si, sj;
            if (!next_token(si) || !next_token(sj))
                fail(path, "truncated entry list");
            const long long i = std::stoll(si);
            const long long j = std::stoll(sj);
            if (i < 1 || j < 1 || i > r || j > c)
                fail(path, "entry index out of range");
            double v = 1.0;
            if (h.field != "pattern")
            {
                if (!next_token(tok))
                    fail(path, "truncated entry list");
                v = parse_value(path, tok);
            }
            if (skew && i == j)
                fail(path, "skew-symmetric matrix with diagonal entry");
            push(static_cast<Index>(i - 1), static_cast<Index>(j - 1), v);
        }
    }
    else
    {
        for (Index j = 0; j < cols; ++j)
        {
            const Index first = sym ? j : (skew ? j + 1 : 0);
            for (Index i = first; i < rows; ++i)
            {
                if (!next_token(tok))
                    fail(path, "truncated array data");
                push(i, j, parse_value(path, tok));
            }
        }
    }
    if (next_token(tok))
        fail(path, "trailing data after the declared entries");
}

std::string to_text(const Matrix& m)
{
    std::string out = "%%MatrixMarket matrix array real general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
        {
            out += format_double(m(i, j));
            out += '\n';
        }
    return out;
}

std::string to_text(const Sparse& m)
{
    std::string out = "%%MatrixMarket matrix coordinate real general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
           std::to_string(m.nonZeros()) + "\n";
    for (Index k = 0; k < m.outerSize(); ++k)
        for (Sparse::InnerIterator it(m, k); it; ++it)
        {
            out += std::to_string(it.row() + 1) + " " + std::to_string(it.col() + 1) + " " +
                   format_double(it.value()) + "\n";
        }
    return out;
}

Sparse sparse_block(const Sparse& S, Index r0, Index c0, Index h, Index w)
{
    return S.block(r0, c0, h, w);
}

fs::path resolve(const fs::path& base, const json& matrices, const char* key)
{
    const fs::path rel = matrices.at(key).get<std::string>();
    return rel.is_absolute() ? rel : base / rel;
}

} // namespace

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Sparse read_matrix_market_sparse(const fs::path& path)
{
    Index rows = 0, cols = 0;
    std::vector<Eigen::Triplet<double>> triplets;
    read_triplets(path, rows, cols, triplets);
    Sparse S(rows, cols);
    S.setFromTriplets(triplets.begin(), triplets.end());
    S.makeCompressed();
    return S;
}

Matrix read_matrix_market_dense(const fs::path& path)
{
    Index rows = 0, cols = 0;
    std::vector<Eigen::Triplet<double>> triplets;
    read_triplets(path, rows, cols, triplets);
    Matrix M = Matrix::Zero(rows, cols);
    for (const auto& t : triplets)
        M(t.row(), t.col()) = t.value(); // assignment keeps -0.0 intact
    return M;
}

void write_file_atomic(const fs::path& path, const std::string& contents)
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::Io, tmp.string() + ": cannot open for writing");
        out << contents;
        out.flush();
        if (!out)
            throw Error(ErrorCode::Io, tmp.string() + ": write failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::Io, path.string() + ": rename failed: " + ec.message());
}

void write_matrix_market(const fs::path& path, const Matrix& m) { write_file_atomic(path, to_text(m)); }

void write_matrix_market(const fs::path& path, const Sparse& m) { write_file_atomic(path, to_text(m)); }

LoadedSystem load_system(const fs::path& sidecar)
{
    std::ifstream in(sidecar);
    if (!in)
        throw Error(ErrorCode::Io, sidecar.string() + ": cannot open sidecar");
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorCode::InvalidArgument, sidecar.string() + ": " + e.what());
    }

    const fs::path base = sidecar.parent_path();
    LoadedSystem out;
    try
    {
        out.name = j.value("name", sidecar.stem().string());
        out.type = j.value("type", std::string("standard"));
        out.alpha_shift = j.value("alpha_shift", 0.0);
        out.symmetric = j.value("symmetric", false);
        const json& mats = j.at("matrices");

        Matrix B = read_matrix_market_dense(resolve(base, mats, "B"));
        Matrix C = read_matrix_market_dense(resolve(base, mats, "C"));
        Matrix D = mats.contains("D") ? read_matrix_market_dense(resolve(base, mats, "D"))
                                      : Matrix::Zero(C.rows(), B.cols());

        if (out.type == "standard")
        {
            model::StandardSystem s{read_matrix_market_dense(resolve(base, mats, "A")), B, C, D};
            model::validate(s);
            out.system = model::alpha_shift(s, out.alpha_shift);
        }
        else if (out.type == "generalized")
        {
            model::GeneralizedSystem g;
            g.A = read_matrix_market_sparse(resolve(base, mats, "A"));
            g.M = read_matrix_market_sparse(resolve(base, mats, "M"));
            g.B = B;
            g.C = C;
            g.D = D;
            g.spd_mass = j.value("spd_mass", false);
            model::validate(g);
            out.system = model::alpha_shift(g, out.alpha_shift);
        }
        else if (out.type == "descriptor")
        {
            if (mats.contains("D"))
                throw Error(ErrorCode::InvalidArgument,
                            "descriptor sidecar: D arises from elimination and must not be given");
            const Sparse A = read_matrix_market_sparse(resolve(base, mats, "A"));
            const Sparse M = read_matrix_market_sparse(resolve(base, mats, "M"));
            const Index n = A.rows();
            const Index nf = j.at("n_f").get<Index>();
            if (nf <= 0 || nf > n || A.cols() != n || M.rows() != n || M.cols() != n ||
                B.rows() != n || C.cols() != n)
                throw Error(ErrorCode::InvalidArgument, "descriptor sidecar: inconsistent sizes");
            const Index na = n - nf;
            model::DescriptorIndex1 d;
            d.M1 = sparse_block(M, 0, 0, nf, nf);
            if (Sparse(sparse_block(M, nf, 0, na, n)).norm() != 0.0 ||
                Sparse(sparse_block(M, 0, nf, nf, na)).norm() != 0.0)
                warn("descriptor sidecar: mass entries outside the leading n_f block are ignored");
            d.A1 = sparse_block(A, 0, 0, nf, nf);
            d.A2 = sparse_block(A, 0, nf, nf, na);
            d.A3 = sparse_block(A, nf, 0, na, nf);
            d.A4 = sparse_block(A, nf, nf, na, na);
            d.B1 = B.topRows(nf);
            d.B2 = B.bottomRows(na);
            d.C1 = C.leftCols(nf);
            d.C2 = C.rightCols(na);
            out.system = model::EliminatedSystem(model::alpha_shift(d, out.alpha_shift));
        }
        else
            throw Error(ErrorCode::InvalidArgument, "sidecar: unknown system type '" + out.type + "'");
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorCode::InvalidArgument, sidecar.string() + ": " + e.what());
    }
    return out;
}

namespace
{

void write_sidecar(const fs::path& dir, const std::string& name, const std::string& type,
                   bool with_mass, bool spd_mass)
{
    json j;
    j["name"] = name;
    j["type"] = type;
    j["matrices"] = {{"A", "A.mtx"}, {"B", "B.mtx"}, {"C", "C.mtx"}, {"D", "D.mtx"}};
    if (with_mass)
    {
        j["matrices"]["M"] = "M.mtx";
        j["spd_mass"] = spd_mass;
    }
    j["alpha_shift"] = 0.0;
    write_file_atomic(dir / "system.json", j.dump(2) + "\n");
}

} // namespace

void save_system(const fs::path& dir, const std::string& name, const model::StandardSystem& sys)
{
    fs::create_directories(dir);
    write_matrix_market(dir / "A.mtx", sys.A);
    write_matrix_market(dir / "B.mtx", sys.B);
    write_matrix_market(dir / "C.mtx", sys.C);
    write_matrix_market(dir / "D.mtx", sys.D);
    write_sidecar(dir, name, "standard", false, false);
}

void save_system(const fs::path& dir, const std::string& name, const model::GeneralizedSystem& sys)
{
    fs::create_directories(dir);
    write_matrix_market(dir / "A.mtx", sys.A);
    write_matrix_market(dir / "M.mtx", sys.M);
    write_matrix_market(dir / "B.mtx", sys.B);
    write_matrix_market(dir / "C.mtx", sys.C);
    write_matrix_market(dir / "D.mtx", sys.D);
    write_sidecar(dir, name, "generalized", true, sys.spd_mass);
}

} // namespace tlbt::io
