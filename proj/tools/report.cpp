#include "report.hpp"

#include <cmath>

#include "tlbt/io.hpp"

namespace tlbt::cli
{

namespace
{

void emit(const Json& j, std::string& out, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type())
    {
    case Json::value_t::object:
    {
        if (j.empty())
        {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it)
        {
            if (!first)
                out += ",\n";
            first = false;
            out += inner + Json(it.key()).dump() + ": ";
            emit(it.value(), out, indent + 1);
        }
        out += "\n" + pad + "}";
        return;
    }
    case Json::value_t::array:
    {
        if (j.empty())
        {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i)
        {
            if (i)
                out += ",\n";
            out += inner;
            emit(j[i], out, indent + 1);
        }
        out += "\n" + pad + "]";
        return;
    }
    case Json::value_t::number_float:
    {
        const double v = j.get<double>();
        out += std::isfinite(v) ? io::format_double(v) : "null";
        return;
    }
    default: out += j.dump();
    }
}

} // namespace

std::string dump_json(const Json& j)
{
    std::string out;
    emit(j, out, 0);
    out += "\n";
    return out;
}

void write_json(const std::filesystem::path& path, const Json& j) { io::write_file_atomic(path, dump_json(j)); }

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size())
{
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_)
        throw Error(ErrorCode::InvalidArgument, "CsvWriter: wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
            text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::save(const std::filesystem::path& path) const { io::write_file_atomic(path, text_); }

std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return io::format_double(v);
}

std::string num(Index v) { return std::to_string(v); }

Json vector_json(const Vector& v)
{
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

} // namespace tlbt::cli
