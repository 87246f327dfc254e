#ifndef TLBT_TOOLS_REPORT_HPP
#define TLBT_TOOLS_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "tlbt/common.hpp"

namespace tlbt::cli
{

using Json = nlohmann::ordered_json;

/// Pretty JSON with every floating-point number at 17 significant digits.
/// Non-finite values become null.
std::string dump_json(const Json& j);

void write_json(const std::filesystem::path& path, const Json& j);

/// CSV with a header row; cells already formatted.
class CsvWriter
{
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    void save(const std::filesystem::path& path) const;

private:
    std::string text_;
    std::size_t columns_;
};

std::string num(double v); // %.17g, "nan"/"inf" spelled out
std::string num(Index v);

Json vector_json(const Vector& v);

} // namespace tlbt::cli

#endif
