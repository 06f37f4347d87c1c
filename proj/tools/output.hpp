#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace uq::cli {

enum class Format { Human, Csv, Json };

Format parse_format(std::string_view name);

/// Nine significant digits, enough to carry values like 2.760732021 verbatim.
std::string format_number(double x);

using Cell = std::variant<long, double, std::string>;

/// Streams a fixed-column table as aligned text, CSV or a JSON array of
/// objects. Each row is flushed as soon as it is written.
class TableWriter {
public:
    TableWriter(std::ostream& out, Format format, std::vector<std::string> columns);
    ~TableWriter();

    TableWriter(const TableWriter&) = delete;
    TableWriter& operator=(const TableWriter&) = delete;

    void row(const std::vector<Cell>& cells);
    void finish();

private:
    std::ostream& out_;
    Format format_;
    std::vector<std::string> columns_;
    long rows_ = 0;
    bool finished_ = false;
};

}  // namespace uq::cli
