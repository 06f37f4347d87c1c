#include "output.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace uq::cli {

namespace {

constexpr int kHumanWidth = 16;

std::string render(const Cell& cell) {
    if (const auto* v = std::get_if<long>(&cell)) return std::to_string(*v);
    if (const auto* v = std::get_if<double>(&cell)) return format_number(*v);
    return std::get<std::string>(cell);
}

nlohmann::ordered_json to_json(const Cell& cell) {
    if (const auto* v = std::get_if<long>(&cell)) return *v;
    // Round through the text form so JSON and CSV carry the same value.
    if (const auto* v = std::get_if<double>(&cell)) return std::stod(format_number(*v));
    return std::get<std::string>(cell);
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "human") return Format::Human;
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

TableWriter::TableWriter(std::ostream& out, Format format, std::vector<std::string> columns)
    : out_(out), format_(format), columns_(std::move(columns)) {
    switch (format_) {
        case Format::Human:
            for (const auto& c : columns_) out_ << std::left << std::setw(kHumanWidth) << c;
            out_ << '\n';
            break;
        case Format::Csv:
            for (std::size_t k = 0; k < columns_.size(); ++k) out_ << (k ? "," : "") << columns_[k];
            out_ << '\n';
            break;
        case Format::Json:
            out_ << "[";
            break;
    }
    out_.flush();
}

TableWriter::~TableWriter() {
    try {
        finish();
    } catch (...) {
    }
}

void TableWriter::row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("TableWriter: column count mismatch");
    switch (format_) {
        case Format::Human:
            for (const auto& c : cells) out_ << std::left << std::setw(kHumanWidth) << render(c);
            out_ << '\n';
            break;
        case Format::Csv:
            for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << render(cells[k]);
            out_ << '\n';
            break;
        case Format::Json: {
            nlohmann::ordered_json obj;
            for (std::size_t k = 0; k < cells.size(); ++k) obj[columns_[k]] = to_json(cells[k]);
            out_ << (rows_ ? ",\n  " : "\n  ") << obj.dump();
            break;
        }
    }
    ++rows_;
    out_.flush();
}

void TableWriter::finish() {
    if (finished_) return;
    finished_ = true;
    if (format_ == Format::Json) out_ << (rows_ ? "\n]\n" : "]\n");
    out_.flush();
}

}  // namespace uq::cli
