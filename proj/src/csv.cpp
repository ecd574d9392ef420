#include "kpz1d/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace kpz1d {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(std::ostream& out, std::span<const std::string> header)
    : out_(out), width_(header.size()) {
    if (width_ == 0) throw std::invalid_argument("CSV header must be nonempty");
    row(header);
}

void CsvWriter::row(std::span<const std::string> fields) {
    if (fields.size() != width_)
        throw std::invalid_argument("CSV row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(fields[i]);
    }
    out_ << '\n';
}

} // namespace kpz1d
