#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kpz1d {

/// Shortest round-trip decimal form of a double (`.` separator, no locale).
std::string format_double(double value);

/// RFC 4180 quoting: wrap in quotes when the field holds `,`, `"` or newline.
std::string csv_escape(const std::string& field);

/** Streams CSV with a mandatory header row written up front. */
class CsvWriter {
  public:
    CsvWriter(std::ostream& out, std::span<const std::string> header);

    void row(std::span<const std::string> fields); ///< must match header width

  private:
    std::ostream& out_;
    std::size_t width_;
};

} // namespace kpz1d
