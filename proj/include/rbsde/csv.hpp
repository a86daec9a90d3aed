#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rbsde {

/// Shortest round-trip decimal form; locale-free, '.' decimal point.
std::string format_double(double v);

/**
 * Deterministic CSV assembly: header row plus cells formatted through
 * format_double, '\n' line endings, no trailing separator.
 */
class CsvBuilder {
  public:
    explicit CsvBuilder(const std::vector<std::string>& header);

    CsvBuilder& cell(double v);
    CsvBuilder& cell(std::int64_t v);
    CsvBuilder& cell(const std::string& v);
    void end_row();

    const std::string& text() const { return text_; }

  private:
    void separator();
    std::string text_;
    std::size_t columns_ = 0;
    std::size_t in_row_ = 0;
};

/// Writes via a temporary file and renames into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace rbsde
