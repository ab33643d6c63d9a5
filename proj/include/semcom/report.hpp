#ifndef SEMCOM_REPORT_HPP
#define SEMCOM_REPORT_HPP

#include <string>
#include <vector>

namespace semcom {

/// A CSV table held as text cells. Numbers are formatted once, on insertion,
/// so the written bytes depend only on the values.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
  void write(const std::string& path) const;

  /// Column index by name; throws std::out_of_range.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// Shortest round-trip-safe text form ("%.17g" trimmed to the fewest digits that parse back exactly).
std::string format_number(double x);

/// Throws std::invalid_argument for ragged rows or an unreadable file.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

void write_text(const std::string& path, const std::string& content);

/// 16-hex-digit FNV-1a digest, used as a content hash in run reports.
std::string content_hash(const std::string& text);

}  // namespace semcom

#endif  // SEMCOM_REPORT_HPP
