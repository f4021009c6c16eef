#pragma once

#include <string>
#include <utility>
#include <vector>

namespace archprobe {

// 17 significant digits (%.17g); round-trips exactly.
std::string format_double(double v);

// RFC-4180 escaping: quote when the field contains comma, quote, CR or LF;
// embedded quotes doubled.
std::string csv_escape(const std::string& field);

// In-memory CSV with a fixed column count. serialize() emits RFC-4180 with
// CRLF line endings; byte-stable for determinism checks.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  explicit CsvTable(std::vector<std::string> header_cols);
  void add_row(std::vector<std::string> row);
  std::string serialize() const;
};

// Binary-exact file write (no newline translation).
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Sidecar metadata: "key=value\n" per entry, emitted in the given order.
void write_meta_file(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& entries);

// key=value config: '#' starts a comment, blank lines skipped, whitespace
// around key and value trimmed. Later keys override earlier ones.
std::vector<std::pair<std::string, std::string>> parse_keyvalue_config(
    const std::string& text);

}  // namespace archprobe
