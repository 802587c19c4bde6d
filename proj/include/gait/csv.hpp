#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gait::csv {

// Splits one record on commas. No quoting: none of the formats in this
// project put commas inside fields.
std::vector<std::string_view> split(std::string_view line);

// Walks a document line by line, tracking 1-based line numbers and
// tolerating a missing trailing newline. Skips nothing; callers decide what
// a header or comment is.
class Lines {
 public:
  explicit Lines(std::string_view text) : rest_(text) {}
  bool next(std::string_view& line);
  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view rest_;
  std::size_t line_no_ = 0;
};

// Shortest decimal string that round-trips the double (std::to_chars).
std::string format_double(double v);

// Strict double/int parsers: whole field must be consumed.
double parse_double(std::string_view field, std::size_t line_no);
long long parse_int(std::string_view field, std::size_t line_no);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace gait::csv
